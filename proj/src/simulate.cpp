#include "isd/simulate.hpp"

#include <array>
#include <cmath>
#include <numbers>

#include "isd/error.hpp"

namespace isd {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

CounterRng::CounterRng(std::uint64_t seed, std::uint64_t stream)
    : key_(splitmix64(splitmix64(seed) ^ (stream * 0xD1B54A32D192ED03ULL))) {}

std::uint64_t CounterRng::next() { return splitmix64(key_ + (++counter_) * 0x9E3779B97F4A7C15ULL); }

double CounterRng::uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

double CounterRng::uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

double CounterRng::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u1 = uniform();
  while (u1 <= 0.0) u1 = uniform();
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double a = 2.0 * std::numbers::pi * u2;
  spare_ = r * std::sin(a);
  has_spare_ = true;
  return r * std::cos(a);
}

Matrix random_orthogonal(std::size_t p, CounterRng& rng) {
  const auto d = static_cast<Eigen::Index>(p);
  Matrix g(d, d);
  for (Eigen::Index j = 0; j < d; ++j)
    for (Eigen::Index i = 0; i < d; ++i) g(i, j) = rng.normal();
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ() * Matrix::Identity(d, d);
  const Matrix r = qr.matrixQR();
  for (Eigen::Index i = 0; i < d; ++i) {
    if (r(i, i) < 0.0) q.col(i) = -q.col(i);
  }
  return q;
}

Matrix random_orthogonal(std::size_t p, std::uint64_t seed) {
  CounterRng rng(seed, stream_basis);
  return random_orthogonal(p, rng);
}

Matrix random_spd_block(std::size_t dim, CounterRng& rng) {
  const auto d = static_cast<Eigen::Index>(dim);
  Matrix a(d, d);
  for (Eigen::Index j = 0; j < d; ++j)
    for (Eigen::Index i = 0; i < d; ++i) a(i, j) = rng.normal();
  Matrix s = a * a.transpose() + 0.1 * Matrix::Identity(d, d);
  s /= s.diagonal().mean();
  return symmetrize(s);
}

Matrix random_spd_block(std::size_t dim, std::uint64_t seed) {
  CounterRng rng(seed, stream_regimes);
  return random_spd_block(dim, rng);
}

std::size_t GroundTruth::regime_of(std::size_t row) const {
  if (regime_starts.empty()) throw ConfigError("ground truth has no covariance regimes");
  std::size_t r = 0;
  while (r + 1 < regime_starts.size() && regime_starts[r + 1] <= row) ++r;
  return r;
}

const Matrix& GroundTruth::sigma_at(std::size_t row) const { return sigma_regimes.at(regime_of(row)); }

SubspaceSplit oracle_split(const GroundTruth& truth) {
  SubspaceSplit split;
  const auto p = truth.u_true.rows();
  split.u_hat.resize(p, p);
  int next = 0;
  for (int c : truth.inv_columns) {
    split.u_hat.col(next) = truth.u_true.col(c);
    split.inv_columns.push_back(next++);
  }
  for (int c : truth.res_columns) {
    split.u_hat.col(next) = truth.u_true.col(c);
    split.res_columns.push_back(next++);
  }
  split.lambda = 0.0;
  return split;
}

namespace {

// Draws X_t ~ N(0, sigma_at(t)) and Y_t = X_t^T gamma0_t + noise for rows [begin, end).
void draw_rows(const GroundTruth& truth, std::size_t begin, std::size_t end, Matrix& x, Vector& y,
               CounterRng& xrng, CounterRng& erng) {
  const auto p = truth.u_true.rows();
  const double sd = std::sqrt(truth.noise_var);
  std::size_t cached_regime = static_cast<std::size_t>(-1);
  Matrix chol;
  for (std::size_t t = begin; t < end; ++t) {
    const std::size_t r = truth.regime_of(t);
    if (r != cached_regime) {
      chol = Eigen::LLT<Matrix>(truth.sigma_regimes[r]).matrixL();
      cached_regime = r;
    }
    Vector z(p);
    for (Eigen::Index i = 0; i < p; ++i) z(i) = xrng.normal();
    const Vector xt = chol * z;
    const auto row = static_cast<Eigen::Index>(t - begin);
    x.row(row) = xt.transpose();
    y(row) = xt.dot(truth.gamma0_t.row(static_cast<Eigen::Index>(t)).transpose()) + sd * erng.normal();
  }
}

SimulatedData draw_data(GroundTruth truth, std::uint64_t seed) {
  const std::size_t total = static_cast<std::size_t>(truth.gamma0_t.rows());
  const std::size_t n = truth.n_history;
  const auto p = truth.u_true.rows();
  CounterRng xrng(seed, stream_covariates);
  CounterRng erng(seed, stream_noise);
  Matrix xh(static_cast<Eigen::Index>(n), p);
  Vector yh(static_cast<Eigen::Index>(n));
  draw_rows(truth, 0, n, xh, yh, xrng, erng);
  Matrix xt(static_cast<Eigen::Index>(total - n), p);
  Vector yt(static_cast<Eigen::Index>(total - n));
  draw_rows(truth, n, total, xt, yt, xrng, erng);
  SimulatedData out{TimeSeries::make(std::move(xh), std::move(yh), 1),
                    TimeSeries::make(std::move(xt), std::move(yt), static_cast<long>(n) + 1), std::move(truth)};
  return out;
}

// Block-diagonal covariance in the latent coordinates.
Matrix block_diagonal(const std::vector<std::size_t>& dims, CounterRng& rng) {
  std::size_t p = 0;
  for (auto d : dims) p += d;
  Matrix s = Matrix::Zero(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(p));
  Eigen::Index off = 0;
  for (auto d : dims) {
    const auto di = static_cast<Eigen::Index>(d);
    s.block(off, off, di, di) = random_spd_block(d, rng);
    off += di;
  }
  return s;
}

constexpr std::array<std::size_t, 4> kMainDims{2, 4, 3, 1};
constexpr std::array<std::size_t, 3> kMainVarying{1, 2, 10};  // 1-based latent coordinates
constexpr double kMainConstant = 0.2;

bool is_varying(std::size_t i1) {
  for (auto v : kMainVarying)
    if (v == i1) return true;
  return false;
}

struct Segment {
  std::size_t length;
  double value;
};

std::vector<Segment> test_schedule(MainSchedule s) {
  switch (s) {
    case MainSchedule::zero_shot:
      return {{250, -1.0}};
    case MainSchedule::adaptation:
      return {{1000, -0.5}, {1000, -2.0}};
    case MainSchedule::cumulative:
      return {{150, -0.3}, {150, -0.65}, {150, -1.0}};
  }
  throw ConfigError("unknown schedule");
}

// Shared skeleton of gen_main and gen_quick_varying: basis, covariance
// regimes for the history and one fresh regime per test segment.
GroundTruth main_skeleton(const std::string& name, std::size_t n, std::uint64_t seed, const std::vector<Segment>& test,
                          const MainOptions& options) {
  if (n < 100) throw ConfigError(name + ": n must be at least 100");
  if (options.regimes < 1 || options.regimes > n) throw ConfigError(name + ": invalid number of regimes");
  if (!(options.noise_var >= 0.0)) throw ConfigError(name + ": noise variance must be nonnegative");
  const std::size_t p = 10;
  GroundTruth truth;
  truth.generator = name;
  truth.n_history = n;
  truth.seed = seed;
  truth.noise_var = options.noise_var;
  CounterRng brng(seed, stream_basis);
  truth.u_true = random_orthogonal(p, brng);
  CounterRng rrng(seed, stream_regimes);
  const std::vector<std::size_t> dims(kMainDims.begin(), kMainDims.end());
  for (std::size_t r = 0; r < options.regimes; ++r) {
    truth.regime_starts.push_back(r * n / options.regimes);
    truth.sigma_regimes.push_back(symmetrize(truth.u_true * block_diagonal(dims, rrng) * truth.u_true.transpose()));
  }
  std::size_t start = n;
  std::size_t local = 0;
  for (const auto& seg : test) {
    truth.regime_starts.push_back(start);
    truth.sigma_regimes.push_back(symmetrize(truth.u_true * block_diagonal(dims, rrng) * truth.u_true.transpose()));
    truth.test_segments.push_back(Window{local, local + seg.length});
    start += seg.length;
    local += seg.length;
  }
  truth.gamma0_t = Matrix::Zero(static_cast<Eigen::Index>(start), static_cast<Eigen::Index>(p));
  Vector latent_inv = Vector::Zero(static_cast<Eigen::Index>(p));
  for (std::size_t i = 1; i <= p; ++i) {
    if (is_varying(i)) {
      truth.res_columns.push_back(static_cast<int>(i - 1));
    } else {
      truth.inv_columns.push_back(static_cast<int>(i - 1));
      latent_inv(static_cast<Eigen::Index>(i - 1)) = kMainConstant;
    }
  }
  truth.dim_inv = truth.inv_columns.size();
  truth.dim_res = truth.res_columns.size();
  truth.beta_inv_true = truth.u_true * latent_inv;
  return truth;
}

void fill_test_coefficients(GroundTruth& truth, const std::vector<Segment>& test) {
  const auto p = truth.u_true.rows();
  std::size_t row = truth.n_history;
  for (const auto& seg : test) {
    Vector latent(p);
    for (Eigen::Index i = 0; i < p; ++i) latent(i) = is_varying(static_cast<std::size_t>(i + 1)) ? seg.value : kMainConstant;
    const Vector g = truth.u_true * latent;
    for (std::size_t k = 0; k < seg.length; ++k) truth.gamma0_t.row(static_cast<Eigen::Index>(row++)) = g.transpose();
  }
}

}  // namespace

Matrix example2d_rotation() {
  const double r3 = std::sqrt(3.0);
  Matrix u(2, 2);
  u << 0.5 * r3, 0.5, -0.5, 0.5 * r3;
  return u;
}

Matrix example2d_sigma(double s1, double s2) {
  const Matrix u = example2d_rotation();
  Matrix d = Matrix::Zero(2, 2);
  d(0, 0) = s1;
  d(1, 1) = s2;
  return symmetrize(u * d * u.transpose());
}

Vector example2d_gamma(std::size_t t, std::size_t n) {
  const double r3 = std::sqrt(3.0);
  const double s = static_cast<double>(t) / static_cast<double>(n);
  Vector g(2);
  g << 1.5 * r3 + 1.0 - r3 * s, s - 1.5 + r3;
  return g;
}

SimulatedData gen_example2d(std::size_t n, std::uint64_t seed, const Example2dOptions& options) {
  if (n < 4) throw ConfigError("example2d: n must be at least 4");
  if (options.regimes < 1 || options.regimes > n) throw ConfigError("example2d: invalid number of regimes");
  const double r3 = std::sqrt(3.0);
  GroundTruth truth;
  truth.generator = "example2d";
  truth.n_history = n;
  truth.seed = seed;
  truth.noise_var = options.noise_var;
  truth.u_true = example2d_rotation();
  truth.inv_columns = {1};
  truth.res_columns = {0};
  truth.dim_inv = 1;
  truth.dim_res = 1;
  truth.beta_inv_true = Vector(2);
  truth.beta_inv_true << 1.0, r3;

  CounterRng rrng(seed, stream_regimes);
  for (std::size_t r = 0; r < options.regimes; ++r) {
    truth.regime_starts.push_back(r * n / options.regimes);
    const double s1 = rrng.uniform();
    const double s2 = rrng.uniform();
    truth.sigma_regimes.push_back(example2d_sigma(s1, s2));
  }
  const std::size_t T = options.test_length;
  if (T > 0) {
    truth.regime_starts.push_back(n);
    const double s1 = rrng.uniform();
    const double s2 = rrng.uniform();
    truth.sigma_regimes.push_back(example2d_sigma(s1, s2));
    truth.test_segments.push_back(Window{0, T});
  }
  truth.gamma0_t.resize(static_cast<Eigen::Index>(n + T), 2);
  for (std::size_t t = 1; t <= n; ++t) truth.gamma0_t.row(static_cast<Eigen::Index>(t - 1)) = example2d_gamma(t, n).transpose();
  for (std::size_t t = n + 1; t <= n + T; ++t) {
    const double s = static_cast<double>(t - n) / static_cast<double>(T);
    const double w = s * std::pow(std::sin(s + 1.0), 2);
    truth.gamma0_t(static_cast<Eigen::Index>(t - 1), 0) = 1.0 + 0.5 * r3 - 1.5 * r3 * w;
    truth.gamma0_t(static_cast<Eigen::Index>(t - 1), 1) = r3 - 0.5 + 1.5 * w;
  }
  return draw_data(std::move(truth), seed);
}

std::string to_string(MainSchedule s) {
  switch (s) {
    case MainSchedule::zero_shot:
      return "zero_shot";
    case MainSchedule::adaptation:
      return "adaptation";
    case MainSchedule::cumulative:
      return "cumulative";
  }
  return "unknown";
}

MainSchedule main_schedule_from_string(const std::string& s) {
  if (s == "zero_shot") return MainSchedule::zero_shot;
  if (s == "adaptation") return MainSchedule::adaptation;
  if (s == "cumulative") return MainSchedule::cumulative;
  throw ConfigError("unknown schedule '" + s + "' (zero_shot, adaptation, cumulative)");
}

double main_varying_coefficient(std::size_t i, std::size_t t, std::size_t n, MainSchedule schedule) {
  const double s = static_cast<double>(t) / static_cast<double>(n);
  const double di = static_cast<double>(i);
  const double sn = std::sin(di * s + di);
  if (schedule == MainSchedule::cumulative) return 0.5 - s * sn * sn;
  return 1.0 - 1.5 * s * sn * sn;
}

SimulatedData gen_main(std::size_t n, std::uint64_t seed, MainSchedule schedule, const MainOptions& options) {
  const auto test = test_schedule(schedule);
  GroundTruth truth = main_skeleton("main", n, seed, test, options);
  const auto p = truth.u_true.rows();
  for (std::size_t t = 1; t <= n; ++t) {
    Vector latent(p);
    for (Eigen::Index i = 0; i < p; ++i) {
      const auto i1 = static_cast<std::size_t>(i + 1);
      latent(i) = is_varying(i1) ? main_varying_coefficient(i1, t, n, schedule) : kMainConstant;
    }
    truth.gamma0_t.row(static_cast<Eigen::Index>(t - 1)) = (truth.u_true * latent).transpose();
  }
  fill_test_coefficients(truth, test);
  return draw_data(std::move(truth), seed);
}

SimulatedData gen_quick_varying(std::size_t n, std::uint64_t seed, const MainOptions& options) {
  const auto test = test_schedule(MainSchedule::zero_shot);
  GroundTruth truth = main_skeleton("quick_varying", n, seed, test, options);
  const auto p = truth.u_true.rows();
  const std::size_t changes = 20;
  CounterRng crng(seed, stream_coefficients);
  std::array<double, kMainVarying.size()> center{};
  std::size_t segment = static_cast<std::size_t>(-1);
  truth.centers.resize(static_cast<Eigen::Index>(changes), static_cast<Eigen::Index>(kMainVarying.size()));
  for (std::size_t t = 0; t < n; ++t) {
    const std::size_t seg = t * changes / n;
    if (seg != segment) {
      for (std::size_t v = 0; v < center.size(); ++v) {
        center[v] = crng.uniform(0.0, 1.2);
        truth.centers(static_cast<Eigen::Index>(seg), static_cast<Eigen::Index>(v)) = center[v];
      }
      segment = seg;
    }
    Vector latent(p);
    std::size_t v = 0;
    for (Eigen::Index i = 0; i < p; ++i) {
      latent(i) = is_varying(static_cast<std::size_t>(i + 1)) ? crng.uniform(center[v] - 0.5, center[v] + 0.5) : kMainConstant;
      if (is_varying(static_cast<std::size_t>(i + 1))) ++v;
    }
    truth.gamma0_t.row(static_cast<Eigen::Index>(t)) = (truth.u_true * latent).transpose();
  }
  fill_test_coefficients(truth, test);
  return draw_data(std::move(truth), seed);
}

}  // namespace isd
