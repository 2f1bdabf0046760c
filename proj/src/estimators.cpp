#include "isd/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "isd/ajd.hpp"
#include "isd/error.hpp"

namespace isd {

std::string to_string(InterceptMode mode) { return mode == InterceptMode::constant ? "constant" : "adaptive"; }

InterceptMode intercept_mode_from_string(const std::string& s) {
  if (s == "constant") return InterceptMode::constant;
  if (s == "adaptive") return InterceptMode::adaptive;
  throw ConfigError("unknown intercept mode '" + s + "'");
}

double IsdModel::zero_shot_intercept() const {
  if (intercept_mode == InterceptMode::constant) return gamma0;
  return pooled.mean_y - pooled.mean_x.dot(beta_inv);
}

namespace {

// u (u^T g u)^{-1} u^T c for a Gram-like g.
Vector restricted_solve(const Matrix& u, const Matrix& g, const Vector& c, const char* what) {
  if (u.cols() == 0) return Vector::Zero(u.rows());
  const Matrix reduced = symmetrize(u.transpose() * g * u);
  try {
    return u * solve_spd(reduced, Vector(u.transpose() * c));
  } catch (const NumericalError&) {
    throw NumericalError(std::string(what) + ": reduced Gram matrix is singular");
  }
}

bool projection_constant(const Matrix& proj, std::span<const Vector> gammas, double tol) {
  double scale = 0.0;
  for (const Vector& g : gammas) scale = std::max(scale, g.lpNorm<Eigen::Infinity>());
  const Vector first = proj * gammas[0];
  for (const Vector& g : gammas) {
    if ((proj * g - first).lpNorm<Eigen::Infinity>() > tol * (1.0 + scale)) return false;
  }
  return true;
}

}  // namespace

PopulationIsd population_isd(std::span<const Matrix> sigmas, std::span<const Vector> gammas, double const_tol) {
  if (sigmas.empty() || sigmas.size() != gammas.size()) {
    throw ConfigError("population_isd: need equally many covariances and coefficient vectors");
  }
  const auto p = sigmas[0].rows();
  for (std::size_t t = 0; t < sigmas.size(); ++t) {
    if (sigmas[t].rows() != p || sigmas[t].cols() != p || gammas[t].size() != p) {
      throw ConfigError("population_isd: shape mismatch at index " + std::to_string(t));
    }
    if (!is_symmetric(sigmas[t], 1e-10) || lambda_min(sigmas[t]) <= 0.0) {
      throw NumericalError("population_isd: covariance " + std::to_string(t) + " is not SPD");
    }
  }

  PopulationIsd out;
  const Diagonalizer diag = uwedge(sigmas);
  out.blocks = select_blocks(diag, sigmas);
  const Matrix basis = orthonormal_block_basis(out.blocks);
  std::vector<bool> invariant;
  for (std::size_t j = 0; j < out.blocks.blocks.size(); ++j) {
    Matrix u(p, static_cast<Eigen::Index>(out.blocks.blocks[j].size()));
    for (std::size_t c = 0; c < out.blocks.blocks[j].size(); ++c) u.col(static_cast<Eigen::Index>(c)) = basis.col(out.blocks.blocks[j][c]);
    invariant.push_back(projection_constant(u * u.transpose(), gammas, const_tol));
  }
  out.split = make_split(out.blocks, basis, invariant, 0.0);

  Matrix sigma_bar = Matrix::Zero(p, p);
  Vector cov_bar = Vector::Zero(p);
  for (std::size_t t = 0; t < sigmas.size(); ++t) {
    sigma_bar += sigmas[t];
    cov_bar += sigmas[t] * gammas[t];
  }
  const double n = static_cast<double>(sigmas.size());
  sigma_bar /= n;
  cov_bar /= n;
  out.beta_inv = restricted_solve(out.split.u_inv(), sigma_bar, cov_bar, "population_isd");
  const Matrix& sn = sigmas.back();
  out.delta_res_n = restricted_solve(out.split.u_res(), sn, Vector(sn * (gammas.back() - out.beta_inv)),
                                     "population_isd");
  return out;
}

IsdModel fit_invariant(const TimeSeries& ts, const SubspaceSplit& split, std::span<const WindowMoments> moments,
                       const InterceptOptions& options) {
  if (static_cast<std::size_t>(split.u_hat.rows()) != ts.p()) throw ConfigError("fit_invariant: split dimension differs from data");
  if (ts.n() < split.dim_inv() + 2) throw UnderdeterminedError("fit_invariant: fewer than dim_inv + 2 observations");
  IsdModel model;
  model.split = split;
  model.pooled = pooled_moments(ts);
  model.beta_inv = restricted_solve(split.u_inv(), model.pooled.var_x_bar, model.pooled.cov_xy_bar, "fit_invariant");

  if (moments.empty()) {
    model.intercept_mode = InterceptMode::adaptive;
    model.gamma0 = model.zero_shot_intercept();
    return model;
  }
  double mean = 0.0;
  for (const auto& m : moments) mean += m.gamma0_hat;
  mean /= static_cast<double>(moments.size());
  double ss = 0.0;
  for (const auto& m : moments) ss += (m.gamma0_hat - mean) * (m.gamma0_hat - mean);
  const double sd = moments.size() > 1 ? std::sqrt(ss / static_cast<double>(moments.size() - 1)) : 0.0;
  model.gamma0 = mean;
  model.intercept_mode = sd <= options.rel_tol * (1.0 + std::abs(mean)) ? InterceptMode::constant : InterceptMode::adaptive;
  return model;
}

AdaptationFit fit_adaptation(const TimeSeries& adapt, const IsdModel& model) {
  const std::size_t m = adapt.n();
  const std::size_t p = adapt.p();
  if (static_cast<std::size_t>(model.beta_inv.size()) != p) throw ConfigError("fit_adaptation: model dimension differs from data");
  const std::size_t dim_res = model.split.dim_res();
  AdaptationFit fit;
  fit.window = Window{static_cast<std::size_t>(std::max(0L, adapt.t0 - 1)), static_cast<std::size_t>(std::max(0L, adapt.t0 - 1)) + m};

  const Vector r = adapt.y - adapt.x * model.beta_inv;
  const Vector mean_x = adapt.x.colwise().mean().transpose();
  const double mean_r = r.mean();
  if (dim_res == 0) {
    fit.delta_res = Vector::Zero(static_cast<Eigen::Index>(p));
  } else {
    if (m <= dim_res) {
      throw UnderdeterminedError("fit_adaptation: " + std::to_string(m) + " observations for a residual space of dimension " +
                                 std::to_string(dim_res));
    }
    if (m < dim_res + 2) {
      throw UnderdeterminedError("fit_adaptation: need at least dim_res + 2 = " + std::to_string(dim_res + 2) +
                                 " observations, got " + std::to_string(m));
    }
    const Matrix xc = adapt.x.rowwise() - mean_x.transpose();
    const Vector rc = r.array() - mean_r;
    fit.delta_res = restricted_solve(model.split.u_res(), xc.transpose() * xc, Vector(xc.transpose() * rc), "fit_adaptation");
  }
  fit.gamma_isd = model.beta_inv + fit.delta_res;
  fit.intercept = model.intercept_mode == InterceptMode::constant ? model.gamma0 : mean_r - mean_x.dot(fit.delta_res);
  return fit;
}

double predict(const Vector& coeffs, double intercept, const Vector& x) {
  if (coeffs.size() != x.size()) throw ConfigError("predict: coefficient and covariate lengths differ");
  return intercept + x.dot(coeffs);
}

OlsFit pooled_ols(const TimeSeries& ts) { return ols_with_intercept(ts.x, ts.y); }

OlsFit rolling_ols(const TimeSeries& adapt) {
  if (adapt.n() <= adapt.p()) {
    throw UnderdeterminedError("rolling_ols: " + std::to_string(adapt.n()) + " observations for " +
                               std::to_string(adapt.p()) + " coefficients plus intercept");
  }
  return ols_with_intercept(adapt.x, adapt.y);
}

Vector project_simplex(const Vector& v) {
  const auto k = v.size();
  std::vector<double> u(v.data(), v.data() + k);
  std::sort(u.begin(), u.end(), std::greater<>());
  double cumsum = 0.0;
  double theta = 0.0;
  for (Eigen::Index i = 0; i < k; ++i) {
    cumsum += u[static_cast<std::size_t>(i)];
    const double t = (cumsum - 1.0) / static_cast<double>(i + 1);
    if (u[static_cast<std::size_t>(i)] - t > 0.0) theta = t;
  }
  return (v.array() - theta).max(0.0);
}

MaggingResult magging_solve(std::span<const Vector> gammas, const Matrix& pooled_var) {
  if (gammas.empty()) throw ConfigError("magging: no coefficient vectors");
  const auto p = pooled_var.rows();
  const auto K = static_cast<Eigen::Index>(gammas.size());
  Matrix b(p, K);
  for (Eigen::Index k = 0; k < K; ++k) {
    if (gammas[static_cast<std::size_t>(k)].size() != p) throw ConfigError("magging: dimension mismatch");
    b.col(k) = gammas[static_cast<std::size_t>(k)];
  }
  const Matrix h = symmetrize(b.transpose() * pooled_var * b);
  MaggingResult out;
  Vector w = Vector::Constant(K, 1.0 / static_cast<double>(K));
  const double lip = std::max(sym_eig(h).values(0), 0.0);
  auto gap_of = [&](const Vector& x) {
    const Vector g = h * x;
    return x.dot(g) - g.minCoeff();
  };
  if (K > 1 && lip > 0.0) {
    // accelerated projected gradient with fixed step 1/L
    Vector y = w;
    double tk = 1.0;
    for (int it = 0; it < 10000; ++it) {
      const Vector next = project_simplex(y - (h * y) / lip);
      const double tn = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * tk * tk));
      y = next + ((tk - 1.0) / tn) * (next - w);
      w = next;
      tk = tn;
      out.iterations = it + 1;
      if (gap_of(w) <= 1e-8) break;
    }
  }
  out.weights = w;
  out.kkt_gap = gap_of(w);
  out.beta = b * w;
  return out;
}

Vector magging(std::span<const Vector> gammas, const Matrix& pooled_var) { return magging_solve(gammas, pooled_var).beta; }

}  // namespace isd
