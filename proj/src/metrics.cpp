#include "isd/metrics.hpp"

#include <cmath>

#include "isd/error.hpp"
#include "isd/simulate.hpp"

namespace isd {

double r_squared(const Vector& coeffs, double intercept, const TimeSeries& ts, const WindowPlan& plan) {
  if (static_cast<std::size_t>(coeffs.size()) != ts.p()) throw ConfigError("r_squared: coefficient length differs from p");
  if (plan.windows.empty()) throw ConfigError("r_squared: empty window plan");
  double num = 0.0;
  double den = 0.0;
  for (const Window& w : plan.windows) {
    if (w.end > ts.n() || w.length() < 2) throw ConfigError("r_squared: window out of range or shorter than 2");
    const auto s = static_cast<Eigen::Index>(w.start);
    const auto len = static_cast<Eigen::Index>(w.length());
    const Vector y = ts.y.segment(s, len);
    const Vector r = (y - ts.x.middleRows(s, len) * coeffs).array() - intercept;
    const double dof = static_cast<double>(len - 1);
    const double var_y = (y.array() - y.mean()).square().sum() / dof;
    const double var_r = (r.array() - r.mean()).square().sum() / dof;
    num += var_y - var_r;
    den += var_y;
  }
  if (!(den > 0.0)) throw NumericalError("r_squared: zero total response variance");
  return num / den;
}

double population_delta_var(const Vector& beta, const Matrix& sigma, const Vector& gamma0) {
  return 2.0 * gamma0.dot(sigma * beta) - beta.dot(sigma * beta);
}

double mspe(const Vector& gamma_hat, const Vector& gamma0, const Matrix& sigma) {
  if (gamma_hat.size() != gamma0.size() || sigma.rows() != gamma0.size() || sigma.cols() != gamma0.size()) {
    throw ConfigError("mspe: shape mismatch");
  }
  const Vector e = gamma_hat - gamma0;
  return e.dot(sigma * e);
}

McEstimate mc_summary(const std::vector<double>& values) {
  McEstimate out;
  out.draws = values.size();
  if (values.empty()) return out;
  double sum = 0.0;
  for (double v : values) sum += v;
  out.mean = sum / static_cast<double>(values.size());
  if (values.size() > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - out.mean) * (v - out.mean);
    out.se = std::sqrt(ss / static_cast<double>(values.size() - 1) / static_cast<double>(values.size()));
  }
  return out;
}

McEstimate mspe_mc(const Vector& gamma_hat, const Vector& gamma0, const Matrix& sigma, std::size_t reps,
                   std::uint64_t seed) {
  if (reps == 0) throw ConfigError("mspe_mc: reps must be positive");
  mspe(gamma_hat, gamma0, sigma);  // shape check
  const Matrix l = Eigen::LLT<Matrix>(sigma).matrixL();
  const Vector e = gamma_hat - gamma0;
  CounterRng rng(seed, stream_covariates);
  std::vector<double> draws(reps);
  Vector z(sigma.rows());
  for (std::size_t r = 0; r < reps; ++r) {
    for (Eigen::Index i = 0; i < z.size(); ++i) z(i) = rng.normal();
    const double v = (l * z).dot(e);
    draws[r] = v * v;
  }
  return mc_summary(draws);
}

std::vector<double> cumulative_xv(const Vector& predictions, const Vector& responses) {
  if (predictions.size() != responses.size()) throw ConfigError("cumulative_xv: length mismatch");
  std::vector<double> out(static_cast<std::size_t>(responses.size()));
  if (responses.size() == 0) return out;
  const double mean = responses.mean();
  double acc = 0.0;
  for (Eigen::Index t = 0; t < responses.size(); ++t) {
    const double yc = responses(t) - mean;
    const double e = responses(t) - predictions(t);
    acc += yc * yc - e * e;
    out[static_cast<std::size_t>(t)] = acc;
  }
  return out;
}

}  // namespace isd
