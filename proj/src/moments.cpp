#include "isd/moments.hpp"

#include <algorithm>
#include <string>

#include "isd/error.hpp"

namespace isd {

OlsFit ols_with_intercept(const Matrix& x, const Vector& y) {
  const Eigen::Index n = x.rows();
  const Eigen::Index p = x.cols();
  if (y.size() != n) throw ConfigError("ols: x and y lengths differ");
  if (n < p + 1 || n < 2) {
    throw UnderdeterminedError("ols: " + std::to_string(n) + " rows cannot determine " + std::to_string(p) +
                               " slopes and an intercept");
  }
  const Vector mx = x.colwise().mean();
  const double my = y.mean();
  const Matrix xc = x.rowwise() - mx.transpose();
  const Vector yc = y.array() - my;
  OlsFit fit;
  fit.slope = solve_spd(xc.transpose() * xc, Vector(xc.transpose() * yc));
  fit.intercept = my - mx.dot(fit.slope);
  return fit;
}

std::vector<WindowMoments> window_moments(const TimeSeries& ts, const WindowPlan& plan) {
  validate_plan(plan, ts.n(), ts.p());
  const auto p = static_cast<Eigen::Index>(ts.p());
  std::vector<WindowMoments> out;
  out.reserve(plan.windows.size());
  for (std::size_t k = 0; k < plan.windows.size(); ++k) {
    const Window& win = plan.windows[k];
    const auto s = static_cast<Eigen::Index>(win.start);
    const auto w = static_cast<Eigen::Index>(win.length());
    const auto x = ts.x.middleRows(s, w);
    const auto y = ts.y.segment(s, w);

    WindowMoments m;
    m.window = win;
    m.mu_hat = x.colwise().mean();
    const Matrix xc = x.rowwise() - m.mu_hat.transpose();
    const Matrix gram = xc.transpose() * xc;
    m.sigma_hat = symmetrize(gram / static_cast<double>(w - 1));

    Matrix gram_inv;
    try {
      gram_inv = solve_spd(gram, Matrix(Matrix::Identity(p, p)));
    } catch (const NumericalError&) {
      throw NumericalError("window " + std::to_string(k) + " [" + std::to_string(win.start) + ", " +
                           std::to_string(win.end) + "): singular Gram matrix");
    }
    const double my = y.mean();
    const Vector yc = y.array() - my;
    m.gamma_hat = gram_inv * (xc.transpose() * yc);
    m.gamma0_hat = my - m.mu_hat.dot(m.gamma_hat);
    const double rss = (yc - xc * m.gamma_hat).squaredNorm();
    m.noise_var = std::max(0.0, rss / static_cast<double>(w - p - 1));
    m.coef_cov = symmetrize(m.noise_var * gram_inv);
    out.push_back(std::move(m));
  }
  return out;
}

PooledMoments pooled_moments(const TimeSeries& ts) {
  if (ts.n() < ts.p() + 2) throw ConfigError("pooled_moments: need n >= p + 2");
  PooledMoments pm;
  pm.n = ts.n();
  pm.mean_x = ts.x.colwise().mean();
  pm.mean_y = ts.y.mean();
  const Matrix xc = ts.x.rowwise() - pm.mean_x.transpose();
  const Vector yc = ts.y.array() - pm.mean_y;
  const double inv_n = 1.0 / static_cast<double>(pm.n);
  pm.var_x_bar = symmetrize(xc.transpose() * xc * inv_n);
  pm.cov_xy_bar = xc.transpose() * yc * inv_n;
  Eigen::LLT<Matrix> llt(pm.var_x_bar);
  pm.singular = llt.info() != Eigen::Success || lambda_min(pm.var_x_bar) <= 0.0;
  return pm;
}

Vector weighted_gamma(std::span<const WindowMoments> moments, GammaMode mode) {
  if (moments.empty()) throw ConfigError("weighted_gamma: no windows");
  const auto p = moments.front().gamma_hat.size();
  if (mode == GammaMode::plain) {
    Vector sum = Vector::Zero(p);
    for (const auto& m : moments) sum += m.gamma_hat;
    return sum / static_cast<double>(moments.size());
  }
  Matrix precision_sum = Matrix::Zero(p, p);
  Vector weighted_sum = Vector::Zero(p);
  for (std::size_t k = 0; k < moments.size(); ++k) {
    Matrix precision;
    try {
      precision = solve_spd(moments[k].coef_cov, Matrix(Matrix::Identity(p, p)));
    } catch (const NumericalError&) {
      throw NumericalError("weighted_gamma: coefficient covariance of window " + std::to_string(k) +
                           " is singular");
    }
    precision_sum += precision;
    weighted_sum += precision * moments[k].gamma_hat;
  }
  return solve_spd(symmetrize(precision_sum), weighted_sum);
}

std::vector<Matrix> window_covariances(std::span<const WindowMoments> moments) {
  std::vector<Matrix> out;
  out.reserve(moments.size());
  for (const auto& m : moments) out.push_back(m.sigma_hat);
  return out;
}

}  // namespace isd
