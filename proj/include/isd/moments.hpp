#pragma once

#include <span>
#include <vector>

#include "isd/dataset.hpp"
#include "isd/linalg.hpp"

namespace isd {

// Slope and intercept of an ordinary least-squares fit on centered data.
struct OlsFit {
  Vector slope;
  double intercept = 0.0;
};

// OLS of y on (1, x). Throws UnderdeterminedError when there are fewer than
// cols(x) + 1 rows and NumericalError when the centered Gram is singular.
OlsFit ols_with_intercept(const Matrix& x, const Vector& y);

// Per-window second moments and regression estimates.
struct WindowMoments {
  Matrix sigma_hat;   // unbiased sample covariance
  Vector mu_hat;      // sample mean
  Vector gamma_hat;   // OLS slope of Y on (1, X)
  double gamma0_hat = 0.0;
  double noise_var = 0.0;  // RSS / (w - p - 1)
  Matrix coef_cov;    // noise_var * (X_c^T X_c)^{-1}
  Window window;
};

// Centered moments of the whole series (1/n normalization).
struct PooledMoments {
  Matrix var_x_bar;
  Vector cov_xy_bar;
  Vector mean_x;
  double mean_y = 0.0;
  std::size_t n = 0;
  bool singular = false;
};

std::vector<WindowMoments> window_moments(const TimeSeries& ts, const WindowPlan& plan);

PooledMoments pooled_moments(const TimeSeries& ts);

enum class GammaMode { plain, variance_weighted };

// Mean of the per-window slopes, either plain or inverse-variance weighted.
Vector weighted_gamma(std::span<const WindowMoments> moments, GammaMode mode = GammaMode::plain);

std::vector<Matrix> window_covariances(std::span<const WindowMoments> moments);

}  // namespace isd
