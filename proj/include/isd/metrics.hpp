#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "isd/dataset.hpp"
#include "isd/linalg.hpp"

namespace isd {

struct EvalReport {
  double r2 = 0.0;
  std::vector<double> cum_xv;
  double mspe = 0.0;
  std::map<std::uint64_t, double> per_seed;
};

// Sum over windows of (Var(Y) - Var(Y - X b - intercept)) divided by the sum
// of Var(Y). Variances are centered within each window, so the intercept only
// matters through the mean shift it removes.
double r_squared(const Vector& coeffs, double intercept, const TimeSeries& ts, const WindowPlan& plan);

// 2 gamma0^T sigma beta - beta^T sigma beta
double population_delta_var(const Vector& beta, const Matrix& sigma, const Vector& gamma0);

// (gamma_hat - gamma0)^T sigma (gamma_hat - gamma0)
double mspe(const Vector& gamma_hat, const Vector& gamma0, const Matrix& sigma);

struct McEstimate {
  double mean = 0.0;
  double se = 0.0;
  std::size_t draws = 0;
};

McEstimate mc_summary(const std::vector<double>& values);

// Monte-Carlo version of mspe with X ~ N(0, sigma).
McEstimate mspe_mc(const Vector& gamma_hat, const Vector& gamma0, const Matrix& sigma, std::size_t reps,
                   std::uint64_t seed);

// Running sum of yc_t^2 - (y_t - yhat_t)^2 where yc are the responses centered
// by their mean.
std::vector<double> cumulative_xv(const Vector& predictions, const Vector& responses);

}  // namespace isd
