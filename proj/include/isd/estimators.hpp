#pragma once

#include <span>
#include <vector>

#include "isd/dataset.hpp"
#include "isd/decomposition.hpp"
#include "isd/jbd.hpp"
#include "isd/linalg.hpp"
#include "isd/moments.hpp"

namespace isd {

enum class InterceptMode { constant, adaptive };

std::string to_string(InterceptMode mode);
InterceptMode intercept_mode_from_string(const std::string& s);

struct InterceptOptions {
  // intercept is treated as constant when sd of the window intercepts is at
  // most rel_tol * (1 + |mean|)
  double rel_tol = 0.1;
};

struct IsdModel {
  SubspaceSplit split;
  Vector beta_inv;
  InterceptMode intercept_mode = InterceptMode::adaptive;
  double gamma0 = 0.0;
  PooledMoments pooled;

  // Intercept to use without adaptation data.
  double zero_shot_intercept() const;
};

struct AdaptationFit {
  Vector delta_res;
  Vector gamma_isd;
  double intercept = 0.0;
  Window window;
};

struct PopulationIsd {
  Vector beta_inv;
  Vector delta_res_n;
  SubspaceSplit split;
  BlockDecomposition blocks;
};

// Population ISD from exact second moments: sigmas[t] = Var(X_t), gammas[t] = gamma_{0,t}.
// A block is invariant iff its projection of gamma_{0,t} does not move over t
// (relative tolerance const_tol).
PopulationIsd population_isd(std::span<const Matrix> sigmas, std::span<const Vector> gammas,
                             double const_tol = 1e-9);

// Plug-in invariant component on centered data. When window moments are
// supplied they decide the intercept mode; otherwise the mode is adaptive.
IsdModel fit_invariant(const TimeSeries& ts, const SubspaceSplit& split,
                       std::span<const WindowMoments> moments = {}, const InterceptOptions& options = {});

// Residual component from a window of adaptation data.
AdaptationFit fit_adaptation(const TimeSeries& adapt, const IsdModel& model);

double predict(const Vector& coeffs, double intercept, const Vector& x);

OlsFit pooled_ols(const TimeSeries& ts);
// OLS on an adaptation window; UnderdeterminedError when m <= p.
OlsFit rolling_ols(const TimeSeries& adapt);

struct MaggingResult {
  Vector beta;
  Vector weights;
  int iterations = 0;
  double kkt_gap = 0.0;
};

// Minimum Var(X)-norm point of the convex hull of the window slopes.
MaggingResult magging_solve(std::span<const Vector> gammas, const Matrix& pooled_var);
Vector magging(std::span<const Vector> gammas, const Matrix& pooled_var);

// Euclidean projection onto {w >= 0, sum w = 1}.
Vector project_simplex(const Vector& v);

}  // namespace isd
