#include "isd/decomposition.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "isd/error.hpp"
#include "isd/estimators.hpp"

namespace isd {

Matrix SubspaceSplit::proj_inv() const {
  const Matrix u = u_inv();
  return u * u.transpose();
}

Matrix SubspaceSplit::proj_res() const {
  const Matrix u = u_res();
  return u * u.transpose();
}

Matrix orthonormal_block_basis(const BlockDecomposition& bd) {
  Matrix u = bd.u_hat;
  for (Eigen::Index j = 0; j < u.cols(); ++j) {
    const double norm = u.col(j).norm();
    if (!(norm > 0.0)) throw NumericalError("block basis has a zero column");
    u.col(j) /= norm;
  }
  return polar_orthonormalize(u);
}

SubspaceSplit make_split(const BlockDecomposition& bd, const Matrix& basis, const std::vector<bool>& invariant,
                         double lambda) {
  if (invariant.size() != bd.blocks.size()) throw ConfigError("make_split: one flag per block required");
  SubspaceSplit split;
  split.lambda = lambda;
  std::vector<int> inv_cols;
  std::vector<int> res_cols;
  for (std::size_t j = 0; j < bd.blocks.size(); ++j) {
    auto& target = invariant[j] ? inv_cols : res_cols;
    target.insert(target.end(), bd.blocks[j].begin(), bd.blocks[j].end());
    if (invariant[j]) split.inv_blocks.push_back(static_cast<int>(j));
  }
  split.u_hat.resize(basis.rows(), basis.cols());
  int next = 0;
  for (int c : inv_cols) {
    split.u_hat.col(next) = basis.col(c);
    split.inv_columns.push_back(next++);
  }
  for (int c : res_cols) {
    split.u_hat.col(next) = basis.col(c);
    split.res_columns.push_back(next++);
  }
  return split;
}

InvarianceScores invariance_scores(const TimeSeries& ts, const WindowPlan& plan, const BlockDecomposition& bd,
                                   const Vector& gamma_bar) {
  if (!gamma_bar.allFinite() || static_cast<std::size_t>(gamma_bar.size()) != ts.p()) {
    throw ConfigError("invariance_scores: gamma_bar must be a finite p-vector");
  }
  validate_plan(plan, ts.n(), ts.p());
  const Matrix basis = orthonormal_block_basis(bd);
  const auto K = static_cast<Eigen::Index>(plan.windows.size());
  const auto q = static_cast<Eigen::Index>(bd.blocks.size());

  InvarianceScores scores;
  scores.c = Matrix::Zero(K, q);
  for (Eigen::Index j = 0; j < q; ++j) {
    Matrix u(basis.rows(), static_cast<Eigen::Index>(bd.blocks[j].size()));
    for (std::size_t c = 0; c < bd.blocks[j].size(); ++c) u.col(static_cast<Eigen::Index>(c)) = basis.col(bd.blocks[j][c]);
    const Vector b = u * (u.transpose() * gamma_bar);
    for (Eigen::Index k = 0; k < K; ++k) {
      const Window& win = plan.windows[static_cast<std::size_t>(k)];
      const auto s = static_cast<Eigen::Index>(win.start);
      const auto w = static_cast<Eigen::Index>(win.length());
      const Vector y = ts.y.segment(s, w);
      const Vector yc = y.array() - y.mean();
      const double var_y = yc.squaredNorm();
      if (!(var_y > 0.0)) {
        throw NumericalError("invariance_scores: window " + std::to_string(k) + " has zero response variance");
      }
      const Vector f = ts.x.middleRows(s, w) * b;
      const Vector fc = f.array() - f.mean();
      const Vector rc = yc - fc;
      const double var_f = fc.squaredNorm();
      const double var_r = rc.squaredNorm();
      // A component that explains nothing cannot violate invariance.
      if (var_f <= 1e-14 * var_y || var_r <= 1e-14 * var_y) continue;
      const double corr = fc.dot(rc) / std::sqrt(var_f * var_r);
      scores.c(k, j) = std::min(1.0, std::abs(corr));
    }
  }
  scores.mean_abs = scores.c.colwise().mean().transpose();
  return scores;
}

SubspaceSplit split_subspaces(const InvarianceScores& scores, const BlockDecomposition& bd, double lambda) {
  if (!(lambda >= 0.0 && lambda <= 1.0)) throw ConfigError("split_subspaces: lambda must lie in [0, 1]");
  if (static_cast<std::size_t>(scores.mean_abs.size()) != bd.blocks.size()) {
    throw ConfigError("split_subspaces: scores do not match the block decomposition");
  }
  std::vector<bool> invariant(bd.blocks.size());
  for (std::size_t j = 0; j < bd.blocks.size(); ++j) invariant[j] = scores.mean_abs(static_cast<Eigen::Index>(j)) <= lambda;
  return make_split(bd, orthonormal_block_basis(bd), invariant, lambda);
}

std::string to_string(CvSeMode mode) { return mode == CvSeMode::paired ? "paired" : "across_folds"; }

CvSeMode cv_se_mode_from_string(const std::string& s) {
  if (s == "across_folds") return CvSeMode::across_folds;
  if (s == "paired") return CvSeMode::paired;
  throw ConfigError("unknown standard error mode '" + s + "' (across_folds, paired)");
}

double one_se_choice(const std::vector<double>& grid, const std::vector<double>& mean,
                     const std::vector<double>& se, double t_se) {
  if (grid.empty() || grid.size() != mean.size() || grid.size() != se.size()) {
    throw ConfigError("one_se_choice: inconsistent inputs");
  }
  std::size_t best = 0;
  for (std::size_t i = 1; i < mean.size(); ++i) {
    if (mean[i] > mean[best]) best = i;
  }
  const double cutoff = mean[best] - t_se * se[best];
  double chosen = grid[best];
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (mean[i] >= cutoff) chosen = std::min(chosen, grid[i]);
  }
  return chosen;
}

CvResult cross_validate_lambda(const TimeSeries& ts, const WindowPlan& plan, const BlockDecomposition& bd,
                               const InvarianceScores& scores, const CvOptions& options) {
  (void)plan;
  const std::size_t n = ts.n();
  const std::size_t p = ts.p();
  const std::size_t L = options.folds;
  const std::size_t d = options.d == 0 ? 2 * p : options.d;
  if (L < 2) throw ConfigError("cross_validate_lambda: need at least 2 folds");
  const std::size_t fold_len = n / L;
  if (fold_len < d + 1) {
    throw ConfigError("cross_validate_lambda: folds of length " + std::to_string(fold_len) +
                      " leave no evaluation points after a window of " + std::to_string(d));
  }
  if (n - fold_len < p + 2) throw ConfigError("cross_validate_lambda: training part too short");

  CvResult out;
  out.grid.push_back(0.0);
  for (Eigen::Index j = 0; j < scores.mean_abs.size(); ++j) out.grid.push_back(scores.mean_abs(j));
  std::sort(out.grid.begin(), out.grid.end());
  out.grid.erase(std::unique(out.grid.begin(), out.grid.end()), out.grid.end());

  for (double lambda : out.grid) {
    const SubspaceSplit split = split_subspaces(scores, bd, std::min(1.0, lambda));
    if (d < split.dim_res() + 2) {
      throw ConfigError("cross_validate_lambda: d = " + std::to_string(d) + " is too small for dim_res = " +
                        std::to_string(split.dim_res()));
    }
    std::vector<double> fold_means;
    for (std::size_t l = 0; l < L; ++l) {
      const std::size_t start = l * fold_len;
      const std::size_t end = l + 1 == L ? n : start + fold_len;
      const IsdModel model = fit_invariant(drop_rows(ts, start, end), split);
      double sum = 0.0;
      std::size_t count = 0;
      for (std::size_t t = start + d; t < end; ++t) {
        const TimeSeries window = ts.slice(t - d, t);
        const AdaptationFit fit = fit_adaptation(window, model);
        const auto ti = static_cast<Eigen::Index>(t);
        const double y = ts.y(ti);
        const double pred = predict(fit.gamma_isd, fit.intercept, ts.x.row(ti).transpose());
        const double centered = y - window.y.mean();
        sum += centered * centered - (y - pred) * (y - pred);
        ++count;
      }
      fold_means.push_back(sum / static_cast<double>(count));
    }
    double mean = 0.0;
    for (double v : fold_means) mean += v;
    mean /= static_cast<double>(L);
    double ss = 0.0;
    for (double v : fold_means) ss += (v - mean) * (v - mean);
    out.mean.push_back(mean);
    out.se.push_back(std::sqrt(ss) / static_cast<double>(L));
    out.fold_means.push_back(std::move(fold_means));
  }
  if (options.se_mode == CvSeMode::paired) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < out.mean.size(); ++i) {
      if (out.mean[i] > out.mean[best]) best = i;
    }
    // shortfall relative to the best point, with the error of that difference
    std::vector<double> diff_se(out.grid.size(), 0.0);
    for (std::size_t i = 0; i < out.grid.size(); ++i) {
      const double md = out.mean[i] - out.mean[best];
      double ss = 0.0;
      for (std::size_t l = 0; l < L; ++l) {
        const double dv = out.fold_means[i][l] - out.fold_means[best][l] - md;
        ss += dv * dv;
      }
      diff_se[i] = std::sqrt(ss) / static_cast<double>(L);
    }
    double chosen = out.grid[best];
    for (std::size_t i = 0; i < out.grid.size(); ++i) {
      if (out.mean[i] - out.mean[best] >= -options.t_se * diff_se[i]) chosen = std::min(chosen, out.grid[i]);
    }
    out.lambda = chosen;
  } else {
    out.lambda = one_se_choice(out.grid, out.mean, out.se, options.t_se);
  }
  return out;
}

}  // namespace isd
