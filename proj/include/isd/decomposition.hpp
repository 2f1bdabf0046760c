#pragma once

#include <string>
#include <vector>

#include "isd/dataset.hpp"
#include "isd/jbd.hpp"
#include "isd/linalg.hpp"

namespace isd {

// |corr(Y_k - X_k b_j, X_k b_j)| per window k (rows) and block j (columns),
// with b_j the projection of the averaged slope onto block j.
struct InvarianceScores {
  Matrix c;
  Vector mean_abs;
};

// Orthogonal invariant/residual split of R^p. u_hat = [U_inv | U_res] has
// orthonormal columns; inv_columns and res_columns index into it.
struct SubspaceSplit {
  Matrix u_hat;
  IndexSet inv_columns;
  IndexSet res_columns;
  std::vector<int> inv_blocks;  // indices into the originating block decomposition
  double lambda = 0.0;

  std::size_t dim_inv() const { return inv_columns.size(); }
  std::size_t dim_res() const { return res_columns.size(); }
  Matrix u_inv() const { return u_hat.leftCols(static_cast<Eigen::Index>(dim_inv())); }
  Matrix u_res() const { return u_hat.rightCols(static_cast<Eigen::Index>(dim_res())); }
  Matrix proj_inv() const;
  Matrix proj_res() const;
};

// Column-normalizes u_hat and replaces it by its polar factor. Blocks that are
// mutually orthogonal keep their spans exactly; otherwise the correction is
// spread symmetrically over all blocks.
Matrix orthonormal_block_basis(const BlockDecomposition& bd);

// Builds the split with the given blocks on the invariant side, using an
// orthonormal basis whose block columns follow bd.blocks.
SubspaceSplit make_split(const BlockDecomposition& bd, const Matrix& basis, const std::vector<bool>& invariant,
                         double lambda);

InvarianceScores invariance_scores(const TimeSeries& ts, const WindowPlan& plan, const BlockDecomposition& bd,
                                   const Vector& gamma_bar);

// Block j is invariant iff mean_abs(j) <= lambda.
SubspaceSplit split_subspaces(const InvarianceScores& scores, const BlockDecomposition& bd, double lambda);

// across_folds: standard error of each grid point's fold means.
// paired: standard error of the fold-wise difference to the best grid point,
// which removes the variation that all thresholds share.
enum class CvSeMode { across_folds, paired };

std::string to_string(CvSeMode mode);
CvSeMode cv_se_mode_from_string(const std::string& s);

struct CvOptions {
  std::size_t folds = 10;
  std::size_t d = 0;  // adaptation window length; 0 means 2p
  double t_se = 1.0;
  CvSeMode se_mode = CvSeMode::across_folds;
};

struct CvResult {
  double lambda = 0.0;
  std::vector<double> grid;
  std::vector<double> mean;  // mean held-out explained variance per grid point
  std::vector<double> se;    // standard error per grid point (see CvSeMode)
  std::vector<std::vector<double>> fold_means;  // [grid point][fold]
};

// Blocked cross-validation of the invariance threshold with the one-standard-
// error rule towards the lowest threshold.
CvResult cross_validate_lambda(const TimeSeries& ts, const WindowPlan& plan, const BlockDecomposition& bd,
                               const InvarianceScores& scores, const CvOptions& options = {});

// Smallest grid value whose mean is within t_se standard errors of the best.
double one_se_choice(const std::vector<double>& grid, const std::vector<double>& mean,
                     const std::vector<double>& se, double t_se);

}  // namespace isd
