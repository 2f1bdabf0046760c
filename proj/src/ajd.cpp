#include "isd/ajd.hpp"

#include <cmath>
#include <vector>

#include "isd/error.hpp"

namespace isd {

namespace {

void normalize_rows(Matrix& v, const Matrix& m1) {
  const Vector scale = (v * m1 * v.transpose()).diagonal().cwiseAbs().cwiseSqrt();
  for (Eigen::Index i = 0; i < v.rows(); ++i) {
    if (!(scale(i) > 0.0)) throw NumericalError("uwedge: demixing row collapsed to zero");
    v.row(i) /= scale(i);
  }
}

}  // namespace

double offdiag_cost(const Matrix& v, std::span<const Matrix> mats) {
  if (mats.empty()) return 0.0;
  double total = 0.0;
  for (const auto& m : mats) {
    if (m.rows() != v.cols() || m.cols() != v.cols()) throw ConfigError("offdiag_cost: shape mismatch");
    const Matrix c = v * m * v.transpose();
    total += c.squaredNorm() - c.diagonal().squaredNorm();
  }
  return total / static_cast<double>(mats.size());
}

Diagonalizer uwedge(std::span<const Matrix> mats, const UwedgeOptions& options) {
  if (mats.empty()) throw ConfigError("uwedge: no input matrices");
  const Eigen::Index d = mats.front().rows();
  for (const auto& m : mats) {
    if (m.rows() != d || m.cols() != d) throw ConfigError("uwedge: matrices must all be p x p");
    if (!is_symmetric(m, 1e-10)) throw ConfigError("uwedge: input matrix is not symmetric");
  }
  const auto K = static_cast<Eigen::Index>(mats.size());
  std::vector<Matrix> sym;
  sym.reserve(mats.size());
  for (const auto& m : mats) sym.push_back(symmetrize(m));
  const Matrix& m1 = sym.front();

  Diagonalizer out;
  if (options.init) {
    if (options.init->rows() != d || options.init->cols() != d) throw ConfigError("uwedge: init has wrong shape");
    out.v = *options.init;
  } else {
    Eigen::SelfAdjointEigenSolver<Matrix> eig(m1);
    if (eig.info() != Eigen::Success || !(eig.eigenvalues()(0) > 0.0)) {
      throw ConfigError("uwedge: first matrix is not positive definite");
    }
    out.v = eig.eigenvalues().cwiseSqrt().cwiseInverse().asDiagonal() * eig.eigenvectors().transpose();
  }
  if (!(lambda_min(m1) > 0.0)) throw ConfigError("uwedge: first matrix is not positive definite");
  normalize_rows(out.v, m1);

  std::vector<Matrix> transformed(mats.size());
  Matrix diags(d, K);
  auto transform = [&] {
    for (Eigen::Index k = 0; k < K; ++k) {
      transformed[k] = out.v * sym[k] * out.v.transpose();
      diags.col(k) = transformed[k].diagonal();
    }
  };

  const Matrix eye = Matrix::Identity(d, d);
  for (out.iterations = 0; out.iterations < options.max_iter;) {
    transform();
    const Matrix b = diags * diags.transpose();
    // c1(i, j) = sum_k C_k(i, j) * D_k(i)
    Matrix c1 = Matrix::Zero(d, d);
    for (Eigen::Index k = 0; k < K; ++k) c1 += diags.col(k).asDiagonal() * transformed[k];

    Matrix a = eye;
    for (Eigen::Index i = 0; i < d; ++i) {
      for (Eigen::Index j = 0; j < d; ++j) {
        if (i == j) continue;
        const double denom = b(i, j) * b(i, j) - b(i, i) * b(j, j);
        // Proportional diagonal profiles (one matrix, or a repeated
        // eigenvalue in every matrix): the pair carries no information.
        if (std::abs(denom) <= 1e-12 * b(i, i) * b(j, j)) continue;
        a(i, j) += (c1(i, j) * b(i, j) - b(i, i) * c1(j, i)) / denom;
      }
    }
    if (!a.allFinite()) throw NumericalError("uwedge: update became non-finite");
    const double step = (a - eye).norm();
    out.v = a.partialPivLu().solve(out.v);
    normalize_rows(out.v, m1);
    ++out.iterations;
    if (step <= options.tol) {
      out.converged = true;
      break;
    }
  }
  out.final_cost = offdiag_cost(out.v, sym);
  return out;
}

}  // namespace isd
