#include "isd/linalg.hpp"

#include <cmath>

#include "isd/error.hpp"

namespace isd {

SymEig sym_eig(const Matrix& a) {
  if (a.rows() != a.cols()) throw ConfigError("sym_eig: matrix is not square");
  Eigen::SelfAdjointEigenSolver<Matrix> solver(a);
  if (solver.info() != Eigen::Success) throw NumericalError("sym_eig: eigensolver failed");
  // Eigen returns ascending order.
  SymEig out;
  out.values = solver.eigenvalues().reverse();
  out.vectors = solver.eigenvectors().rowwise().reverse();
  return out;
}

double lambda_min(const Matrix& a) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(a, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw NumericalError("lambda_min: eigensolver failed");
  return solver.eigenvalues()(0);
}

Vector solve_spd(const Matrix& a, const Vector& b) {
  return solve_spd(a, Matrix(b)).col(0);
}

Matrix solve_spd(const Matrix& a, const Matrix& b) {
  if (a.rows() != a.cols() || a.rows() != b.rows()) throw ConfigError("solve_spd: shape mismatch");
  Eigen::LLT<Matrix> llt(a);
  if (llt.info() != Eigen::Success) throw NumericalError("solve_spd: matrix is not positive definite");
  // LLT succeeds on numerically singular PSD input; reject those explicitly.
  const Matrix& l = llt.matrixL();
  const double dmax = l.diagonal().cwiseAbs().maxCoeff();
  const double dmin = l.diagonal().cwiseAbs().minCoeff();
  if (!(dmin > 1e-12 * dmax)) throw NumericalError("solve_spd: matrix is numerically singular");
  return llt.solve(b);
}

Matrix qr_orthonormalize(const Matrix& b) {
  if (b.cols() == 0) return Matrix(b.rows(), 0);
  if (b.cols() > b.rows()) throw NumericalError("qr_orthonormalize: more columns than rows");
  Eigen::HouseholderQR<Matrix> qr(b);
  const Matrix r = qr.matrixQR().topRows(b.cols()).triangularView<Eigen::Upper>();
  const double scale = b.colwise().norm().maxCoeff();
  for (Eigen::Index i = 0; i < b.cols(); ++i) {
    if (!(std::abs(r(i, i)) > 1e-10 * scale)) {
      throw NumericalError("qr_orthonormalize: input is rank deficient");
    }
  }
  Matrix q = qr.householderQ() * Matrix::Identity(b.rows(), b.cols());
  // Fix signs so that R has a positive diagonal.
  for (Eigen::Index i = 0; i < b.cols(); ++i) {
    if (r(i, i) < 0) q.col(i) = -q.col(i);
  }
  return q;
}

Matrix polar_orthonormalize(const Matrix& b) {
  if (b.cols() == 0) return b;
  Eigen::JacobiSVD<Matrix> svd(b, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Vector& s = svd.singularValues();
  if (!(s(s.size() - 1) > 1e-10 * s(0))) throw NumericalError("polar_orthonormalize: input is rank deficient");
  return svd.matrixU() * svd.matrixV().transpose();
}

Matrix pinv_projected(const Matrix& sigma, const Matrix& u_block) {
  if (u_block.cols() == 0) return Matrix::Zero(sigma.rows(), sigma.cols());
  const Matrix reduced = u_block.transpose() * sigma * u_block;
  return u_block * solve_spd(reduced, Matrix(u_block.transpose()));
}

Matrix symmetrize(const Matrix& a) { return 0.5 * (a + a.transpose()); }

bool is_symmetric(const Matrix& a, double tol) {
  if (a.rows() != a.cols()) return false;
  return (a - a.transpose()).cwiseAbs().maxCoeff() <= tol * std::max(1.0, a.cwiseAbs().maxCoeff());
}

}  // namespace isd
