#pragma once

#include <Eigen/Dense>

namespace isd {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

// Eigen-decomposition of a symmetric matrix, eigenvalues in descending order.
struct SymEig {
  Vector values;
  Matrix vectors;  // orthonormal columns, column i pairs with values(i)
};

SymEig sym_eig(const Matrix& a);

double lambda_min(const Matrix& a);

// Solves a*x = b for symmetric positive definite a. Throws NumericalError otherwise.
Vector solve_spd(const Matrix& a, const Vector& b);
Matrix solve_spd(const Matrix& a, const Matrix& b);

// Orthonormal basis of span(b) via Householder QR. Throws NumericalError when b
// is numerically rank deficient.
Matrix qr_orthonormalize(const Matrix& b);

// Nearest matrix with orthonormal columns (polar factor b (b^T b)^{-1/2}).
// When b's column groups are already mutually orthogonal, each group's span
// is preserved.
Matrix polar_orthonormalize(const Matrix& b);

// U (U^T sigma U)^{-1} U^T, the pseudoinverse of the covariance of the
// projection of X onto span(U), for U with orthonormal columns.
Matrix pinv_projected(const Matrix& sigma, const Matrix& u_block);

Matrix symmetrize(const Matrix& a);

bool is_symmetric(const Matrix& a, double tol);

}  // namespace isd
