#pragma once

#include <optional>
#include <span>

#include "isd/linalg.hpp"

namespace isd {

// Result of approximate joint diagonalization. Rows of v are demixing
// directions: v * M_k * v^T is approximately diagonal for every input M_k.
struct Diagonalizer {
  Matrix v;
  int iterations = 0;
  bool converged = false;
  double final_cost = 0.0;
};

struct UwedgeOptions {
  double tol = 1e-9;
  int max_iter = 1000;
  std::optional<Matrix> init;
};

// Uniformly weighted exhaustive diagonalization with Gauss iterations
// (Tichavsky & Yeredor). Each step solves the per-pair 2x2 normal equations
// for a correction A and sets v <- A^{-1} v, then rescales rows so that
// diag(v M_1 v^T) = 1. M_1 must be positive definite.
Diagonalizer uwedge(std::span<const Matrix> mats, const UwedgeOptions& options = {});

// (1/K) sum_k sum_{i != j} (v M_k v^T)_{ij}^2
double offdiag_cost(const Matrix& v, std::span<const Matrix> mats);

}  // namespace isd
