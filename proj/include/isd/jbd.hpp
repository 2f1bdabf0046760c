#pragma once

#include <cstddef>
#include <numeric>
#include <span>
#include <vector>

#include "isd/ajd.hpp"
#include "isd/linalg.hpp"

namespace isd {

using IndexSet = std::vector<int>;

// Disjoint-set forest with path halving and union by size.
class UnionFind {
 public:
  explicit UnionFind(std::size_t n) : parent_(n), size_(n, 1) {
    std::iota(parent_.begin(), parent_.end(), std::size_t{0});
  }

  std::size_t find(std::size_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }

  bool unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    if (size_[a] < size_[b]) std::swap(a, b);
    parent_[b] = a;
    size_[a] += size_[b];
    return true;
  }

 private:
  std::vector<std::size_t> parent_;
  std::vector<std::size_t> size_;
};

// Entrywise max_k |V^T M_k V| (V = v^T), symmetrized.
struct ResidualProfile {
  Matrix sigma_max;
};

struct BlockDecomposition {
  Matrix u_hat;                 // columns grouped by block
  std::vector<IndexSet> blocks; // column indices of u_hat, contiguous and ordered
  double tau_star = 0.0;
  double objective = 0.0;

  std::vector<int> block_dims() const;
  Matrix block_basis(std::size_t j) const;
};

ResidualProfile residual_profile(const Diagonalizer& diag, std::span<const Matrix> mats);

// Connected components of the graph with an edge (i, j) whenever
// sigma_max(i, j) >= tau. Components and their members are sorted.
std::vector<IndexSet> blocks_at_threshold(const ResidualProfile& profile, double tau);

// Penalized threshold search turning an AJD solution into an approximate
// irreducible joint block diagonalizer.
BlockDecomposition select_blocks(const Diagonalizer& diag, std::span<const Matrix> mats);

// Value of the penalized criterion for a given partition of the columns of v^T.
double block_objective(const Matrix& v, std::span<const Matrix> mats, const std::vector<IndexSet>& blocks,
                       double nu);

// True iff max |(U^{S_i})^T M_k U^{S_j}| <= tol for all k and all i != j.
bool is_decorrelating(const std::vector<IndexSet>& blocks, const Matrix& basis, std::span<const Matrix> mats,
                      double tol);

}  // namespace isd
