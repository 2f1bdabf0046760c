#include "isd/jbd.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "isd/error.hpp"

namespace isd {

std::vector<int> BlockDecomposition::block_dims() const {
  std::vector<int> dims;
  for (const auto& b : blocks) dims.push_back(static_cast<int>(b.size()));
  return dims;
}

Matrix BlockDecomposition::block_basis(std::size_t j) const {
  const IndexSet& cols = blocks.at(j);
  Matrix out(u_hat.rows(), static_cast<Eigen::Index>(cols.size()));
  for (std::size_t c = 0; c < cols.size(); ++c) out.col(static_cast<Eigen::Index>(c)) = u_hat.col(cols[c]);
  return out;
}

ResidualProfile residual_profile(const Diagonalizer& diag, std::span<const Matrix> mats) {
  if (mats.empty()) throw ConfigError("residual_profile: no matrices");
  const Eigen::Index p = diag.v.rows();
  Matrix acc = Matrix::Zero(p, p);
  for (const auto& m : mats) {
    if (m.rows() != p || m.cols() != p) throw ConfigError("residual_profile: shape mismatch");
    acc = acc.cwiseMax((diag.v * m * diag.v.transpose()).cwiseAbs());
  }
  return ResidualProfile{symmetrize(acc)};
}

std::vector<IndexSet> blocks_at_threshold(const ResidualProfile& profile, double tau) {
  if (tau < 0.0) throw ConfigError("blocks_at_threshold: tau must be >= 0");
  const auto p = static_cast<std::size_t>(profile.sigma_max.rows());
  UnionFind uf(p);
  for (std::size_t i = 0; i < p; ++i) {
    for (std::size_t j = i + 1; j < p; ++j) {
      if (profile.sigma_max(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) >= tau) uf.unite(i, j);
    }
  }
  std::vector<IndexSet> blocks;
  std::vector<int> slot(p, -1);
  for (std::size_t i = 0; i < p; ++i) {
    const std::size_t root = uf.find(i);
    if (slot[root] < 0) {
      slot[root] = static_cast<int>(blocks.size());
      blocks.emplace_back();
    }
    blocks[static_cast<std::size_t>(slot[root])].push_back(static_cast<int>(i));
  }
  // Members are pushed in increasing order, so blocks are already ordered by
  // their smallest member.
  return blocks;
}

namespace {

std::vector<int> block_labels(const std::vector<IndexSet>& blocks, std::size_t p) {
  std::vector<int> label(p, -1);
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    for (int i : blocks[b]) label[static_cast<std::size_t>(i)] = static_cast<int>(b);
  }
  return label;
}

}  // namespace

double block_objective(const Matrix& v, std::span<const Matrix> mats, const std::vector<IndexSet>& blocks,
                       double nu) {
  const auto p = static_cast<std::size_t>(v.rows());
  const std::vector<int> label = block_labels(blocks, p);
  std::size_t in_block = 0;
  for (const auto& b : blocks) in_block += b.size() * b.size();
  const std::size_t off_block = p * p - in_block;

  double obd_total = 0.0;
  if (off_block > 0) {
    for (const auto& m : mats) {
      const Matrix c = (v * m * v.transpose()).cwiseAbs();
      double sum = 0.0;
      for (std::size_t i = 0; i < p; ++i) {
        for (std::size_t j = 0; j < p; ++j) {
          if (label[i] != label[j]) sum += c(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
        }
      }
      obd_total += sum / static_cast<double>(off_block);
    }
    obd_total /= static_cast<double>(mats.size());
  }
  return obd_total + nu * static_cast<double>(in_block) / static_cast<double>(p * p);
}

BlockDecomposition select_blocks(const Diagonalizer& diag, std::span<const Matrix> mats) {
  if (mats.empty()) throw ConfigError("select_blocks: no matrices");
  const Eigen::Index p = diag.v.rows();
  double nu = 0.0;
  for (const auto& m : mats) {
    const double lmin = lambda_min(m);
    if (!(lmin > 0.0)) throw NumericalError("select_blocks: covariance estimate is not positive definite");
    nu += lmin;
  }
  nu /= static_cast<double>(mats.size());

  const ResidualProfile profile = residual_profile(diag, mats);
  std::vector<double> taus{0.0};
  for (Eigen::Index i = 0; i < p; ++i) {
    for (Eigen::Index j = i + 1; j < p; ++j) taus.push_back(profile.sigma_max(i, j));
  }
  std::sort(taus.begin(), taus.end());
  taus.erase(std::unique(taus.begin(), taus.end()), taus.end());
  // Sentinel above every off-diagonal entry: all singletons.
  taus.push_back(std::numeric_limits<double>::infinity());

  double best_value = std::numeric_limits<double>::infinity();
  double best_tau = 0.0;
  std::vector<IndexSet> best_blocks;
  for (double tau : taus) {
    std::vector<IndexSet> blocks = blocks_at_threshold(profile, tau);
    const double value = block_objective(diag.v, mats, blocks, nu);
    // Ascending taus: ties go to the larger threshold (finer partition).
    if (value <= best_value) {
      best_value = value;
      best_tau = tau;
      best_blocks = std::move(blocks);
    }
  }

  BlockDecomposition out;
  out.tau_star = best_tau;
  out.objective = best_value;
  out.u_hat.resize(p, p);
  const Matrix v_cols = diag.v.transpose();
  int next = 0;
  for (const auto& b : best_blocks) {
    IndexSet cols;
    for (int i : b) {
      out.u_hat.col(next) = v_cols.col(i);
      cols.push_back(next++);
    }
    out.blocks.push_back(std::move(cols));
  }
  return out;
}

bool is_decorrelating(const std::vector<IndexSet>& blocks, const Matrix& basis, std::span<const Matrix> mats,
                      double tol) {
  const std::vector<int> label = block_labels(blocks, static_cast<std::size_t>(basis.cols()));
  for (const auto& m : mats) {
    const Matrix c = basis.transpose() * m * basis;
    for (Eigen::Index i = 0; i < c.rows(); ++i) {
      for (Eigen::Index j = 0; j < c.cols(); ++j) {
        if (label[static_cast<std::size_t>(i)] != label[static_cast<std::size_t>(j)] && std::abs(c(i, j)) > tol) {
          return false;
        }
      }
    }
  }
  return true;
}

}  // namespace isd
