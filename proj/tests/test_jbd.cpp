#include <doctest.h>

#include <algorithm>
#include <limits>
#include <numeric>

#include "helpers.hpp"
#include "isd/ajd.hpp"
#include "isd/jbd.hpp"

using namespace isd;
using isd::test::TestRng;

namespace {

Diagonalizer identity_diag(Eigen::Index p) {
  Diagonalizer d;
  d.v = Matrix::Identity(p, p);
  return d;
}

// Block-diagonal SPD matrices with the given block sizes. In-block coupling is
// strong relative to the smallest eigenvalue, which sets the size penalty.
Matrix block_spd(TestRng& rng, const std::vector<int>& dims) {
  const int p = std::accumulate(dims.begin(), dims.end(), 0);
  Matrix m = Matrix::Zero(p, p);
  int at = 0;
  for (int d : dims) {
    const Matrix a = rng.gaussian(d, d);
    m.block(at, at, d, d) = a * a.transpose() + 0.1 * Matrix::Identity(d, d);
    at += d;
  }
  return m;
}

std::vector<int> sorted_dims(const BlockDecomposition& bd) {
  auto d = bd.block_dims();
  std::sort(d.begin(), d.end());
  return d;
}

void check_partition(const std::vector<IndexSet>& blocks, int p) {
  std::vector<int> seen;
  for (const auto& b : blocks) seen.insert(seen.end(), b.begin(), b.end());
  std::sort(seen.begin(), seen.end());
  std::vector<int> all(static_cast<std::size_t>(p));
  std::iota(all.begin(), all.end(), 0);
  CHECK(seen == all);
}

}  // namespace

TEST_CASE("union-find") {
  UnionFind uf(5);
  CHECK(uf.unite(0, 3));
  CHECK(uf.unite(3, 4));
  CHECK_FALSE(uf.unite(0, 4));
  CHECK(uf.find(4) == uf.find(0));
  CHECK(uf.find(1) != uf.find(2));
}

TEST_CASE("residual_profile") {
  SUBCASE("diagonal input") {
    std::vector<Matrix> mats{Matrix(Vector::LinSpaced(3, 1, 3).asDiagonal()), Matrix::Identity(3, 3)};
    Matrix s = residual_profile(identity_diag(3), mats).sigma_max;
    s.diagonal().setZero();
    CHECK(s.norm() == 0.0);
  }
  SUBCASE("single matrix") {
    Matrix m(2, 2);
    m << 2, 0.3, 0.3, 1;
    std::vector<Matrix> mats{m};
    CHECK(residual_profile(identity_diag(2), mats).sigma_max == m);
  }
  SUBCASE("max over matrices") {
    Matrix a = Matrix::Identity(2, 2);
    Matrix b = Matrix::Identity(2, 2);
    a(0, 1) = a(1, 0) = 0.1;
    b(0, 1) = b(1, 0) = -0.4;
    std::vector<Matrix> mats{a, b};
    CHECK(residual_profile(identity_diag(2), mats).sigma_max(0, 1) == doctest::Approx(0.4));
  }
}

TEST_CASE("blocks_at_threshold") {
  Matrix s = Matrix::Identity(4, 4);
  s(0, 1) = s(1, 0) = 0.5;
  s(2, 3) = s(3, 2) = 0.5;
  s(0, 2) = s(2, 0) = 0.01;
  s(1, 3) = s(3, 1) = 0.01;
  const ResidualProfile prof{s};
  CHECK(blocks_at_threshold(prof, 0.6).size() == 4);
  CHECK(blocks_at_threshold(prof, 0.0) == std::vector<IndexSet>{{0, 1, 2, 3}});
  CHECK(blocks_at_threshold(prof, 0.1) == std::vector<IndexSet>{{0, 1}, {2, 3}});
  CHECK(blocks_at_threshold(prof, std::numeric_limits<double>::infinity()).size() == 4);
  for (double tau : {0.0, 0.005, 0.01, 0.2, 0.5, 1.0}) check_partition(blocks_at_threshold(prof, tau), 4);
}

TEST_CASE("exact block-diagonal family") {
  TestRng rng(31);
  std::vector<Matrix> mats;
  for (int k = 0; k < 6; ++k) mats.push_back(block_spd(rng, {2, 1}));
  const BlockDecomposition bd = select_blocks(identity_diag(3), mats);
  CHECK(bd.blocks.size() == 2);
  CHECK(bd.block_dims() == std::vector<int>{2, 1});
}

TEST_CASE("planted blocks under small off-block noise") {
  int hits = 0;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    TestRng rng(100 + seed);
    const std::vector<int> dims{2, 4, 3, 1};
    std::vector<Matrix> mats;
    for (int k = 0; k < 10; ++k) {
      Matrix m = Matrix::Zero(10, 10);
      int at = 0;
      for (int d : dims) {
        const Matrix a = rng.gaussian(d, d);
        m.block(at, at, d, d) = a * a.transpose() + 0.1 * Matrix::Identity(d, d);
        at += d;
      }
      for (int i = 0; i < 10; ++i)
        for (int j = i + 1; j < 10; ++j)
          if (m(i, j) == 0.0) m(i, j) = m(j, i) = 1e-3 * rng.normal();
      mats.push_back(m);
    }
    const BlockDecomposition bd = select_blocks(identity_diag(10), mats);
    const std::vector<IndexSet> want{{0, 1}, {2, 3, 4, 5}, {6, 7, 8}, {9}};
    if (bd.blocks == want && bd.u_hat == Matrix::Identity(10, 10)) ++hits;
  }
  CHECK(hits == 20);
}

TEST_CASE("select_blocks ignores the order of the matrices") {
  TestRng rng(32);
  const Matrix q = rng.orthogonal(6);
  std::vector<Matrix> mats;
  for (int k = 0; k < 5; ++k) {
    Matrix m = q * block_spd(rng, {3, 2, 1}) * q.transpose();
    const Matrix e = 0.01 * rng.gaussian(6, 6);
    mats.push_back(m + e + e.transpose());
  }
  const Diagonalizer d = uwedge(mats);
  std::vector<Matrix> rev(mats.rbegin(), mats.rend());
  const BlockDecomposition a = select_blocks(d, mats);
  const BlockDecomposition b = select_blocks(d, rev);
  CHECK(a.blocks == b.blocks);
  CHECK(a.tau_star == b.tau_star);
}

TEST_CASE("exact joint block diagonalization recovers the block spans") {
  TestRng rng(33);
  for (int trial = 0; trial < 5; ++trial) {
    const Matrix q = rng.orthogonal(6);
    const std::vector<int> dims{2, 3, 1};
    std::vector<Matrix> mats;
    for (int k = 0; k < 8; ++k) mats.push_back(q * block_spd(rng, dims) * q.transpose());
    const BlockDecomposition bd = select_blocks(uwedge(mats), mats);
    REQUIRE(sorted_dims(bd) == std::vector<int>{1, 2, 3});
    for (std::size_t j = 0; j < bd.blocks.size(); ++j) {
      const Matrix b = bd.block_basis(j);
      // find the true block with the same dimension
      int at = 0;
      for (int d : dims) {
        if (d == b.cols()) CHECK(isd::test::max_principal_angle(b, q.middleCols(at, d)) <= 1e-6);
        at += d;
      }
    }
  }
}

TEST_CASE("block_objective at both ends of the grid") {
  TestRng rng(34);
  std::vector<Matrix> mats{rng.spd(4), rng.spd(4)};
  const Matrix v = Matrix::Identity(4, 4);
  const std::vector<IndexSet> singletons{{0}, {1}, {2}, {3}};
  const std::vector<IndexSet> one{{0, 1, 2, 3}};
  const double nu = 0.3;
  // one block: no off-block entries, penalty nu * p^2 / p^2
  CHECK(block_objective(v, mats, one, nu) == doctest::Approx(nu));
  // singletons: mean absolute off-diagonal entry plus nu * p / p^2
  double obd = 0.0;
  for (const auto& m : mats) {
    double s = 0.0;
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j)
        if (i != j) s += std::abs(m(i, j));
    obd += s / 12.0;
  }
  obd /= 2.0;
  const double j_single = block_objective(v, mats, singletons, nu);
  CHECK(std::isfinite(j_single));
  CHECK(j_single == doctest::Approx(obd + nu * 4.0 / 16.0));
}

TEST_CASE("is_decorrelating") {
  std::vector<Matrix> diag{Matrix(Vector::LinSpaced(3, 1, 3).asDiagonal())};
  CHECK(is_decorrelating({{0}, {1}, {2}}, Matrix::Identity(3, 3), diag, 1e-12));

  std::vector<Matrix> ex{isd::test::example_sigma(0.1, 0.9), isd::test::example_sigma(0.7, 0.4),
                         isd::test::example_sigma(0.5, 0.5)};
  CHECK(is_decorrelating({{0}, {1}}, isd::test::rotation30(), ex, 1e-10));

  TestRng rng(35);
  std::vector<Matrix> dense{rng.spd(5), rng.spd(5)};
  const Matrix basis = rng.orthogonal(5);
  CHECK_FALSE(is_decorrelating({{0, 3}, {1, 2, 4}}, basis, dense, 1e-6));
}
