#include <doctest.h>

#include "helpers.hpp"
#include "isd/decomposition.hpp"
#include "isd/error.hpp"
#include "isd/moments.hpp"
#include "isd/simulate.hpp"

using namespace isd;
using isd::test::TestRng;

namespace {

BlockDecomposition decomposition(const Matrix& u, std::vector<IndexSet> blocks) {
  BlockDecomposition bd;
  bd.u_hat = u;
  bd.blocks = std::move(blocks);
  return bd;
}

InvarianceScores scores_of(std::vector<double> mean_abs) {
  InvarianceScores s;
  s.mean_abs = Eigen::Map<Vector>(mean_abs.data(), static_cast<Eigen::Index>(mean_abs.size()));
  s.c = s.mean_abs.transpose();
  return s;
}

bool subset(const std::vector<int>& a, const std::vector<int>& b) {
  return std::all_of(a.begin(), a.end(), [&](int x) { return std::find(b.begin(), b.end(), x) != b.end(); });
}

}  // namespace

TEST_CASE("constant coefficients score near zero") {
  TestRng rng(41);
  const std::size_t n = 5000;
  const Matrix sigma = Vector::LinSpaced(4, 0.5, 2.0).asDiagonal();
  const Matrix x = isd::test::sample_gaussian(rng, sigma, static_cast<Eigen::Index>(n));
  Vector gamma(4);
  gamma << 1.0, -0.5, 0.8, 0.3;
  const TimeSeries ts = TimeSeries::make(x, x * gamma + 0.5 * rng.gaussian(static_cast<Eigen::Index>(n)));
  const WindowPlan plan = make_windows(n, 10, 500, WindowScheme::equally_spaced);
  const auto moments = window_moments(ts, plan);
  const BlockDecomposition bd = decomposition(Matrix::Identity(4, 4), {{0}, {1}, {2}, {3}});
  const InvarianceScores s = invariance_scores(ts, plan, bd, weighted_gamma(moments));
  CHECK(s.c.rows() == 10);
  CHECK(s.c.cols() == 4);
  CHECK(s.mean_abs.maxCoeff() <= 0.2);
}

TEST_CASE("two-dimensional example separates the invariant direction") {
  const SimulatedData data = gen_example2d(3000, 4);
  const WindowPlan plan = make_windows(3000, 25, 375, WindowScheme::equally_spaced);
  const auto moments = window_moments(data.history, plan);
  // column 0 spans [0.5 sqrt3, -0.5], column 1 spans [0.5, 0.5 sqrt3]
  const BlockDecomposition bd = decomposition(isd::test::rotation30(), {{0}, {1}});
  const InvarianceScores s = invariance_scores(data.history, plan, bd, weighted_gamma(moments));
  // levels over seeds 1..20: invariant 0.02-0.05, residual 0.16-0.29
  CHECK(s.mean_abs(1) < 0.08);
  CHECK(s.mean_abs(0) > 0.12);
  const SubspaceSplit split = split_subspaces(s, bd, 0.5 * (s.mean_abs(0) + s.mean_abs(1)));
  REQUIRE(split.dim_inv() == 1);
  CHECK(std::abs(std::abs(split.u_inv().col(0).dot(isd::test::rotation30().col(1))) - 1.0) < 1e-12);
}

TEST_CASE("zero projected coefficient scores zero") {
  TestRng rng(42);
  const TimeSeries ts = TimeSeries::make(rng.gaussian(400, 2), rng.gaussian(400));
  const WindowPlan plan = make_windows(400, 4, 0, WindowScheme::contiguous);
  const BlockDecomposition bd = decomposition(Matrix::Identity(2, 2), {{0}, {1}});
  Vector gbar(2);
  gbar << 0.0, 1.0;
  const InvarianceScores s = invariance_scores(ts, plan, bd, gbar);
  CHECK(s.c.col(0).norm() == 0.0);
  CHECK(s.mean_abs(0) == 0.0);
}

TEST_CASE("split_subspaces thresholds") {
  TestRng rng(43);
  const Matrix q = rng.orthogonal(3);
  const BlockDecomposition bd = decomposition(q, {{0, 1}, {2}});
  const InvarianceScores s = scores_of({0.02, 0.4});
  CHECK(split_subspaces(s, bd, 1.0).dim_inv() == 3);
  CHECK(split_subspaces(s, bd, 0.0).dim_inv() == 0);
  const SubspaceSplit mid = split_subspaces(s, bd, 0.1);
  CHECK(mid.inv_blocks == std::vector<int>{0});
  CHECK(mid.dim_inv() == 2);
  CHECK(mid.dim_res() == 1);
  CHECK_THROWS_AS(split_subspaces(s, bd, 1.5), ConfigError);
  CHECK_THROWS_AS(split_subspaces(s, bd, -0.1), ConfigError);
}

TEST_CASE("projector algebra") {
  TestRng rng(44);
  for (int trial = 0; trial < 10; ++trial) {
    const Matrix u = rng.gaussian(5, 5);  // non-orthogonal, exercises re-orthonormalization
    const BlockDecomposition bd = decomposition(u, {{0, 1}, {2}, {3, 4}});
    const SubspaceSplit split = split_subspaces(scores_of({rng.uniform(), rng.uniform(), rng.uniform()}), bd, 0.5);
    const Matrix pi = split.proj_inv();
    const Matrix pr = split.proj_res();
    CHECK((pi * pi - pi).cwiseAbs().maxCoeff() <= 1e-8);
    CHECK((pr * pr - pr).cwiseAbs().maxCoeff() <= 1e-8);
    CHECK((pi + pr - Matrix::Identity(5, 5)).cwiseAbs().maxCoeff() <= 1e-8);
    CHECK((pi * pr).cwiseAbs().maxCoeff() <= 1e-8);
  }
}

TEST_CASE("re-orthonormalization keeps block spans") {
  TestRng rng(45);
  const Matrix q = rng.orthogonal(6);
  Matrix u = q;
  // mix columns inside each block only
  u.leftCols(3) = q.leftCols(3) * rng.gaussian(3, 3);
  u.rightCols(2) = q.rightCols(2) * rng.gaussian(2, 2);
  u.col(3) *= 4.0;
  const BlockDecomposition bd = decomposition(u, {{0, 1, 2}, {3}, {4, 5}});
  const Matrix basis = orthonormal_block_basis(bd);
  CHECK((basis.transpose() * basis - Matrix::Identity(6, 6)).norm() < 1e-12);
  for (const auto& cols : bd.blocks) {
    Matrix before(6, static_cast<Eigen::Index>(cols.size()));
    Matrix after(6, static_cast<Eigen::Index>(cols.size()));
    for (std::size_t c = 0; c < cols.size(); ++c) {
      before.col(static_cast<Eigen::Index>(c)) = u.col(cols[c]);
      after.col(static_cast<Eigen::Index>(c)) = basis.col(cols[c]);
    }
    const Matrix qb = qr_orthonormalize(before);
    CHECK((qb * qb.transpose() - after * after.transpose()).cwiseAbs().maxCoeff() <= 1e-10);
  }
}

TEST_CASE("split is monotone in lambda") {
  TestRng rng(46);
  const BlockDecomposition bd = decomposition(rng.orthogonal(6), {{0}, {1, 2}, {3}, {4, 5}});
  const InvarianceScores s = scores_of({0.3, 0.05, 0.6, 0.2});
  std::vector<int> previous;
  for (double lam = 0.0; lam <= 1.0; lam += 0.05) {
    const SubspaceSplit split = split_subspaces(s, bd, lam);
    CHECK(subset(previous, split.inv_blocks));
    previous = split.inv_blocks;
  }
  CHECK(previous.size() == 4);
}

TEST_CASE("one-SE rule") {
  SUBCASE("exact ties pick the smallest threshold") {
    CHECK(one_se_choice({0.0, 0.2, 0.5}, {1.0, 1.0, 1.0}, {0.0, 0.0, 0.0}, 1.0) == 0.0);
  }
  SUBCASE("best within one standard error") {
    // best is 0.5 with mean 2 and se 0.3: cutoff 1.7
    CHECK(one_se_choice({0.0, 0.2, 0.5}, {1.0, 1.8, 2.0}, {0.1, 0.1, 0.3}, 1.0) == doctest::Approx(0.2));
    CHECK(one_se_choice({0.0, 0.2, 0.5}, {1.0, 1.8, 2.0}, {0.1, 0.1, 0.3}, 0.0) == doctest::Approx(0.5));
  }
  CHECK_THROWS_AS(one_se_choice({0.0}, {1.0, 2.0}, {0.0}, 1.0), ConfigError);
}

TEST_CASE("cross-validation with a single block uses a two-point grid") {
  TestRng rng(47);
  const std::size_t n = 600;
  const TimeSeries ts = TimeSeries::make(rng.gaussian(static_cast<Eigen::Index>(n), 2), rng.gaussian(static_cast<Eigen::Index>(n)));
  const WindowPlan plan = make_windows(n, 6, 0, WindowScheme::contiguous);
  const BlockDecomposition bd = decomposition(Matrix::Identity(2, 2), {{0, 1}});
  const InvarianceScores s = invariance_scores(ts, plan, bd, weighted_gamma(window_moments(ts, plan)));
  const CvResult cv = cross_validate_lambda(ts, plan, bd, s, {});
  REQUIRE(cv.grid.size() == 2);
  CHECK(cv.grid[0] == 0.0);
  CHECK(cv.grid[1] == s.mean_abs(0));
  CHECK((cv.lambda == cv.grid[0] || cv.lambda == cv.grid[1]));
  CHECK(cv.fold_means.size() == 2);
  CHECK(cv.fold_means[0].size() == 10);
  CHECK(cv.lambda == one_se_choice(cv.grid, cv.mean, cv.se, 1.0));
}

TEST_CASE("cross-validation rejects folds that are too short") {
  TestRng rng(48);
  const TimeSeries ts = TimeSeries::make(rng.gaussian(100, 5), rng.gaussian(100));
  const WindowPlan plan = make_windows(100, 5, 0, WindowScheme::contiguous);
  const BlockDecomposition bd = decomposition(Matrix::Identity(5, 5), {{0, 1, 2, 3, 4}});
  const InvarianceScores s = scores_of({0.1});
  CHECK_THROWS_AS(cross_validate_lambda(ts, plan, bd, s, {}), ConfigError);
  CHECK(cv_se_mode_from_string(to_string(CvSeMode::paired)) == CvSeMode::paired);
}
