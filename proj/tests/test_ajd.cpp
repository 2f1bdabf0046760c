#include <doctest.h>

#include <numbers>

#include "helpers.hpp"
#include "isd/ajd.hpp"

using namespace isd;
using isd::test::TestRng;

namespace {

std::vector<Matrix> diagonalizable_family(TestRng& rng, const Matrix& u, int K) {
  std::vector<Matrix> mats;
  for (int k = 0; k < K; ++k) {
    Vector d(u.cols());
    for (Eigen::Index i = 0; i < d.size(); ++i) d(i) = rng.uniform(0.2, 3.0);
    mats.push_back(u * d.asDiagonal() * u.transpose());
  }
  return mats;
}

Matrix rot(double theta) {
  Matrix r(2, 2);
  r << std::cos(theta), -std::sin(theta), std::sin(theta), std::cos(theta);
  return r;
}

}  // namespace

TEST_CASE("identity family") {
  std::vector<Matrix> mats{Matrix::Identity(4, 4)};
  const Diagonalizer d = uwedge(mats);
  CHECK((d.v.cwiseAbs() - Matrix::Identity(4, 4)).norm() < 1e-12);
  CHECK(offdiag_cost(d.v, mats) == doctest::Approx(0.0));
}

TEST_CASE("offdiag_cost by hand") {
  std::vector<Matrix> diag{Vector::LinSpaced(3, 1, 3).asDiagonal(), Matrix(Vector::Ones(3).asDiagonal())};
  CHECK(offdiag_cost(Matrix::Identity(3, 3), diag) == 0.0);
  std::vector<Matrix> ones{Matrix::Ones(2, 2)};
  CHECK(offdiag_cost(Matrix::Identity(2, 2), ones) == doctest::Approx(2.0));
}

TEST_CASE("signed permutations leave the cost unchanged") {
  TestRng rng(12);
  std::vector<Matrix> mats{rng.spd(4), rng.spd(4), rng.spd(4)};
  const Matrix v = rng.gaussian(4, 4);
  Matrix ps = Matrix::Zero(4, 4);
  ps(0, 2) = -1;
  ps(1, 0) = 1;
  ps(2, 3) = -1;
  ps(3, 1) = 1;
  CHECK(offdiag_cost(ps * v, mats) == doctest::Approx(offdiag_cost(v, mats)).epsilon(1e-12));
}

TEST_CASE("uwedge recovers a mixing basis") {
  TestRng rng(13);
  for (int trial = 0; trial < 5; ++trial) {
    const Eigen::Index p = 3 + 2 * trial;
    const Matrix u = rng.orthogonal(p);
    const auto mats = diagonalizable_family(rng, u, 5);
    const Diagonalizer d = uwedge(mats);
    CHECK(d.converged);
    CHECK(offdiag_cost(d.v, mats) <= 1e-9);
    CHECK(isd::test::signed_permutation_angle(d.v.transpose(), u) <= 1e-5);
    // rows are scaled against the first matrix
    const Matrix c = d.v * mats[0] * d.v.transpose();
    CHECK((c.diagonal().array() - 1.0).abs().maxCoeff() < 1e-10);
  }
}

TEST_CASE("uwedge finds the 30 degree rotation") {
  std::vector<Matrix> mats{isd::test::example_sigma(0.9, 0.2), isd::test::example_sigma(0.3, 0.7)};
  const Diagonalizer d = uwedge(mats);
  CHECK(isd::test::signed_permutation_angle(d.v.transpose(), isd::test::rotation30()) < 1e-8);
}

TEST_CASE("rotation-angle grid agrees with uwedge on a 2x2 family") {
  TestRng rng(14);
  for (int trial = 0; trial < 5; ++trial) {
    const double theta0 = rng.uniform(0.0, std::numbers::pi);
    const auto mats = diagonalizable_family(rng, rot(theta0), 4);
    // brute force over rotations v = R(theta)^T
    double best = 1e300;
    double best_theta = 0.0;
    const int steps = 200000;
    for (int i = 0; i < steps; ++i) {
      const double theta = std::numbers::pi * i / steps;
      const double c = offdiag_cost(rot(theta).transpose(), mats);
      if (c < best) {
        best = c;
        best_theta = theta;
      }
    }
    const Diagonalizer d = uwedge(mats);
    CHECK(std::abs(offdiag_cost(d.v, mats) - best) < 1e-4);
    CHECK(isd::test::signed_permutation_angle(d.v.transpose(), rot(best_theta)) < 1e-4);
  }
}

TEST_CASE("commuting family ends up diagonal") {
  TestRng rng(15);
  const Matrix u = rng.orthogonal(6);
  const auto mats = diagonalizable_family(rng, u, 3);
  const Diagonalizer d = uwedge(mats);
  for (const auto& m : mats) {
    Matrix c = d.v * m * d.v.transpose();
    c.diagonal().setZero();
    CHECK(c.cwiseAbs().maxCoeff() < 1e-8);
  }
}

TEST_CASE("uwedge is deterministic and honours an initial value") {
  TestRng rng(16);
  std::vector<Matrix> mats{rng.spd(5), rng.spd(5), rng.spd(5), rng.spd(5)};
  const Diagonalizer a = uwedge(mats);
  const Diagonalizer b = uwedge(mats);
  CHECK(a.v == b.v);
  CHECK(a.iterations == b.iterations);
  UwedgeOptions opt;
  opt.init = a.v;
  const Diagonalizer c = uwedge(mats, opt);
  CHECK(c.iterations <= 2);
  CHECK(std::abs(c.v.determinant()) > 0.0);
}
