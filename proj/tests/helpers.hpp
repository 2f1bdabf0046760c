#pragma once

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "isd/linalg.hpp"

namespace isd::test {

inline const double kSqrt3 = std::sqrt(3.0);

// 30 degree rotation used by the two-dimensional running example.
inline Matrix rotation30() {
  Matrix u(2, 2);
  u << 0.5 * kSqrt3, 0.5, -0.5, 0.5 * kSqrt3;
  return u;
}

// Closed-form covariance of the two-dimensional example, written out entrywise.
inline Matrix example_sigma(double s1, double s2) {
  Matrix s(2, 2);
  s << 3 * s1 + s2, kSqrt3 * (s2 - s1), kSqrt3 * (s2 - s1), s1 + 3 * s2;
  return s / 4.0;
}

inline Vector example_gamma(double t, double n) {
  Vector g(2);
  g << 1.5 * kSqrt3 + 1 - kSqrt3 * t / n, t / n - 1.5 + kSqrt3;
  return g;
}

// std::mt19937_64 keeps test inputs independent of the library's own generator.
struct TestRng {
  std::mt19937_64 eng;
  explicit TestRng(std::uint64_t seed) : eng(seed) {}
  double normal() { return std::normal_distribution<double>(0.0, 1.0)(eng); }
  double uniform(double lo = 0.0, double hi = 1.0) { return std::uniform_real_distribution<double>(lo, hi)(eng); }
  Matrix gaussian(Eigen::Index r, Eigen::Index c) {
    Matrix m(r, c);
    for (Eigen::Index j = 0; j < c; ++j)
      for (Eigen::Index i = 0; i < r; ++i) m(i, j) = normal();
    return m;
  }
  Vector gaussian(Eigen::Index n) { return gaussian(n, 1).col(0); }
  Matrix orthogonal(Eigen::Index p) {
    Eigen::HouseholderQR<Matrix> qr(gaussian(p, p));
    Matrix q = qr.householderQ();
    return q;
  }
  Matrix spd(Eigen::Index p) {
    const Matrix a = gaussian(p, p);
    return a * a.transpose() / static_cast<double>(p) + 0.5 * Matrix::Identity(p, p);
  }
};

// Rows of x drawn from N(0, sigma).
inline Matrix sample_gaussian(TestRng& rng, const Matrix& sigma, Eigen::Index n) {
  const Matrix l = Eigen::LLT<Matrix>(sigma).matrixL();
  return rng.gaussian(n, sigma.rows()) * l.transpose();
}

// Max angle (radians) between columns of a and the best-matching column of b,
// for a signed permutation match. Columns of both are normalized first.
inline double signed_permutation_angle(const Matrix& a, const Matrix& b) {
  double worst = 0.0;
  std::vector<bool> used(static_cast<std::size_t>(b.cols()), false);
  for (Eigen::Index i = 0; i < a.cols(); ++i) {
    const Vector ai = a.col(i).normalized();
    double best = -1.0;
    Eigen::Index arg = -1;
    for (Eigen::Index j = 0; j < b.cols(); ++j) {
      if (used[static_cast<std::size_t>(j)]) continue;
      const double c = std::abs(ai.dot(b.col(j).normalized()));
      if (c > best) {
        best = c;
        arg = j;
      }
    }
    used[static_cast<std::size_t>(arg)] = true;
    worst = std::max(worst, std::acos(std::min(1.0, best)));
  }
  return worst;
}

// Largest principal angle between span(a) and span(b).
inline double max_principal_angle(const Matrix& a, const Matrix& b) {
  const Matrix qa = Eigen::HouseholderQR<Matrix>(a).householderQ() * Matrix::Identity(a.rows(), a.cols());
  const Matrix qb = Eigen::HouseholderQR<Matrix>(b).householderQ() * Matrix::Identity(b.rows(), b.cols());
  Eigen::JacobiSVD<Matrix> svd(qa.transpose() * qb);
  const double smin = svd.singularValues().minCoeff();
  return std::acos(std::min(1.0, smin));
}

inline std::string temp_path(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / "isd_tests";
  std::filesystem::create_directories(dir);
  return (dir / name).string();
}

}  // namespace isd::test
