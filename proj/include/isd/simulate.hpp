#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "isd/dataset.hpp"
#include "isd/decomposition.hpp"
#include "isd/linalg.hpp"

namespace isd {

// Counter-based generator: the k-th draw of stream s under seed is
// splitmix64(key(seed, s) + k * golden). Output is identical on every
// platform and standard library.
class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::uint64_t stream);
  std::uint64_t next();
  double uniform();  // [0, 1)
  double uniform(double lo, double hi);
  double normal();

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

std::uint64_t splitmix64(std::uint64_t x);

// Streams so that changing one part of a generator leaves the others intact.
enum RngStream : std::uint64_t {
  stream_basis = 1,
  stream_regimes = 2,
  stream_covariates = 3,
  stream_noise = 4,
  stream_coefficients = 5,
};

Matrix random_orthogonal(std::size_t p, std::uint64_t seed);
Matrix random_orthogonal(std::size_t p, CounterRng& rng);
Matrix random_spd_block(std::size_t dim, std::uint64_t seed);
Matrix random_spd_block(std::size_t dim, CounterRng& rng);

struct GroundTruth {
  std::string generator;
  std::size_t n_history = 0;
  std::uint64_t seed = 0;
  Matrix u_true;
  Matrix gamma0_t;  // one row per time point, history followed by test
  std::vector<Matrix> sigma_regimes;
  std::vector<std::size_t> regime_starts;  // row where each regime begins
  double noise_var = 0.0;
  std::size_t dim_inv = 0;
  std::size_t dim_res = 0;
  IndexSet inv_columns;  // columns of u_true spanning the invariant space
  IndexSet res_columns;
  Vector beta_inv_true;
  std::vector<Window> test_segments;  // stretches of the test data with constant coefficients and covariance
  Matrix centers;  // quick_varying only: one row of centers per history segment

  const Matrix& sigma_at(std::size_t row) const;
  std::size_t regime_of(std::size_t row) const;
};

struct SimulatedData {
  TimeSeries history;
  TimeSeries test;
  GroundTruth truth;
};

// Split given by the true basis.
SubspaceSplit oracle_split(const GroundTruth& truth);

struct Example2dOptions {
  double noise_var = 0.25;
  std::size_t regimes = 10;
  std::size_t test_length = 350;
};

SimulatedData gen_example2d(std::size_t n, std::uint64_t seed, const Example2dOptions& options = {});

// Closed-form quantities of the two dimensional example.
Matrix example2d_rotation();
Matrix example2d_sigma(double s1, double s2);
Vector example2d_gamma(std::size_t t, std::size_t n);

enum class MainSchedule {
  zero_shot,   // 250 test points, varying coordinates at -1
  adaptation,  // two test segments of 1000 points at -0.5 and -2
  cumulative,  // three test segments of 150 points at -0.3, -0.65, -1; shifted history pattern
};

std::string to_string(MainSchedule s);
MainSchedule main_schedule_from_string(const std::string& s);

struct MainOptions {
  double noise_var = 0.64;
  std::size_t regimes = 10;
};

// p = 10, blocks of sizes 2, 4, 3, 1; the first and last blocks carry the
// time-varying coefficients.
SimulatedData gen_main(std::size_t n, std::uint64_t seed, MainSchedule schedule = MainSchedule::zero_shot,
                       const MainOptions& options = {});

// Varying coefficient of coordinate i (1-based) at time t of n.
double main_varying_coefficient(std::size_t i, std::size_t t, std::size_t n, MainSchedule schedule);

// As gen_main but the varying coordinates are redrawn uniformly around a
// center in [0, 1.2] at every time point, with 20 center changes.
SimulatedData gen_quick_varying(std::size_t n, std::uint64_t seed, const MainOptions& options = {});

}  // namespace isd
