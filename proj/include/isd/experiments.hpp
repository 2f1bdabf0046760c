#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "isd/ajd.hpp"
#include "isd/dataset.hpp"
#include "isd/decomposition.hpp"
#include "isd/error.hpp"
#include "isd/estimators.hpp"
#include "isd/jbd.hpp"
#include "isd/moments.hpp"
#include "isd/simulate.hpp"

namespace isd {

struct PipelineConfig {
  std::size_t K = 25;
  std::size_t w = 0;  // 0 means n / 8
  WindowScheme scheme = WindowScheme::equally_spaced;
  std::optional<double> lambda;  // unset means cross-validation
  CvOptions cv;
  GammaMode gamma_mode = GammaMode::plain;
  InterceptOptions intercept;
  UwedgeOptions uwedge;
};

struct PipelineResult {
  WindowPlan plan;
  std::vector<WindowMoments> moments;
  Diagonalizer diag;
  BlockDecomposition blocks;
  Vector gamma_bar;
  InvarianceScores scores;
  std::optional<CvResult> cv;
  SubspaceSplit split;
  IsdModel model;
};

// Runs the named stage; errors are rethrown with the stage name prepended
// and their category kept.
template <class F>
auto run_stage(const char* name, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const UnderdeterminedError& e) {
    throw UnderdeterminedError(std::string("stage '") + name + "': " + e.what());
  } catch (const NumericalError& e) {
    throw NumericalError(std::string("stage '") + name + "': " + e.what());
  } catch (const ConfigError& e) {
    throw ConfigError(std::string("stage '") + name + "': " + e.what());
  }
}

// windows -> moments -> uwedge -> blocks -> scores -> lambda -> invariant fit
PipelineResult run_pipeline(const TimeSeries& history, const PipelineConfig& config);

// "main", "quick_varying" or "example2d"
SimulatedData make_data(const std::string& generator, std::size_t n, std::uint64_t seed,
                        MainSchedule schedule = MainSchedule::zero_shot);

// Model using the true split and true invariant component.
IsdModel oracle_model(const SimulatedData& data);

struct ZeroShotResult {
  std::vector<int> block_dims;  // sorted descending
  std::size_t dim_inv = 0;
  double lambda = 0.0;
  double mse_beta_inv = 0.0;
  double mse_beta_inv_oracle_split = 0.0;
  std::map<std::string, double> r2_history;  // by estimator
  std::map<std::string, double> r2_test;
};

ZeroShotResult run_zero_shot(const SimulatedData& data, const PipelineConfig& config);

struct AdaptationResult {
  std::size_t m = 0;
  std::size_t draws = 0;
  double mspe_isd = 0.0;
  double mspe_isd_oracle = 0.0;
  double mspe_ols = 0.0;  // NaN when rolling OLS is underdetermined
  bool ols_feasible = true;
};

// Sequential protocol: for every test point whose preceding m points lie in
// the same constant test segment, fit on those m points and score
// (X_t^T (gamma_{0,t} - gamma_hat))^2 at that point. estimated may be null.
AdaptationResult run_adaptation(const SimulatedData& data, const IsdModel* estimated, std::size_t m);

struct CumulativeResult {
  std::map<std::string, std::vector<double>> cum_xv;  // by estimator
};

// Online one-step prediction over the test data with adaptation windows of
// length m taken from the preceding observations (history included).
CumulativeResult run_cumulative(const SimulatedData& data, const PipelineResult& fit, std::size_t m);

struct TidyRow {
  std::string estimator;
  std::uint64_t seed = 0;
  std::size_t n = 0;
  std::size_t m = 0;
  std::string metric;
  double value = 0.0;
  std::string note;
};

// Columns estimator,seed,n,m,metric,value,note; NaN values are written as NA.
void write_tidy_csv(const std::string& path, const std::vector<TidyRow>& rows, const std::string& comment = "");

// Calls f(i) for i in [0, count) on up to threads workers (0 means hardware
// concurrency). The first exception is rethrown after all workers finish.
void parallel_for(std::size_t count, std::size_t threads, const std::function<void(std::size_t)>& f);

std::vector<TidyRow> benchmark_zero_shot(const std::string& generator, const std::vector<std::size_t>& ns,
                                         const std::vector<std::uint64_t>& seeds, const PipelineConfig& config,
                                         std::size_t threads = 0);

// With estimate = false only the oracle ISD variant and rolling OLS are run.
std::vector<TidyRow> benchmark_adaptation(std::size_t n, const std::vector<std::size_t>& ms,
                                          const std::vector<std::uint64_t>& seeds, const PipelineConfig& config,
                                          bool estimate, std::size_t threads = 0);

std::vector<TidyRow> benchmark_cumulative(std::size_t n, std::size_t m, const std::vector<std::uint64_t>& seeds,
                                          const PipelineConfig& config, std::size_t threads = 0);

}  // namespace isd

