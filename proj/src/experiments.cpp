#include "isd/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <fstream>
#include <limits>
#include <locale>
#include <mutex>
#include <sstream>
#include <thread>

#include "isd/metrics.hpp"

namespace isd {

PipelineResult run_pipeline(const TimeSeries& history, const PipelineConfig& config) {
  PipelineResult r;
  const std::size_t n = history.n();
  const std::size_t w = config.w == 0 ? (config.scheme == WindowScheme::contiguous ? n / std::max<std::size_t>(config.K, 1) : n / 8)
                                      : config.w;
  r.plan = run_stage("windows", [&] {
    WindowPlan plan = make_windows(n, config.K, w, config.scheme);
    validate_plan(plan, n, history.p());
    return plan;
  });
  r.moments = run_stage("moments", [&] { return window_moments(history, r.plan); });
  const std::vector<Matrix> covs = window_covariances(r.moments);
  r.diag = run_stage("uwedge", [&] { return uwedge(covs, config.uwedge); });
  r.blocks = run_stage("select_blocks", [&] { return select_blocks(r.diag, covs); });
  r.gamma_bar = run_stage("gamma_bar", [&] { return weighted_gamma(r.moments, config.gamma_mode); });
  r.scores = run_stage("invariance_scores", [&] { return invariance_scores(history, r.plan, r.blocks, r.gamma_bar); });
  double lambda = 0.0;
  if (config.lambda) {
    lambda = *config.lambda;
  } else {
    r.cv = run_stage("cross_validate_lambda",
                     [&] { return cross_validate_lambda(history, r.plan, r.blocks, r.scores, config.cv); });
    lambda = r.cv->lambda;
  }
  r.split = run_stage("split_subspaces", [&] { return split_subspaces(r.scores, r.blocks, lambda); });
  r.model = run_stage("fit_invariant", [&] { return fit_invariant(history, r.split, r.moments, config.intercept); });
  return r;
}

SimulatedData make_data(const std::string& generator, std::size_t n, std::uint64_t seed, MainSchedule schedule) {
  if (generator == "main") return gen_main(n, seed, schedule);
  if (generator == "quick_varying") return gen_quick_varying(n, seed);
  if (generator == "example2d") return gen_example2d(n, seed);
  throw ConfigError("unknown generator '" + generator + "' (main, quick_varying, example2d)");
}

IsdModel oracle_model(const SimulatedData& data) {
  IsdModel model;
  model.split = oracle_split(data.truth);
  model.beta_inv = data.truth.beta_inv_true;
  model.intercept_mode = InterceptMode::constant;
  model.gamma0 = 0.0;
  model.pooled = pooled_moments(data.history);
  return model;
}

ZeroShotResult run_zero_shot(const SimulatedData& data, const PipelineConfig& config) {
  const PipelineResult fit = run_pipeline(data.history, config);
  ZeroShotResult out;
  out.block_dims = fit.blocks.block_dims();
  std::sort(out.block_dims.begin(), out.block_dims.end(), std::greater<>());
  out.dim_inv = fit.split.dim_inv();
  out.lambda = fit.split.lambda;
  out.mse_beta_inv = (fit.model.beta_inv - data.truth.beta_inv_true).squaredNorm();
  const IsdModel oracle_split_fit = fit_invariant(data.history, oracle_split(data.truth));
  out.mse_beta_inv_oracle_split = (oracle_split_fit.beta_inv - data.truth.beta_inv_true).squaredNorm();

  const OlsFit ols = pooled_ols(data.history);
  std::vector<Vector> slopes;
  for (const auto& m : fit.moments) slopes.push_back(m.gamma_hat);
  const Vector mm = magging(slopes, fit.model.pooled.var_x_bar);
  const std::map<std::string, Vector> coeffs{
      {"beta_inv", fit.model.beta_inv}, {"beta_inv_oracle", data.truth.beta_inv_true}, {"ols", ols.slope}, {"magging", mm}};
  WindowPlan test_plan;
  for (const Window& seg : data.truth.test_segments) test_plan.windows.push_back(seg);
  test_plan.K = test_plan.windows.size();
  for (const auto& [name, b] : coeffs) {
    out.r2_history[name] = r_squared(b, 0.0, data.history, fit.plan);
    out.r2_test[name] = r_squared(b, 0.0, data.test, test_plan);
  }
  return out;
}

AdaptationResult run_adaptation(const SimulatedData& data, const IsdModel* estimated, std::size_t m) {
  AdaptationResult out;
  out.m = m;
  const IsdModel oracle = oracle_model(data);
  const std::size_t p = data.test.p();
  out.ols_feasible = m > p;
  double sum_isd = 0.0;
  double sum_oracle = 0.0;
  double sum_ols = 0.0;
  const std::size_t n = data.truth.n_history;
  for (const Window& seg : data.truth.test_segments) {
    for (std::size_t t = seg.start + m; t < seg.end; ++t) {
      const TimeSeries window = data.test.slice(t - m, t);
      const auto ti = static_cast<Eigen::Index>(t);
      const Vector x = data.test.x.row(ti).transpose();
      const Vector g0 = data.truth.gamma0_t.row(static_cast<Eigen::Index>(n + t)).transpose();
      auto sq = [&](const Vector& g) {
        const double e = x.dot(g0 - g);
        return e * e;
      };
      sum_oracle += sq(fit_adaptation(window, oracle).gamma_isd);
      if (estimated) sum_isd += sq(fit_adaptation(window, *estimated).gamma_isd);
      if (out.ols_feasible) sum_ols += sq(rolling_ols(window).slope);
      ++out.draws;
    }
  }
  if (out.draws == 0) throw ConfigError("run_adaptation: m = " + std::to_string(m) + " leaves no evaluation points");
  const double d = static_cast<double>(out.draws);
  out.mspe_isd_oracle = sum_oracle / d;
  out.mspe_isd = estimated ? sum_isd / d : std::numeric_limits<double>::quiet_NaN();
  out.mspe_ols = out.ols_feasible ? sum_ols / d : std::numeric_limits<double>::quiet_NaN();
  return out;
}

CumulativeResult run_cumulative(const SimulatedData& data, const PipelineResult& fit, std::size_t m) {
  const TimeSeries all = concat(data.history, data.test);
  const std::size_t n = data.history.n();
  const std::size_t T = data.test.n();
  if (m > n) throw ConfigError("run_cumulative: window longer than the history");
  const OlsFit ols = pooled_ols(data.history);
  std::vector<Vector> slopes;
  for (const auto& mo : fit.moments) slopes.push_back(mo.gamma_hat);
  const Vector mm = magging(slopes, fit.model.pooled.var_x_bar);
  const double mm_intercept = fit.model.pooled.mean_y - fit.model.pooled.mean_x.dot(mm);

  std::map<std::string, Vector> preds;
  for (const char* name : {"truth", "isd", "rolling_ols", "beta_inv", "ols", "magging"}) preds[name] = Vector::Zero(static_cast<Eigen::Index>(T));
  for (std::size_t k = 0; k < T; ++k) {
    const std::size_t t = n + k;
    const TimeSeries window = all.slice(t - m, t);
    const Vector x = all.x.row(static_cast<Eigen::Index>(t)).transpose();
    const auto ki = static_cast<Eigen::Index>(k);
    preds["truth"](ki) = x.dot(data.truth.gamma0_t.row(static_cast<Eigen::Index>(t)));
    const AdaptationFit af = fit_adaptation(window, fit.model);
    preds["isd"](ki) = predict(af.gamma_isd, af.intercept, x);
    if (m > static_cast<std::size_t>(x.size())) {
      const OlsFit r = rolling_ols(window);
      preds["rolling_ols"](ki) = predict(r.slope, r.intercept, x);
    } else {
      preds["rolling_ols"](ki) = std::numeric_limits<double>::quiet_NaN();
    }
    preds["beta_inv"](ki) = predict(fit.model.beta_inv, fit.model.zero_shot_intercept(), x);
    preds["ols"](ki) = predict(ols.slope, ols.intercept, x);
    preds["magging"](ki) = predict(mm, mm_intercept, x);
  }
  CumulativeResult out;
  for (const auto& [name, p] : preds) out.cum_xv[name] = cumulative_xv(p, data.test.y);
  return out;
}

void write_tidy_csv(const std::string& path, const std::vector<TidyRow>& rows, const std::string& comment) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write '" + path + "'");
  out.imbue(std::locale::classic());
  out.precision(17);
  if (!comment.empty()) out << "# " << comment << '\n';
  out << "estimator,seed,n,m,metric,value,note\n";
  for (const auto& r : rows) {
    out << r.estimator << ',' << r.seed << ',' << r.n << ',' << r.m << ',' << r.metric << ',';
    if (std::isfinite(r.value)) out << r.value;
    else out << "NA";
    out << ',' << r.note << '\n';
  }
  if (!out) throw Error("write to '" + path + "' failed");
}

void parallel_for(std::size_t count, std::size_t threads, const std::function<void(std::size_t)>& f) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min(threads, std::max<std::size_t>(count, 1));
  std::atomic<std::size_t> next{0};
  std::exception_ptr first;
  std::mutex mu;
  auto worker = [&] {
    for (std::size_t i = next++; i < count; i = next++) {
      try {
        f(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(mu);
        if (!first) first = std::current_exception();
      }
    }
  };
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t i = 0; i < threads; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (first) std::rethrow_exception(first);
}

namespace {

std::string describe_failure(const std::exception& e) {
  std::string s = e.what();
  std::replace(s.begin(), s.end(), ',', ';');
  std::replace(s.begin(), s.end(), '\n', ' ');
  return s;
}

// Runs cells concurrently, each producing its own rows; failed cells turn
// into a single annotated row. Output order follows the cell order.
std::vector<TidyRow> run_cells(std::size_t count, std::size_t threads,
                               const std::function<std::vector<TidyRow>(std::size_t)>& cell,
                               const std::function<TidyRow(std::size_t)>& key) {
  std::vector<std::vector<TidyRow>> results(count);
  parallel_for(count, threads, [&](std::size_t i) {
    try {
      results[i] = cell(i);
    } catch (const std::exception& e) {
      TidyRow r = key(i);
      r.metric = "failure";
      r.value = std::numeric_limits<double>::quiet_NaN();
      r.note = describe_failure(e);
      results[i] = {r};
    }
  });
  std::vector<TidyRow> rows;
  for (auto& r : results) rows.insert(rows.end(), r.begin(), r.end());
  return rows;
}

}  // namespace

std::vector<TidyRow> benchmark_zero_shot(const std::string& generator, const std::vector<std::size_t>& ns,
                                         const std::vector<std::uint64_t>& seeds, const PipelineConfig& config,
                                         std::size_t threads) {
  if (ns.empty() || seeds.empty()) throw ConfigError("benchmark: empty sweep");
  const std::size_t count = ns.size() * seeds.size();
  auto key = [&](std::size_t i) {
    TidyRow r;
    r.estimator = "cell";
    r.n = ns[i / seeds.size()];
    r.seed = seeds[i % seeds.size()];
    return r;
  };
  return run_cells(count, threads, [&](std::size_t i) {
    const TidyRow k = key(i);
    const SimulatedData data = make_data(generator, k.n, k.seed, MainSchedule::zero_shot);
    const ZeroShotResult z = run_zero_shot(data, config);
    std::vector<TidyRow> rows;
    auto add = [&](const std::string& est, const std::string& metric, double v, std::string note = {}) {
      rows.push_back(TidyRow{est, k.seed, k.n, 0, metric, v, std::move(note)});
    };
    add("beta_inv", "mse_beta_inv", z.mse_beta_inv);
    add("beta_inv_oracle_split", "mse_beta_inv", z.mse_beta_inv_oracle_split);
    add("beta_inv", "dim_inv", static_cast<double>(z.dim_inv));
    add("beta_inv", "lambda", z.lambda);
    std::string dims;
    for (int d : z.block_dims) dims += (dims.empty() ? "" : " ") + std::to_string(d);
    add("beta_inv", "num_blocks", static_cast<double>(z.block_dims.size()), dims);
    for (const auto& [est, v] : z.r2_history) add(est, "r2_history", v);
    for (const auto& [est, v] : z.r2_test) add(est, "r2_test", v);
    return rows;
  }, key);
}

std::vector<TidyRow> benchmark_adaptation(std::size_t n, const std::vector<std::size_t>& ms,
                                          const std::vector<std::uint64_t>& seeds, const PipelineConfig& config,
                                          bool estimate, std::size_t threads) {
  if (ms.empty() || seeds.empty()) throw ConfigError("benchmark: empty sweep");
  // one cell per seed so the historical fit is shared across m
  auto key = [&](std::size_t i) {
    TidyRow r;
    r.estimator = "cell";
    r.n = n;
    r.seed = seeds[i];
    return r;
  };
  return run_cells(seeds.size(), threads, [&](std::size_t i) {
    const std::uint64_t seed = seeds[i];
    const SimulatedData data = make_data("main", n, seed, MainSchedule::adaptation);
    std::optional<PipelineResult> fit;
    if (estimate) fit = run_pipeline(data.history, config);
    std::vector<TidyRow> rows;
    for (std::size_t m : ms) {
      const AdaptationResult a = run_adaptation(data, fit ? &fit->model : nullptr, m);
      const double sigma2 = data.truth.noise_var;
      const auto md = static_cast<double>(m);
      rows.push_back({"isd_oracle", seed, n, m, "mspe", a.mspe_isd_oracle, ""});
      if (fit) rows.push_back({"isd", seed, n, m, "mspe", a.mspe_isd, ""});
      rows.push_back({"rolling_ols", seed, n, m, "mspe", a.mspe_ols, a.ols_feasible ? "" : "underdetermined"});
      rows.push_back({"bound", seed, n, m, "sigma2_dim_inv_over_m", sigma2 * static_cast<double>(data.truth.dim_inv) / md, ""});
      rows.push_back({"bound", seed, n, m, "sigma2_dim_res_over_m", sigma2 * static_cast<double>(data.truth.dim_res) / md, ""});
      rows.push_back({"isd_oracle", seed, n, m, "draws", static_cast<double>(a.draws), ""});
    }
    return rows;
  }, key);
}

std::vector<TidyRow> benchmark_cumulative(std::size_t n, std::size_t m, const std::vector<std::uint64_t>& seeds,
                                          const PipelineConfig& config, std::size_t threads) {
  if (seeds.empty()) throw ConfigError("benchmark: empty sweep");
  auto key = [&](std::size_t i) {
    TidyRow r;
    r.estimator = "cell";
    r.n = n;
    r.m = m;
    r.seed = seeds[i];
    return r;
  };
  return run_cells(seeds.size(), threads, [&](std::size_t i) {
    const std::uint64_t seed = seeds[i];
    const SimulatedData data = make_data("main", n, seed, MainSchedule::cumulative);
    const PipelineResult fit = run_pipeline(data.history, config);
    const CumulativeResult c = run_cumulative(data, fit, m);
    std::vector<TidyRow> rows;
    for (const auto& [est, curve] : c.cum_xv) {
      for (std::size_t t = 0; t < curve.size(); ++t) {
        rows.push_back({est, seed, n, m, "cum_xv", curve[t], "t=" + std::to_string(t)});
      }
    }
    return rows;
  }, key);
}

}  // namespace isd
