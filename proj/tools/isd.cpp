// isd: simulate | fit | adapt | benchmark

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <locale>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "isd/error.hpp"
#include "isd/experiments.hpp"
#include "isd/metrics.hpp"
#include "isd/serialize.hpp"

using namespace isd;

namespace {

struct PipelineFlags {
  std::size_t K = 25;
  std::size_t w = 0;
  std::string scheme = "equally_spaced";
  std::optional<double> lambda;
  bool cv = false;
  std::size_t folds = 10;
  std::size_t d = 0;
  double t_se = 1.0;
  std::string cv_se = "across_folds";
  std::string gamma_mode = "plain";
  double intercept_tol = 0.1;

  void add(CLI::App* app) {
    app->add_option("--K", K, "number of windows")->capture_default_str();
    app->add_option("--w", w, "window length (0: n/8 for equally_spaced, n/K for contiguous)")->capture_default_str();
    app->add_option("--scheme", scheme, "window scheme")->check(CLI::IsMember({"equally_spaced", "contiguous"}))->capture_default_str();
    auto* lam = app->add_option("--lambda", lambda, "fixed invariance threshold in [0, 1]");
    auto* cvf = app->add_flag("--cv", cv, "choose the threshold by cross-validation (default when --lambda is absent)");
    lam->excludes(cvf);
    app->add_option("--folds", folds, "cross-validation folds")->capture_default_str();
    app->add_option("--d", d, "cross-validation adaptation window (0: 2p)")->capture_default_str();
    app->add_option("--t-se", t_se, "standard errors allowed below the best threshold")->capture_default_str();
    app->add_option("--cv-se", cv_se, "standard error used by the one-SE rule")
        ->check(CLI::IsMember({"across_folds", "paired"}))
        ->capture_default_str();
    app->add_option("--gamma-mode", gamma_mode, "averaging of window slopes")
        ->check(CLI::IsMember({"plain", "variance_weighted"}))
        ->capture_default_str();
    app->add_option("--intercept-tol", intercept_tol, "relative sd below which the intercept is constant")->capture_default_str();
  }

  PipelineConfig config() const {
    PipelineConfig c;
    c.K = K;
    c.w = w;
    c.scheme = window_scheme_from_string(scheme);
    c.lambda = lambda;
    c.cv.folds = folds;
    c.cv.d = d;
    c.cv.t_se = t_se;
    c.cv.se_mode = cv_se_mode_from_string(cv_se);
    c.gamma_mode = gamma_mode == "plain" ? GammaMode::plain : GammaMode::variance_weighted;
    c.intercept.rel_tol = intercept_tol;
    if (lambda && !(*lambda >= 0.0 && *lambda <= 1.0)) throw ConfigError("--lambda must lie in [0, 1]");
    if (K < 1) throw ConfigError("--K must be positive");
    return c;
  }

  Json to_json() const {
    Json j{{"K", K}, {"w", w}, {"scheme", scheme}, {"folds", folds}, {"d", d}, {"t_se", t_se},
           {"cv_se", cv_se}, {"gamma_mode", gamma_mode}, {"intercept_tol", intercept_tol}};
    j["lambda"] = lambda ? Json(*lambda) : Json(nullptr);
    j["cv"] = !lambda;
    return j;
  }
};

struct DataFlags {
  std::string data;
  std::string generator = "main";
  std::size_t n = 6000;
  std::uint64_t seed = 1;
  std::string x_columns;
  std::string y_column = "y";
};

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == ',') {
      if (!cur.empty()) out.push_back(cur);
      cur.clear();
    } else if (c != ' ') {
      cur += c;
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

std::size_t parse_size(const std::string& s, const std::string& what) {
  std::size_t pos = 0;
  unsigned long long v = 0;
  try {
    v = std::stoull(s, &pos);
  } catch (const std::exception&) {
    throw ConfigError("invalid " + what + " '" + s + "'");
  }
  if (pos != s.size()) throw ConfigError("invalid " + what + " '" + s + "'");
  return static_cast<std::size_t>(v);
}

// "1-20", "1,4,9" or a mix of both
std::vector<std::uint64_t> parse_seeds(const std::string& s) {
  std::vector<std::uint64_t> out;
  for (const auto& tok : split_list(s)) {
    const auto dash = tok.find('-');
    if (dash == std::string::npos) {
      out.push_back(parse_size(tok, "seed"));
    } else {
      const auto lo = parse_size(tok.substr(0, dash), "seed range");
      const auto hi = parse_size(tok.substr(dash + 1), "seed range");
      if (hi < lo) throw ConfigError("empty seed range '" + tok + "'");
      for (auto v = lo; v <= hi; ++v) out.push_back(v);
    }
  }
  if (out.empty()) throw ConfigError("no seeds given");
  return out;
}

// Window lengths; a trailing p multiplies by the dimension ("1.5p" -> 15 for p = 10).
std::vector<std::size_t> parse_lengths(const std::string& s, std::size_t p) {
  std::vector<std::size_t> out;
  for (const auto& tok : split_list(s)) {
    if (!tok.empty() && tok.back() == 'p') {
      double f = 0.0;
      try {
        f = std::stod(tok.substr(0, tok.size() - 1));
      } catch (const std::exception&) {
        throw ConfigError("invalid length '" + tok + "'");
      }
      if (!(f > 0.0)) throw ConfigError("invalid length '" + tok + "'");
      out.push_back(static_cast<std::size_t>(std::llround(f * static_cast<double>(p))));
    } else {
      out.push_back(parse_size(tok, "length"));
    }
  }
  if (out.empty()) throw ConfigError("empty sweep");
  return out;
}

std::vector<std::string> default_x_names(std::size_t p) {
  std::vector<std::string> names;
  for (std::size_t j = 1; j <= p; ++j) names.push_back("x" + std::to_string(j));
  return names;
}

TimeSeries read_series(const std::string& path, const std::string& x_columns, const std::string& y_column) {
  std::vector<std::string> xs = split_list(x_columns);
  if (xs.empty()) {
    for (const auto& h : csv_header(path))
      if (h != y_column) xs.push_back(h);
  }
  return load_csv(path, xs, y_column);
}

std::string comment_line(const Json& config) { return "isd " + version() + " " + config.dump(); }

void ensure_parent(const std::string& path) {
  const auto parent = std::filesystem::path(path).parent_path();
  if (!parent.empty()) std::filesystem::create_directories(parent);
}

// simulate

struct SimulateFlags {
  std::string generator = "main";
  std::size_t n = 6000;
  std::uint64_t seed = 1;
  std::string schedule = "zero_shot";
  std::string out;
};

int cmd_simulate(const SimulateFlags& f) {
  const Json config{{"command", "simulate"}, {"generator", f.generator}, {"n", f.n}, {"seed", f.seed}, {"schedule", f.schedule}};
  const SimulatedData data =
      run_stage("simulate", [&] { return make_data(f.generator, f.n, f.seed, main_schedule_from_string(f.schedule)); });
  std::filesystem::create_directories(f.out);
  const auto names = default_x_names(data.history.p());
  const std::string dir = f.out;
  write_csv(dir + "/history.csv", data.history, names, "y", comment_line(config));
  write_csv(dir + "/test.csv", data.test, names, "y", comment_line(config));
  Json sidecar{{"version", version()}, {"config", config}, {"truth", data.truth}};
  write_json(dir + "/truth.json", sidecar);
  std::cout << "wrote " << dir << "/history.csv (" << data.history.n() << " rows), " << dir << "/test.csv ("
            << data.test.n() << " rows), " << dir << "/truth.json\n";
  return 0;
}

// fit

struct FitFlags {
  DataFlags data;
  PipelineFlags pipe;
  bool oracle_split = false;
  std::string truth;
  std::string out;
};

GroundTruth read_truth(const std::string& path) {
  if (path.empty()) throw ConfigError("oracle modes need --truth <truth.json>");
  const Json j = read_json(path);
  return j.contains("truth") ? j.at("truth").get<GroundTruth>() : j.get<GroundTruth>();
}

TimeSeries fit_input(const DataFlags& d, std::optional<GroundTruth>& truth_out) {
  if (!d.data.empty()) return run_stage("load", [&] { return read_series(d.data, d.x_columns, d.y_column); });
  SimulatedData sim = run_stage("simulate", [&] { return make_data(d.generator, d.n, d.seed); });
  truth_out = sim.truth;
  return sim.history;
}

int cmd_fit(const FitFlags& f) {
  const PipelineConfig cfg = f.pipe.config();
  Json config{{"command", "fit"}, {"pipeline", f.pipe.to_json()}, {"oracle_split", f.oracle_split}};
  if (f.data.data.empty()) {
    config["generator"] = f.data.generator;
    config["n"] = f.data.n;
    config["seed"] = f.data.seed;
  } else {
    config["data"] = f.data.data;
  }
  std::optional<GroundTruth> truth;
  const TimeSeries history = fit_input(f.data, truth);
  Json out{{"version", version()}, {"config", config}};
  if (f.oracle_split) {
    if (!f.truth.empty()) truth = read_truth(f.truth);
    if (!truth) throw ConfigError("--oracle-split needs --truth or a built-in generator");
    const std::size_t w = cfg.w == 0 ? history.n() / 8 : cfg.w;
    const WindowPlan plan = run_stage("windows", [&] { return make_windows(history.n(), cfg.K, w, cfg.scheme); });
    const auto moments = run_stage("moments", [&] { return window_moments(history, plan); });
    const IsdModel model = run_stage("fit_invariant", [&] { return fit_invariant(history, oracle_split(*truth), moments, cfg.intercept); });
    out["model"] = model;
    out["plan"] = plan;
    out["diagnostics"] = Json{{"dims", {model.split.dim_inv(), model.split.dim_res()}}};
  } else {
    const PipelineResult r = run_pipeline(history, cfg);
    out["model"] = r.model;
    out["plan"] = r.plan;
    out["blocks"] = r.blocks;
    out["scores"] = r.scores;
    if (r.cv) out["cv"] = *r.cv;
    out["diagnostics"] = Json{{"block_dims", r.blocks.block_dims()},
                              {"mean_abs", vector_to_json(r.scores.mean_abs)},
                              {"tau_star", real_to_json(r.blocks.tau_star)},
                              {"lambda", r.split.lambda},
                              {"dims", {r.split.dim_inv(), r.split.dim_res()}},
                              {"uwedge_iterations", r.diag.iterations},
                              {"uwedge_converged", r.diag.converged}};
    std::cerr << "blocks";
    for (int d : r.blocks.block_dims()) std::cerr << ' ' << d;
    std::cerr << ", lambda " << r.split.lambda << ", dim_inv " << r.split.dim_inv() << '\n';
  }
  if (truth) out["diagnostics"]["mse_beta_inv"] = (out["model"].get<IsdModel>().beta_inv - truth->beta_inv_true).squaredNorm();
  if (f.out.empty()) {
    std::cout << out.dump(2) << '\n';
  } else {
    ensure_parent(f.out);
    write_json(f.out, out);
  }
  return 0;
}

// adapt

struct AdaptFlags {
  std::string model;
  std::string test;
  std::string x_columns;
  std::string y_column = "y";
  std::size_t m = 0;
  bool oracle_beta = false;
  std::string truth;
  std::string out;
};

int cmd_adapt(const AdaptFlags& f) {
  const Json config{{"command", "adapt"}, {"model", f.model}, {"test", f.test}, {"m", f.m}, {"oracle_beta", f.oracle_beta}};
  IsdModel model;
  if (f.oracle_beta) {
    const GroundTruth truth = read_truth(f.truth);
    model.split = oracle_split(truth);
    model.beta_inv = truth.beta_inv_true;
    model.intercept_mode = InterceptMode::adaptive;
    if (!f.model.empty()) {
      const IsdModel fitted = read_json(f.model).at("model").get<IsdModel>();
      model.pooled = fitted.pooled;
    } else {
      model.pooled.mean_x = Vector::Zero(truth.beta_inv_true.size());
    }
  } else {
    if (f.model.empty()) throw ConfigError("adapt needs --model (or --oracle-beta with --truth)");
    model = run_stage("load model", [&] { return read_json(f.model).at("model").get<IsdModel>(); });
  }
  const TimeSeries test = run_stage("load", [&] { return read_series(f.test, f.x_columns, f.y_column); });
  const std::size_t p = test.p();
  if (static_cast<std::size_t>(model.beta_inv.size()) != p) throw ConfigError("model and test data dimensions differ");
  if (f.m < model.split.dim_res() + 2) {
    throw ConfigError("--m " + std::to_string(f.m) + " is below dim_res + 2 = " + std::to_string(model.split.dim_res() + 2));
  }
  if (f.m >= test.n()) throw ConfigError("--m must be smaller than the number of test rows");

  std::ostream* os = &std::cout;
  std::ofstream file;
  if (!f.out.empty()) {
    ensure_parent(f.out);
    file.open(f.out);
    if (!file) throw Error("cannot write '" + f.out + "'");
    os = &file;
  }
  os->imbue(std::locale::classic());
  *os << std::setprecision(17);
  *os << "# " << comment_line(config) << '\n';
  *os << "t,y,yhat_isd,yhat_ols,ols_status";
  for (std::size_t j = 1; j <= p; ++j) *os << ",gamma_isd_" << j;
  for (std::size_t j = 1; j <= p; ++j) *os << ",gamma_ols_" << j;
  *os << '\n';

  const std::size_t steps = test.n() - f.m;
  Vector pred_isd(static_cast<Eigen::Index>(steps));
  Vector pred_ols(static_cast<Eigen::Index>(steps));
  Vector resp(static_cast<Eigen::Index>(steps));
  bool ols_ok = true;
  for (std::size_t t = f.m; t < test.n(); ++t) {
    const TimeSeries window = test.slice(t - f.m, t);
    const Vector x = test.x.row(static_cast<Eigen::Index>(t)).transpose();
    const AdaptationFit fit = run_stage("fit_adaptation", [&] { return fit_adaptation(window, model); });
    const double yi = predict(fit.gamma_isd, fit.intercept, x);
    std::optional<OlsFit> ols;
    std::string status = "ok";
    try {
      ols = rolling_ols(window);
    } catch (const UnderdeterminedError&) {
      status = "underdetermined";
    } catch (const NumericalError&) {
      status = "singular";
    }
    const auto k = static_cast<Eigen::Index>(t - f.m);
    const double y = test.y(static_cast<Eigen::Index>(t));
    pred_isd(k) = yi;
    resp(k) = y;
    *os << t << ',' << y << ',' << yi << ',';
    if (ols) {
      pred_ols(k) = predict(ols->slope, ols->intercept, x);
      *os << pred_ols(k);
    } else {
      ols_ok = false;
      *os << "NA";
    }
    *os << ',' << status;
    for (Eigen::Index j = 0; j < fit.gamma_isd.size(); ++j) *os << ',' << fit.gamma_isd(j);
    for (Eigen::Index j = 0; j < static_cast<Eigen::Index>(p); ++j) {
      *os << ',';
      if (ols) *os << ols->slope(j);
      else *os << "NA";
    }
    *os << '\n';
  }
  if (!*os) throw Error("write failed");
  const auto cum_isd = cumulative_xv(pred_isd, resp);
  std::cerr << "steps " << steps << ", cumulative explained variance isd " << cum_isd.back();
  if (ols_ok) std::cerr << ", rolling ols " << cumulative_xv(pred_ols, resp).back();
  else std::cerr << ", rolling ols not available (underdetermined or singular windows)";
  std::cerr << '\n';
  return 0;
}

// benchmark

struct BenchmarkFlags {
  std::string experiment = "zero_shot";
  std::string generator = "main";
  std::string ns = "500,1000,2500,4000,6000";
  std::size_t n = 6000;
  std::string ms = "1.5p,2p,5p,10p";
  std::string m = "3p";
  std::string seeds = "1-20";
  std::optional<std::uint64_t> seed;
  bool oracle_only = false;
  std::size_t threads = 0;
  PipelineFlags pipe;
  std::string out;
};

Json summarize(const std::vector<TidyRow>& rows) {
  std::map<std::string, std::vector<double>> groups;
  std::size_t failures = 0;
  for (const auto& r : rows) {
    if (r.metric == "failure") {
      ++failures;
      continue;
    }
    if (r.metric == "cum_xv" || !std::isfinite(r.value)) continue;
    groups[r.estimator + "|" + std::to_string(r.n) + "|" + std::to_string(r.m) + "|" + r.metric].push_back(r.value);
  }
  Json cells = Json::array();
  for (auto& [key, v] : groups) {
    std::sort(v.begin(), v.end());
    const std::size_t c = v.size();
    const double median = c % 2 ? v[c / 2] : 0.5 * (v[c / 2 - 1] + v[c / 2]);
    double mean = 0.0;
    for (double x : v) mean += x;
    mean /= static_cast<double>(c);
    const auto parts = split_list([&] {
      std::string s = key;
      std::replace(s.begin(), s.end(), '|', ',');
      return s;
    }());
    cells.push_back(Json{{"estimator", parts[0]}, {"n", parse_size(parts[1], "n")}, {"m", parse_size(parts[2], "m")},
                         {"metric", parts[3]}, {"count", c}, {"mean", mean}, {"median", median}});
  }
  return Json{{"cells", cells}, {"failures", failures}};
}

int cmd_benchmark(const BenchmarkFlags& f) {
  const PipelineConfig cfg = f.pipe.config();
  const std::vector<std::uint64_t> seeds = f.seed ? std::vector<std::uint64_t>{*f.seed} : parse_seeds(f.seeds);
  const std::size_t p = f.generator == "example2d" ? 2 : 10;
  Json config{{"command", "benchmark"}, {"experiment", f.experiment}, {"generator", f.generator},
              {"seeds", seeds}, {"pipeline", f.pipe.to_json()}, {"threads", f.threads}};
  std::vector<TidyRow> rows;
  if (f.experiment == "zero_shot") {
    std::vector<std::size_t> ns;
    for (const auto& tok : split_list(f.ns)) ns.push_back(parse_size(tok, "n"));
    if (ns.empty()) throw ConfigError("empty sweep");
    config["ns"] = ns;
    rows = benchmark_zero_shot(f.generator, ns, seeds, cfg, f.threads);
  } else if (f.experiment == "adaptation") {
    if (f.generator != "main") throw ConfigError("the adaptation experiment uses the main generator");
    const auto ms = parse_lengths(f.ms, p);
    config["n"] = f.n;
    config["ms"] = ms;
    config["oracle_only"] = f.oracle_only;
    rows = benchmark_adaptation(f.n, ms, seeds, cfg, !f.oracle_only, f.threads);
  } else if (f.experiment == "cumulative") {
    if (f.generator != "main") throw ConfigError("the cumulative experiment uses the main generator");
    const auto m = parse_lengths(f.m, p);
    if (m.size() != 1) throw ConfigError("--m takes a single length for the cumulative experiment");
    config["n"] = f.n;
    config["m"] = m[0];
    rows = benchmark_cumulative(f.n, m[0], seeds, cfg, f.threads);
  } else {
    throw ConfigError("unknown experiment '" + f.experiment + "' (zero_shot, adaptation, cumulative)");
  }
  const Json summary{{"version", version()}, {"config", config}, {"summary", summarize(rows)}};
  if (f.out.empty()) {
    write_tidy_csv("/dev/stdout", rows, comment_line(config));
  } else {
    ensure_parent(f.out);
    write_tidy_csv(f.out + ".csv", rows, comment_line(config));
    write_json(f.out + ".json", summary);
    std::cerr << "wrote " << f.out << ".csv (" << rows.size() << " rows) and " << f.out << ".json\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Invariant subspace decomposition for time-varying linear models"};
  app.set_version_flag("--version", version());
  app.require_subcommand(1);

  SimulateFlags sim;
  auto* s = app.add_subcommand("simulate", "write a synthetic dataset (history.csv, test.csv, truth.json)");
  s->add_option("--generator", sim.generator, "main, quick_varying or example2d")
      ->check(CLI::IsMember({"main", "quick_varying", "example2d"}))
      ->capture_default_str();
  s->add_option("--n", sim.n, "length of the history")->capture_default_str();
  s->add_option("--seed", sim.seed, "random seed")->capture_default_str();
  s->add_option("--schedule", sim.schedule, "test schedule of the main generator")
      ->check(CLI::IsMember({"zero_shot", "adaptation", "cumulative"}))
      ->capture_default_str();
  s->add_option("--out", sim.out, "output directory")->required();

  FitFlags fit;
  auto* fc = app.add_subcommand("fit", "estimate the invariant/residual split and the invariant component");
  fc->add_option("--data", fit.data.data, "history CSV (otherwise simulated from --generator/--n/--seed)");
  fc->add_option("--x-columns", fit.data.x_columns, "comma-separated covariate columns (default: all but --y-column)");
  fc->add_option("--y-column", fit.data.y_column, "response column")->capture_default_str();
  fc->add_option("--generator", fit.data.generator, "generator when no --data is given")
      ->check(CLI::IsMember({"main", "quick_varying", "example2d"}))
      ->capture_default_str();
  fc->add_option("--n", fit.data.n, "history length when simulating")->capture_default_str();
  fc->add_option("--seed", fit.data.seed, "seed when simulating")->capture_default_str();
  fit.pipe.add(fc);
  fc->add_flag("--oracle-split", fit.oracle_split, "use the true split from the ground truth");
  fc->add_option("--truth", fit.truth, "ground-truth sidecar written by simulate");
  fc->add_option("--out", fit.out, "model JSON (default: stdout)");

  AdaptFlags ad;
  auto* ac = app.add_subcommand("adapt", "rolling-window adaptation and one-step predictions on test data");
  ac->add_option("--model", ad.model, "model JSON written by fit");
  ac->add_option("--test", ad.test, "test CSV")->required();
  ac->add_option("--x-columns", ad.x_columns, "comma-separated covariate columns (default: all but --y-column)");
  ac->add_option("--y-column", ad.y_column, "response column")->capture_default_str();
  ac->add_option("--m", ad.m, "adaptation window length")->required();
  ac->add_flag("--oracle-beta", ad.oracle_beta, "use the true split and invariant component from --truth");
  ac->add_option("--truth", ad.truth, "ground-truth sidecar written by simulate");
  ac->add_option("--out", ad.out, "predictions CSV (default: stdout)");

  BenchmarkFlags bm;
  auto* bc = app.add_subcommand("benchmark", "Monte-Carlo sweeps written as tidy CSV plus a JSON summary");
  bc->add_option("--experiment", bm.experiment, "zero_shot, adaptation or cumulative")
      ->check(CLI::IsMember({"zero_shot", "adaptation", "cumulative"}))
      ->capture_default_str();
  bc->add_option("--generator", bm.generator, "main, quick_varying or example2d")
      ->check(CLI::IsMember({"main", "quick_varying", "example2d"}))
      ->capture_default_str();
  bc->add_option("--ns", bm.ns, "history lengths (zero_shot)")->capture_default_str();
  bc->add_option("--n", bm.n, "history length (adaptation, cumulative)")->capture_default_str();
  bc->add_option("--ms", bm.ms, "adaptation window lengths, 'p' suffix scales by the dimension")->capture_default_str();
  bc->add_option("--m", bm.m, "adaptation window length (cumulative)")->capture_default_str();
  auto* seeds_opt = bc->add_option("--seeds", bm.seeds, "seed list, e.g. 1-20 or 1,3,7")->capture_default_str();
  bc->add_option("--seed", bm.seed, "single seed")->excludes(seeds_opt);
  bc->add_flag("--oracle-only", bm.oracle_only, "adaptation: skip the estimated split, run oracle ISD and OLS only");
  bc->add_option("--threads", bm.threads, "worker threads (0: all cores)")->capture_default_str();
  bm.pipe.add(bc);
  bc->add_option("--out", bm.out, "output prefix for <out>.csv and <out>.json (default: CSV to stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*s) return cmd_simulate(sim);
    if (*fc) return cmd_fit(fit);
    if (*ac) return cmd_adapt(ad);
    if (*bc) return cmd_benchmark(bm);
  } catch (const NumericalError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const Json::exception& e) {
    std::cerr << "error: malformed input: " << e.what() << '\n';
    return 2;
  }
  return 2;
}
