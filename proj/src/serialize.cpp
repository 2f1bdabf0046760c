#include "isd/serialize.hpp"

#include <cmath>
#include <fstream>
#include <limits>

#include "isd/error.hpp"

#ifndef ISD_VERSION
#define ISD_VERSION "unknown"
#endif

namespace isd {

std::string version() { return ISD_VERSION; }

Json matrix_to_json(const Matrix& m) {
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

Matrix matrix_from_json(const Json& j) {
  if (!j.is_array()) throw ConfigError("expected a matrix as an array of rows");
  const auto rows = static_cast<Eigen::Index>(j.size());
  const auto cols = rows == 0 ? Eigen::Index{0} : static_cast<Eigen::Index>(j[0].size());
  Matrix m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const Json& row = j[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols) throw ConfigError("ragged matrix in JSON");
    for (Eigen::Index c = 0; c < cols; ++c) m(i, c) = row[static_cast<std::size_t>(c)].get<double>();
  }
  return m;
}

Json vector_to_json(const Vector& v) { return Json(std::vector<double>(v.data(), v.data() + v.size())); }

Vector vector_from_json(const Json& j) {
  const auto values = j.get<std::vector<double>>();
  return Eigen::Map<const Vector>(values.data(), static_cast<Eigen::Index>(values.size()));
}

Json real_to_json(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (std::isnan(v)) return "nan";
  return v;
}

double real_from_json(const Json& j) {
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
    throw ConfigError("invalid real '" + s + "'");
  }
  return j.get<double>();
}

void to_json(Json& j, const Window& w) { j = Json::array({w.start, w.end}); }

void from_json(const Json& j, Window& w) {
  if (!j.is_array() || j.size() != 2) throw ConfigError("window must be [start, end]");
  w.start = j[0].get<std::size_t>();
  w.end = j[1].get<std::size_t>();
}

void to_json(Json& j, const WindowPlan& plan) {
  j = Json{{"scheme", to_string(plan.scheme)}, {"K", plan.K}, {"w", plan.w}, {"windows", plan.windows}};
}

void from_json(const Json& j, WindowPlan& plan) {
  plan.scheme = window_scheme_from_string(j.at("scheme").get<std::string>());
  plan.K = j.at("K").get<std::size_t>();
  plan.w = j.at("w").get<std::size_t>();
  plan.windows = j.at("windows").get<std::vector<Window>>();
}

void to_json(Json& j, const WindowMoments& m) {
  j = Json{{"window", m.window},
           {"sigma_hat", matrix_to_json(m.sigma_hat)},
           {"mu_hat", vector_to_json(m.mu_hat)},
           {"gamma_hat", vector_to_json(m.gamma_hat)},
           {"gamma0_hat", m.gamma0_hat},
           {"noise_var", m.noise_var},
           {"coef_cov", matrix_to_json(m.coef_cov)}};
}

void to_json(Json& j, const PooledMoments& m) {
  j = Json{{"var_x_bar", matrix_to_json(m.var_x_bar)},
           {"cov_xy_bar", vector_to_json(m.cov_xy_bar)},
           {"mean_x", vector_to_json(m.mean_x)},
           {"mean_y", m.mean_y},
           {"n", m.n},
           {"singular", m.singular}};
}

void from_json(const Json& j, PooledMoments& m) {
  m.var_x_bar = matrix_from_json(j.at("var_x_bar"));
  m.cov_xy_bar = vector_from_json(j.at("cov_xy_bar"));
  m.mean_x = vector_from_json(j.at("mean_x"));
  m.mean_y = j.at("mean_y").get<double>();
  m.n = j.at("n").get<std::size_t>();
  m.singular = j.value("singular", false);
}

void to_json(Json& j, const BlockDecomposition& bd) {
  j = Json{{"u_hat", matrix_to_json(bd.u_hat)},
           {"blocks", bd.blocks},
           {"tau_star", real_to_json(bd.tau_star)},
           {"objective", real_to_json(bd.objective)}};
}

void from_json(const Json& j, BlockDecomposition& bd) {
  bd.u_hat = matrix_from_json(j.at("u_hat"));
  bd.blocks = j.at("blocks").get<std::vector<IndexSet>>();
  bd.tau_star = real_from_json(j.at("tau_star"));
  bd.objective = real_from_json(j.at("objective"));
}

void to_json(Json& j, const InvarianceScores& s) {
  j = Json{{"c", matrix_to_json(s.c)}, {"mean_abs", vector_to_json(s.mean_abs)}};
}

void to_json(Json& j, const SubspaceSplit& s) {
  j = Json{{"u_hat", matrix_to_json(s.u_hat)},
           {"inv_columns", s.inv_columns},
           {"res_columns", s.res_columns},
           {"inv_blocks", s.inv_blocks},
           {"lambda", s.lambda},
           {"dims", Json::array({s.dim_inv(), s.dim_res()})}};
}

void from_json(const Json& j, SubspaceSplit& s) {
  s.u_hat = matrix_from_json(j.at("u_hat"));
  s.inv_columns = j.at("inv_columns").get<IndexSet>();
  s.res_columns = j.at("res_columns").get<IndexSet>();
  s.inv_blocks = j.value("inv_blocks", std::vector<int>{});
  s.lambda = j.value("lambda", 0.0);
  if (s.inv_columns.size() + s.res_columns.size() != static_cast<std::size_t>(s.u_hat.cols())) {
    throw ConfigError("split columns do not cover u_hat");
  }
  // u_inv()/u_res() rely on the invariant columns coming first
  for (std::size_t i = 0; i < s.inv_columns.size(); ++i) {
    if (s.inv_columns[i] != static_cast<int>(i)) throw ConfigError("split JSON: invariant columns must come first");
  }
}

void to_json(Json& j, const IsdModel& m) {
  j = Json{{"split", m.split},
           {"beta_inv", vector_to_json(m.beta_inv)},
           {"intercept_mode", to_string(m.intercept_mode)},
           {"gamma0", m.gamma0},
           {"zero_shot_intercept", m.zero_shot_intercept()},
           {"pooled", m.pooled}};
}

void from_json(const Json& j, IsdModel& m) {
  m.split = j.at("split").get<SubspaceSplit>();
  m.beta_inv = vector_from_json(j.at("beta_inv"));
  m.intercept_mode = intercept_mode_from_string(j.at("intercept_mode").get<std::string>());
  m.gamma0 = j.at("gamma0").get<double>();
  m.pooled = j.at("pooled").get<PooledMoments>();
  if (m.beta_inv.size() != m.split.u_hat.rows()) throw ConfigError("model JSON: beta_inv and split dimensions differ");
}

void to_json(Json& j, const AdaptationFit& f) {
  j = Json{{"delta_res", vector_to_json(f.delta_res)},
           {"gamma_isd", vector_to_json(f.gamma_isd)},
           {"intercept", f.intercept},
           {"window", f.window}};
}

void to_json(Json& j, const GroundTruth& g) {
  Json sigmas = Json::array();
  for (const auto& s : g.sigma_regimes) sigmas.push_back(matrix_to_json(s));
  j = Json{{"generator", g.generator},
           {"n_history", g.n_history},
           {"seed", g.seed},
           {"u_true", matrix_to_json(g.u_true)},
           {"gamma0_t", matrix_to_json(g.gamma0_t)},
           {"sigma_regimes", sigmas},
           {"regime_starts", g.regime_starts},
           {"noise_var", g.noise_var},
           {"dims", Json::array({g.dim_inv, g.dim_res})},
           {"inv_columns", g.inv_columns},
           {"res_columns", g.res_columns},
           {"beta_inv", vector_to_json(g.beta_inv_true)},
           {"test_segments", g.test_segments}};
  if (g.centers.size() > 0) j["centers"] = matrix_to_json(g.centers);
}

void from_json(const Json& j, GroundTruth& g) {
  g.generator = j.at("generator").get<std::string>();
  g.n_history = j.at("n_history").get<std::size_t>();
  g.seed = j.at("seed").get<std::uint64_t>();
  g.u_true = matrix_from_json(j.at("u_true"));
  g.gamma0_t = matrix_from_json(j.at("gamma0_t"));
  g.sigma_regimes.clear();
  for (const auto& s : j.at("sigma_regimes")) g.sigma_regimes.push_back(matrix_from_json(s));
  g.regime_starts = j.at("regime_starts").get<std::vector<std::size_t>>();
  g.noise_var = j.at("noise_var").get<double>();
  g.dim_inv = j.at("dims").at(0).get<std::size_t>();
  g.dim_res = j.at("dims").at(1).get<std::size_t>();
  g.inv_columns = j.at("inv_columns").get<IndexSet>();
  g.res_columns = j.at("res_columns").get<IndexSet>();
  g.beta_inv_true = vector_from_json(j.at("beta_inv"));
  g.test_segments = j.at("test_segments").get<std::vector<Window>>();
  if (j.contains("centers")) g.centers = matrix_from_json(j.at("centers"));
}

void to_json(Json& j, const CvResult& r) {
  j = Json{{"lambda", r.lambda}, {"grid", r.grid}, {"mean", r.mean}, {"se", r.se}, {"fold_means", r.fold_means}};
}

Json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open '" + path + "'");
  try {
    return Json::parse(in);
  } catch (const Json::exception& e) {
    throw ConfigError("'" + path + "' is not valid JSON: " + e.what());
  }
}

void write_json(const std::string& path, const Json& j) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write '" + path + "'");
  out << j.dump(2) << '\n';
  if (!out) throw Error("write to '" + path + "' failed");
}

}  // namespace isd
