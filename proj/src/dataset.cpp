#include "isd/dataset.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <system_error>

#include "isd/error.hpp"

namespace isd {

TimeSeries TimeSeries::make(Matrix x, Vector y, long t0) {
  if (x.rows() < 1 || x.cols() < 1) throw ConfigError("TimeSeries: need n >= 1 and p >= 1");
  if (x.rows() != y.size()) throw ConfigError("TimeSeries: x and y lengths differ");
  if (!x.allFinite() || !y.allFinite()) throw ConfigError("TimeSeries: non-finite entries");
  return TimeSeries{std::move(x), std::move(y), t0};
}

TimeSeries TimeSeries::slice(std::size_t start, std::size_t end) const {
  if (start > end || end > n()) throw ConfigError("TimeSeries::slice: range out of bounds");
  const auto len = static_cast<Eigen::Index>(end - start);
  const auto s = static_cast<Eigen::Index>(start);
  return TimeSeries{x.middleRows(s, len), y.segment(s, len), t0 + static_cast<long>(start)};
}

TimeSeries drop_rows(const TimeSeries& ts, std::size_t start, std::size_t end) {
  if (start > end || end > ts.n()) throw ConfigError("drop_rows: range out of bounds");
  const auto keep = static_cast<Eigen::Index>(ts.n() - (end - start));
  TimeSeries out{Matrix(keep, ts.x.cols()), Vector(keep), ts.t0};
  const auto head = static_cast<Eigen::Index>(start);
  const auto tail = static_cast<Eigen::Index>(ts.n() - end);
  out.x.topRows(head) = ts.x.topRows(head);
  out.y.head(head) = ts.y.head(head);
  out.x.bottomRows(tail) = ts.x.bottomRows(tail);
  out.y.tail(tail) = ts.y.tail(tail);
  return out;
}

TimeSeries concat(const TimeSeries& a, const TimeSeries& b) {
  if (a.p() != b.p()) throw ConfigError("concat: dimension mismatch");
  TimeSeries out{Matrix(a.x.rows() + b.x.rows(), a.x.cols()), Vector(a.y.size() + b.y.size()), a.t0};
  out.x << a.x, b.x;
  out.y << a.y, b.y;
  return out;
}

WindowPlan make_windows(std::size_t n, std::size_t K, std::size_t w, WindowScheme scheme) {
  if (K < 1) throw ConfigError("make_windows: K must be >= 1");
  if (w > n) throw ConfigError("make_windows: window length exceeds series length");
  WindowPlan plan;
  plan.scheme = scheme;
  plan.K = K;
  if (scheme == WindowScheme::contiguous) {
    const std::size_t len = n / K;
    if (w != 0 && w != len) throw ConfigError("make_windows: contiguous scheme requires w = floor(n/K)");
    if (len < 1) throw ConfigError("make_windows: K * w exceeds n");
    plan.w = len;
    for (std::size_t k = 0; k < K; ++k) plan.windows.push_back({k * len, (k + 1) * len});
    return plan;
  }
  if (w < 1) throw ConfigError("make_windows: window length must be >= 1");
  plan.w = w;
  const std::size_t span = n - w;
  for (std::size_t j = 0; j < K; ++j) {
    const std::size_t start = K == 1 ? 0 : (j * span) / (K - 1);
    plan.windows.push_back({start, start + w});
  }
  return plan;
}

void validate_plan(const WindowPlan& plan, std::size_t n, std::size_t p) {
  if (plan.windows.empty()) throw ConfigError("window plan is empty");
  for (std::size_t k = 0; k < plan.windows.size(); ++k) {
    const Window& win = plan.windows[k];
    if (win.start >= win.end || win.end > n) {
      throw ConfigError("window " + std::to_string(k) + " is outside [0, n)");
    }
    if (win.length() < p + 2) {
      throw ConfigError("window " + std::to_string(k) + " has length " + std::to_string(win.length()) +
                        " < p + 2 = " + std::to_string(p + 2));
    }
  }
}

std::string to_string(WindowScheme scheme) {
  return scheme == WindowScheme::contiguous ? "contiguous" : "equally_spaced";
}

WindowScheme window_scheme_from_string(const std::string& s) {
  if (s == "contiguous") return WindowScheme::contiguous;
  if (s == "equally_spaced") return WindowScheme::equally_spaced;
  throw ConfigError("unknown window scheme '" + s + "'");
}

namespace {

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, ',')) {
    const auto first = cell.find_first_not_of(" \t\r");
    const auto last = cell.find_last_not_of(" \t\r");
    out.push_back(first == std::string::npos ? std::string() : cell.substr(first, last - first + 1));
  }
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

double parse_cell(const std::string& cell, std::size_t row, const std::string& column) {
  double value = 0.0;
  const char* begin = cell.data();
  const char* end = cell.data() + cell.size();
  if (begin != end && *begin == '+') ++begin;
  const auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc() || ptr != end || cell.empty() || !std::isfinite(value)) {
    throw ConfigError("load_csv: non-numeric value '" + cell + "' at row " + std::to_string(row) +
                      ", column '" + column + "'");
  }
  return value;
}

}  // namespace

namespace {

bool is_comment(const std::string& line) { return !line.empty() && line[0] == '#'; }

// Positions the stream after the header line and returns the header.
std::string read_header(std::istream& in, const std::string& path) {
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (first && line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) line.erase(0, 3);
    first = false;
    if (!is_comment(line)) return line;
  }
  throw ConfigError("load_csv: '" + path + "' is empty");
}

}  // namespace

std::vector<std::string> csv_header(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open '" + path + "'");
  return split_line(read_header(in, path));
}

TimeSeries load_csv(const std::string& path, const std::vector<std::string>& x_columns,
                    const std::string& y_column) {
  const std::vector<std::string> header = csv_header(path);
  auto column_index = [&](const std::string& name) {
    for (std::size_t i = 0; i < header.size(); ++i) {
      if (header[i] == name) return i;
    }
    throw ConfigError("load_csv: missing column '" + name + "' in '" + path + "'");
  };
  if (x_columns.empty()) throw ConfigError("load_csv: no covariate columns requested");
  std::vector<std::size_t> x_idx;
  for (const auto& name : x_columns) x_idx.push_back(column_index(name));
  const std::size_t y_idx = column_index(y_column);

  std::ifstream in(path);
  read_header(in, path);
  std::string line;
  std::vector<double> xs;
  std::vector<double> ys;
  std::size_t row = 0;
  while (std::getline(in, line)) {
    ++row;
    if (line.find_first_not_of(" \t\r") == std::string::npos || is_comment(line)) continue;
    const auto cells = split_line(line);
    if (cells.size() != header.size()) {
      throw ConfigError("load_csv: row " + std::to_string(row) + " has " + std::to_string(cells.size()) +
                        " cells, header has " + std::to_string(header.size()));
    }
    for (std::size_t j = 0; j < x_idx.size(); ++j) xs.push_back(parse_cell(cells[x_idx[j]], row, x_columns[j]));
    ys.push_back(parse_cell(cells[y_idx], row, y_column));
  }
  if (ys.empty()) throw ConfigError("load_csv: '" + path + "' has no data rows");
  const auto n = static_cast<Eigen::Index>(ys.size());
  const auto p = static_cast<Eigen::Index>(x_idx.size());
  Matrix x = Eigen::Map<Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(xs.data(), n, p);
  Vector y = Eigen::Map<Vector>(ys.data(), n);
  return TimeSeries::make(std::move(x), std::move(y));
}

void write_csv(const std::string& path, const TimeSeries& ts, const std::vector<std::string>& x_names,
               const std::string& y_name, const std::string& comment) {
  if (x_names.size() != ts.p()) throw ConfigError("write_csv: column name count differs from p");
  if (comment.find('\n') != std::string::npos) throw ConfigError("write_csv: comment must be a single line");
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write '" + path + "'");
  out.imbue(std::locale::classic());
  if (!comment.empty()) out << "# " << comment << '\n';
  for (const auto& name : x_names) out << name << ',';
  out << y_name << '\n';
  out << std::setprecision(17);
  for (Eigen::Index t = 0; t < ts.x.rows(); ++t) {
    for (Eigen::Index j = 0; j < ts.x.cols(); ++j) out << ts.x(t, j) << ',';
    out << ts.y(t) << '\n';
  }
  if (!out) throw ConfigError("write failed for '" + path + "'");
}

}  // namespace isd
