#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "isd/linalg.hpp"

namespace isd {

// Time-ordered regression data: row t of x is X_t^T, y(t) is Y_t.
struct TimeSeries {
  Matrix x;
  Vector y;
  long t0 = 1;

  // Validates shapes and finiteness.
  static TimeSeries make(Matrix x, Vector y, long t0 = 1);

  std::size_t n() const { return static_cast<std::size_t>(x.rows()); }
  std::size_t p() const { return static_cast<std::size_t>(x.cols()); }

  // Rows [start, end).
  TimeSeries slice(std::size_t start, std::size_t end) const;
};

// All rows of ts except [start, end), in time order.
TimeSeries drop_rows(const TimeSeries& ts, std::size_t start, std::size_t end);

TimeSeries concat(const TimeSeries& a, const TimeSeries& b);

// Half-open index range [start, end).
struct Window {
  std::size_t start = 0;
  std::size_t end = 0;

  std::size_t length() const { return end - start; }
  bool operator==(const Window&) const = default;
};

enum class WindowScheme { contiguous, equally_spaced };

struct WindowPlan {
  WindowScheme scheme = WindowScheme::contiguous;
  std::size_t K = 0;
  std::size_t w = 0;
  std::vector<Window> windows;
};

// contiguous: K back-to-back windows of length floor(n/K), trailing rows dropped;
// pass w = 0 or w = floor(n/K).
// equally_spaced: K windows of length w, starts floor(j (n-w) / (K-1)).
WindowPlan make_windows(std::size_t n, std::size_t K, std::size_t w, WindowScheme scheme);

// Throws ConfigError if any window is out of range or shorter than p + 2.
void validate_plan(const WindowPlan& plan, std::size_t n, std::size_t p);

std::string to_string(WindowScheme scheme);
WindowScheme window_scheme_from_string(const std::string& s);

// Reads a headed, comma-separated file. Numbers are parsed independently of
// the process locale. Lines starting with '#' are comments.
TimeSeries load_csv(const std::string& path, const std::vector<std::string>& x_columns,
                    const std::string& y_column);

// Header names of a CSV file.
std::vector<std::string> csv_header(const std::string& path);

// A non-empty comment is written as a leading '#' line.
void write_csv(const std::string& path, const TimeSeries& ts, const std::vector<std::string>& x_names,
               const std::string& y_name, const std::string& comment = "");

}  // namespace isd
