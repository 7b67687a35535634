#pragma once

// Output helpers: JSON documents, RFC-4180 CSV and whitespace-separated
// plot data.

#include "json.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "zeroscope/errors.hpp"

namespace zeroscope::report {

using json = nlohmann::ordered_json;

/// Shortest decimal that round-trips; non-finite values become null in JSON.
inline json number(double v) {
  if (!std::isfinite(v)) return nullptr;
  return v;
}

inline std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  for (int prec = 15; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof buf, "%.*g", prec, v);
    if (std::strtod(buf, nullptr) == v) break;
  }
  return buf;
}

/// A field quoted when it holds a comma, quote, CR or LF; quotes double.
inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

class CsvWriter {
 public:
  explicit CsvWriter(std::ostream& os) : os_(os) {}

  void row(const std::vector<std::string>& fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) {
      if (i) os_ << ',';
      os_ << csv_field(fields[i]);
    }
    os_ << "\r\n";
  }

 private:
  std::ostream& os_;
};

/// Columns separated by spaces under a `#` header line.
inline void write_plot_data(std::ostream& os, const std::vector<std::string>& header,
                            const std::vector<std::vector<double>>& rows) {
  os << '#';
  for (const auto& h : header) os << ' ' << h;
  os << '\n';
  for (const auto& r : rows) {
    for (std::size_t i = 0; i < r.size(); ++i) os << (i ? " " : "") << format_double(r[i]);
    os << '\n';
  }
}

/// Writes to `path`, or to `fallback` when the path is empty or "-".
inline void emit(const std::string& path, const std::string& content, std::ostream& fallback) {
  if (path.empty() || path == "-") {
    fallback << content;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw resource_error("cannot open " + path + " for writing");
  f << content;
  if (!f) throw resource_error("write to " + path + " failed");
}

inline json error_document(const std::string& kind, const std::string& message) {
  json j;
  j["error"] = {{"kind", kind}, {"message", message}};
  return j;
}

}  // namespace zeroscope::report
