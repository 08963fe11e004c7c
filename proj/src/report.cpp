#include "mps/report.hpp"

#include <cstdio>

namespace mps {

std::string format_g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void ReportWriter::put(const std::string& key, double v) { rows_.emplace_back(key, format_g17(v)); }

void ReportWriter::put(const std::string& key, bool v) {
  rows_.emplace_back(key, v ? "true" : "false");
}

void ReportWriter::put(const std::string& key, long v) {
  rows_.emplace_back(key, std::to_string(v));
}

void ReportWriter::put(const std::string& key, const std::string& v) { rows_.emplace_back(key, v); }

void ReportWriter::put_vec(const std::string& key, std::span<const double> v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ",";
    s += format_g17(v[i]);
  }
  rows_.emplace_back(key, s);
}

std::string ReportWriter::str() const {
  std::string out;
  for (const auto& [k, v] : rows_) {
    out += k;
    out += " = ";
    out += v;
    out += "\n";
  }
  return out;
}

}  // namespace mps
