#pragma once

#include <string>
#include <utility>
#include <vector>

#include "mps/vecops.hpp"

namespace mps {

std::string format_g17(double v);  // 17 significant digits

// Key-value report text with stable insertion order, so identical inputs
// produce byte-identical output.
class ReportWriter {
 public:
  void put(const std::string& key, double v);
  void put(const std::string& key, bool v);
  void put(const std::string& key, long v);
  void put(const std::string& key, int v) { put(key, static_cast<long>(v)); }
  void put(const std::string& key, const std::string& v);
  void put(const std::string& key, const char* v) { put(key, std::string(v)); }
  void put_vec(const std::string& key, std::span<const double> v);

  std::string str() const;

 private:
  std::vector<std::pair<std::string, std::string>> rows_;
};

}  // namespace mps
