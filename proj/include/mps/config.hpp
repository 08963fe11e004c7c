#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "mps/gfunction.hpp"
#include "mps/problem.hpp"
#include "mps/report.hpp"

namespace mps {

struct ParseError : std::runtime_error {
  ParseError(const std::string& msg, int line_no)
      : std::runtime_error(line_no > 0 ? msg + " (line " + std::to_string(line_no) + ")" : msg),
        line(line_no) {}
  int line = 0;
};

// Flat key-value problem files: "section.key = value" per line, '#' comments.
class KvFile {
 public:
  static KvFile parse_file(const std::string& path);
  static KvFile parse_string(const std::string& text, const std::string& origin = "<string>");

  bool has(const std::string& key) const;
  std::string get_string(const std::string& key) const;
  std::string get_string(const std::string& key, const std::string& fallback) const;
  double get_double(const std::string& key) const;
  double get_double(const std::string& key, double fallback) const;
  int get_int(const std::string& key, int fallback) const;
  std::vector<double> get_list(const std::string& key) const;  // comma separated
  int line_of(const std::string& key) const;

  // Keys never read back; used to reject unknown/misspelled entries.
  std::vector<std::string> unconsumed() const;
  void mark_consumed(const std::string& key) const;

 private:
  struct Entry {
    std::string value;
    int line;
    mutable bool consumed = false;
  };
  std::map<std::string, Entry> entries_;
  std::string origin_;
};

// Parses and validates a problem file; throws ParseError (bad syntax or
// values) or std::invalid_argument (broken invariants, named field).
ProblemSpec load_problem(const std::string& path);
ProblemSpec problem_from_kv(const KvFile& kv);

GFunctionSpec gfun_from_kv(const KvFile& kv, int dimension);
std::string serialize_gfun(const GFunctionSpec& g);  // key-value text block
void describe_gfun(ReportWriter& w, const GFunctionSpec& g);

}  // namespace mps
