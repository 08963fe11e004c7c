#include "mps/config.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "mps/grid_function.hpp"
#include "mps/report.hpp"

namespace mps {

namespace {

std::string trim(const std::string& s) {
  const auto lo = s.find_first_not_of(" \t\r\n");
  if (lo == std::string::npos) return "";
  const auto hi = s.find_last_not_of(" \t\r\n");
  return s.substr(lo, hi - lo + 1);
}

}  // namespace

KvFile KvFile::parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open problem file: " + path, 0);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_string(ss.str(), path);
}

KvFile KvFile::parse_string(const std::string& text, const std::string& origin) {
  KvFile kv;
  kv.origin_ = origin;
  std::stringstream ss(text);
  std::string line;
  int line_no = 0;
  while (std::getline(ss, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ParseError(origin + ": missing '='", line_no);
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw ParseError(origin + ": empty key", line_no);
    if (value.empty()) throw ParseError(origin + ": empty value for '" + key + "'", line_no);
    if (kv.entries_.count(key)) throw ParseError(origin + ": duplicate key '" + key + "'", line_no);
    kv.entries_[key] = Entry{value, line_no};
  }
  return kv;
}

bool KvFile::has(const std::string& key) const { return entries_.count(key) > 0; }

std::string KvFile::get_string(const std::string& key) const {
  const auto it = entries_.find(key);
  if (it == entries_.end()) throw ParseError(origin_ + ": missing required key '" + key + "'", 0);
  it->second.consumed = true;
  return it->second.value;
}

std::string KvFile::get_string(const std::string& key, const std::string& fallback) const {
  return has(key) ? get_string(key) : fallback;
}

double KvFile::get_double(const std::string& key) const {
  const auto it = entries_.find(key);
  if (it == entries_.end()) throw ParseError(origin_ + ": missing required key '" + key + "'", 0);
  it->second.consumed = true;
  try {
    std::size_t pos = 0;
    const double v = std::stod(it->second.value, &pos);
    if (pos != it->second.value.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (...) {
    throw ParseError(origin_ + ": '" + key + "' is not a number: " + it->second.value,
                     it->second.line);
  }
}

double KvFile::get_double(const std::string& key, double fallback) const {
  return has(key) ? get_double(key) : fallback;
}

int KvFile::get_int(const std::string& key, int fallback) const {
  if (!has(key)) return fallback;
  const double v = get_double(key);
  const int i = static_cast<int>(v);
  if (static_cast<double>(i) != v)
    throw ParseError(origin_ + ": '" + key + "' must be an integer", line_of(key));
  return i;
}

std::vector<double> KvFile::get_list(const std::string& key) const {
  const std::string raw = get_string(key);
  std::vector<double> out;
  std::stringstream ss(raw);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    try {
      out.push_back(std::stod(item));
    } catch (...) {
      throw ParseError(origin_ + ": '" + key + "' has a non-numeric entry: " + item, line_of(key));
    }
  }
  if (out.empty()) throw ParseError(origin_ + ": '" + key + "' is an empty list", line_of(key));
  return out;
}

int KvFile::line_of(const std::string& key) const {
  const auto it = entries_.find(key);
  return it == entries_.end() ? 0 : it->second.line;
}

void KvFile::mark_consumed(const std::string& key) const {
  const auto it = entries_.find(key);
  if (it != entries_.end()) it->second.consumed = true;
}

std::vector<std::string> KvFile::unconsumed() const {
  std::vector<std::string> out;
  for (const auto& [k, e] : entries_)
    if (!e.consumed) out.push_back(k);
  return out;
}

// ---------------------------------------------------------------------------

GFunctionSpec gfun_from_kv(const KvFile& kv, int dimension) {
  const std::string kind = kv.get_string("gfun.kind");
  const std::string regime_s = kv.get_string("gfun.regime", "global");
  Regime regime;
  if (regime_s == "global")
    regime = Regime::global;
  else if (regime_s == "at_infinity")
    regime = Regime::at_infinity;
  else
    throw ParseError("gfun.regime must be 'global' or 'at_infinity'", kv.line_of("gfun.regime"));

  try {
    if (kind == "power") {
      const double p = kv.get_double("gfun.p");
      const double c = kv.get_double("gfun.coef", 1.0);
      return GFunctionSpec::power(p, c, dimension, regime);
    }
    if (kind == "sum_power") {
      const std::vector<double> p = kv.get_list("gfun.p");
      std::vector<double> c(p.size(), 1.0);
      if (kv.has("gfun.coef")) c = kv.get_list("gfun.coef");
      if (static_cast<int>(p.size()) != dimension)
        throw std::invalid_argument("gfun.p must list one exponent per dimension");
      if (c.size() != p.size())
        throw std::invalid_argument("gfun.coef must match gfun.p in length");
      return GFunctionSpec::sum_power(p, c, regime);
    }
    if (kind == "power_log") {
      const double p = kv.get_double("gfun.p");
      const double c = kv.get_double("gfun.coef", 1.0);
      return GFunctionSpec::power_log(p, c, dimension, regime);
    }
  } catch (const std::invalid_argument& e) {
    throw ParseError(std::string("gfun: ") + e.what(), kv.line_of("gfun.p"));
  }
  throw ParseError("gfun.kind must be one of power, sum_power, power_log",
                   kv.line_of("gfun.kind"));
}

void describe_gfun(ReportWriter& w, const GFunctionSpec& g) {
  switch (g.kind) {
    case GKind::power:
      w.put("gfun.kind", "power");
      break;
    case GKind::sum_power:
      w.put("gfun.kind", "sum_power");
      break;
    case GKind::power_log:
      w.put("gfun.kind", "power_log");
      break;
    case GKind::custom:
      w.put("gfun.kind", "custom");
      break;
  }
  w.put("gfun.dimension", g.dimension);
  if (!g.exponents.empty()) w.put_vec("gfun.p", g.exponents);
  if (!g.coefficients.empty()) w.put_vec("gfun.coef", g.coefficients);
  w.put("gfun.regime", g.regime == Regime::global ? "global" : "at_infinity");
}

std::string serialize_gfun(const GFunctionSpec& g) {
  ReportWriter w;
  describe_gfun(w, g);
  return w.str();
}

namespace {

ScalarField scalar_field_from_kv(const KvFile& kv, const std::string& prefix, double fallback) {
  const std::string kind = kv.get_string(prefix + ".kind", "constant");
  if (kind == "constant") {
    return ScalarField::constant(kv.get_double(prefix + ".value", fallback));
  }
  if (kind == "poly") {
    const double c0 = kv.get_double(prefix + ".c0", 0.0);
    const double c1 = kv.get_double(prefix + ".c1", 0.0);
    const double k = kv.get_double(prefix + ".k", 1.0);
    if (c0 < 0.0 || c1 < 0.0)
      throw ParseError(prefix + ": poly coefficients must be nonnegative",
                       kv.line_of(prefix + ".c0"));
    return ScalarField::poly(c0, c1, k);
  }
  throw ParseError(prefix + ".kind must be 'constant' or 'poly'", kv.line_of(prefix + ".kind"));
}

}  // namespace

ProblemSpec problem_from_kv(const KvFile& kv) {
  ProblemSpec p;
  p.a = kv.get_double("interval.a");
  p.b = kv.get_double("interval.b");
  p.dim = kv.get_int("dimension", 1);
  if (!(p.a < p.b))
    throw ParseError("interval.a < interval.b required", kv.line_of("interval.a"));
  if (p.dim < 1) throw ParseError("dimension must be >= 1", kv.line_of("dimension"));

  p.g = gfun_from_kv(kv, p.dim);

  // witnesses first: catalog builders read nothing from them, validation does
  p.w.theta_F = kv.get_double("witness.theta_F");
  p.w.theta_V = kv.get_double("witness.theta_V");
  p.w.Lambda = kv.get_double("witness.Lambda");
  p.w.r0 = kv.get_double("witness.r0");
  p.w.rho0 = kv.get_double("witness.rho0");
  p.w.a_of_x = scalar_field_from_kv(kv, "witness.a", 1.0);
  p.w.b_of_t = scalar_field_from_kv(kv, "witness.b", 0.0);
  p.w.g_of_t = scalar_field_from_kv(kv, "witness.g", 0.0);

  const std::string fkind = kv.get_string("F.kind");
  if (fkind == "g_of_v")
    set_F_g_of_v(p);
  else if (fkind == "scaled_g")
    set_F_scaled_g(p, kv.get_double("F.scale"));
  else if (fkind == "x_modulated")
    set_F_x_modulated(p, kv.get_double("F.eps"));
  else
    throw ParseError("F.kind must be one of g_of_v, scaled_g, x_modulated", kv.line_of("F.kind"));

  const std::string vkind = kv.get_string("V.kind");
  if (vkind == "neg_power")
    set_V_neg_power(p, kv.get_double("V.kappa"), kv.get_double("V.theta"));
  else if (vkind == "well")
    set_V_well(p, kv.get_double("V.kappa1"), kv.get_double("V.kappa2"), kv.get_double("V.theta"));
  else
    throw ParseError("V.kind must be one of neg_power, well", kv.line_of("V.kind"));

  const std::string ffkind = kv.get_string("f.kind", "zero");
  if (ffkind == "zero")
    set_f_zero(p);
  else if (ffkind == "constant") {
    std::vector<double> value = kv.get_list("f.value");
    if (static_cast<int>(value.size()) != p.dim)
      throw ParseError("f.value must list one component per dimension", kv.line_of("f.value"));
    set_f_constant(p, value);
  } else if (ffkind == "samples") {
    set_f_samples(p, read_csv(kv.get_string("f.path")));
  } else {
    throw ParseError("f.kind must be one of zero, constant, samples", kv.line_of("f.kind"));
  }

  const auto leftovers = kv.unconsumed();
  if (!leftovers.empty())
    throw ParseError("unknown key '" + leftovers.front() + "'", kv.line_of(leftovers.front()));

  p.validate();
  return p;
}

ProblemSpec load_problem(const std::string& path) {
  return problem_from_kv(KvFile::parse_file(path));
}

}  // namespace mps
