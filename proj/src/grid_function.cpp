#include "mps/grid_function.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace mps {

GridFunction GridFunction::zeros(double a, double b, int n, int dim, bool zero_boundary) {
  GridFunction u;
  u.a = a;
  u.b = b;
  u.n = n;
  u.dim = dim;
  u.zero_boundary = zero_boundary;
  u.values.assign(static_cast<std::size_t>(n + 1) * dim, 0.0);
  u.validate();
  return u;
}

GridFunction GridFunction::from_callable(double a, double b, int n, int dim,
                                         const std::function<Vec(double)>& fn) {
  GridFunction u = zeros(a, b, n, dim, false);
  for (int k = 0; k <= n; ++k) {
    const Vec v = fn(u.t(k));
    if (static_cast<int>(v.size()) != dim)
      throw std::invalid_argument("GridFunction: callable returned wrong dimension");
    auto nd = u.node(k);
    for (int c = 0; c < dim; ++c) nd[c] = v[static_cast<std::size_t>(c)];
  }
  bool zb = true;
  for (int c = 0; c < dim; ++c)
    if (u.node(0)[c] != 0.0 || u.node(n)[c] != 0.0) zb = false;
  u.zero_boundary = zb;
  return u;
}

Vec GridFunction::cell_derivative(int k) const {
  Vec d(static_cast<std::size_t>(dim));
  const auto lo = node(k);
  const auto hi = node(k + 1);
  const double ih = 1.0 / h();
  for (int c = 0; c < dim; ++c) d[static_cast<std::size_t>(c)] = (hi[c] - lo[c]) * ih;
  return d;
}

Vec GridFunction::at(double tt) const {
  if (tt <= a) return Vec(node(0).begin(), node(0).end());
  if (tt >= b) return Vec(node(n).begin(), node(n).end());
  const double s = (tt - a) / h();
  int k = static_cast<int>(s);
  if (k >= n) k = n - 1;
  const double theta = s - k;
  Vec v(static_cast<std::size_t>(dim));
  const auto lo = node(k);
  const auto hi = node(k + 1);
  for (int c = 0; c < dim; ++c)
    v[static_cast<std::size_t>(c)] = (1.0 - theta) * lo[c] + theta * hi[c];
  return v;
}

double GridFunction::sup_norm() const {
  double m = 0.0;
  for (int k = 0; k <= n; ++k) m = std::max(m, norm2(node(k)));
  return m;
}

void GridFunction::set_zero_boundary() {
  for (int c = 0; c < dim; ++c) {
    node(0)[c] = 0.0;
    node(n)[c] = 0.0;
  }
  zero_boundary = true;
}

void GridFunction::validate() const {
  if (!(a < b)) throw std::invalid_argument("GridFunction: requires a < b");
  if (n < 2) throw std::invalid_argument("GridFunction: requires n >= 2 subintervals");
  if (dim < 1) throw std::invalid_argument("GridFunction: requires dim >= 1");
  if (values.size() != static_cast<std::size_t>(n + 1) * dim)
    throw std::invalid_argument("GridFunction: value array has wrong size");
  if (zero_boundary) {
    for (int c = 0; c < dim; ++c)
      if (node(0)[c] != 0.0 || node(n)[c] != 0.0)
        throw std::invalid_argument("GridFunction: zero_boundary set but end nodes are nonzero");
  }
}

GridFunction& GridFunction::operator*=(double c) {
  for (double& v : values) v *= c;
  return *this;
}

GridFunction& GridFunction::add_scaled(double c, const GridFunction& other) {
  if (other.values.size() != values.size())
    throw std::invalid_argument("GridFunction: grid mismatch in add_scaled");
  for (std::size_t i = 0; i < values.size(); ++i) values[i] += c * other.values[i];
  return *this;
}

GridFunction blend(const GridFunction& x, const GridFunction& y, double theta) {
  GridFunction r = x;
  for (std::size_t i = 0; i < r.values.size(); ++i)
    r.values[i] = (1.0 - theta) * x.values[i] + theta * y.values[i];
  return r;
}

void write_csv(const GridFunction& u, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << "t";
  for (int c = 1; c <= u.dim; ++c) out << ",u" << c;
  out << "\n";
  char buf[40];
  for (int k = 0; k <= u.n; ++k) {
    std::snprintf(buf, sizeof(buf), "%.17g", u.t(k));
    out << buf;
    for (int c = 0; c < u.dim; ++c) {
      std::snprintf(buf, sizeof(buf), "%.17g", u.node(k)[c]);
      out << "," << buf;
    }
    out << "\n";
  }
}

GridFunction read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open for reading: " + path);
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("empty CSV: " + path);
  int dim = 0;
  {
    std::stringstream ss(line);
    std::string col;
    bool first = true;
    while (std::getline(ss, col, ',')) {
      if (first) {
        if (col != "t") throw std::runtime_error("CSV header must start with 't': " + path);
        first = false;
      } else {
        ++dim;
      }
    }
  }
  if (dim < 1) throw std::runtime_error("CSV has no value columns: " + path);
  std::vector<double> ts;
  std::vector<double> vals;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string col;
    int c = -1;
    while (std::getline(ss, col, ',')) {
      double v = 0.0;
      try {
        v = std::stod(col);
      } catch (...) {
        throw std::runtime_error(path + ":" + std::to_string(lineno) + ": bad number '" + col + "'");
      }
      if (c < 0)
        ts.push_back(v);
      else
        vals.push_back(v);
      ++c;
    }
    if (c != dim)
      throw std::runtime_error(path + ":" + std::to_string(lineno) + ": wrong column count");
  }
  const int n = static_cast<int>(ts.size()) - 1;
  if (n < 2) throw std::runtime_error("CSV needs at least 3 rows: " + path);
  GridFunction u = GridFunction::zeros(ts.front(), ts.back(), n, dim, false);
  const double h = u.h();
  for (int k = 0; k <= n; ++k) {
    if (std::fabs(ts[static_cast<std::size_t>(k)] - u.t(k)) > 1e-9 * (1.0 + std::fabs(h)))
      throw std::runtime_error(path + ": grid is not uniform at row " + std::to_string(k + 2));
    for (int c = 0; c < dim; ++c)
      u.node(k)[c] = vals[static_cast<std::size_t>(k) * dim + c];
  }
  bool zb = true;
  for (int c = 0; c < dim; ++c)
    if (u.node(0)[c] != 0.0 || u.node(n)[c] != 0.0) zb = false;
  u.zero_boundary = zb;
  return u;
}

}  // namespace mps
