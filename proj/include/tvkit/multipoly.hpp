#pragma once

#include <tvkit/errors.hpp>
#include <tvkit/polynomial.hpp>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace tvkit {

struct Monomial {
  double coeff = 0.0;
  std::vector<int> exponents;
};

/// Polynomial in d real variables, stored as a list of monomials.
class MultiPoly {
 public:
  MultiPoly() = default;
  MultiPoly(int dimension, std::vector<Monomial> terms) : d_(dimension), terms_(std::move(terms)) {
    if (d_ < 1) throw input_error("MultiPoly dimension must be >= 1");
    for (const auto& t : terms_) {
      if (static_cast<int>(t.exponents.size()) != d_) throw input_error("monomial exponent vector length != dimension");
      for (int e : t.exponents)
        if (e < 0) throw input_error("negative exponent");
    }
    std::erase_if(terms_, [](const Monomial& t) { return t.coeff == 0.0; });
  }

  /// Lift a univariate polynomial into variable `var` of a d-dimensional space.
  static MultiPoly from_univariate(const Polynomial& p, int dimension = 1, int var = 0) {
    std::vector<Monomial> terms;
    for (std::size_t k = 0; k < p.coeffs().size(); ++k) {
      std::vector<int> e(static_cast<std::size_t>(dimension), 0);
      e[static_cast<std::size_t>(var)] = static_cast<int>(k);
      terms.push_back({p.coeffs()[k], std::move(e)});
    }
    return {dimension, std::move(terms)};
  }

  /// (x_1^2 + ... + x_d^2)^k expanded into monomials.
  static MultiPoly radial_power(int dimension, int k) {
    MultiPoly acc(dimension, {{1.0, std::vector<int>(static_cast<std::size_t>(dimension), 0)}});
    std::vector<Monomial> sq;
    for (int i = 0; i < dimension; ++i) {
      std::vector<int> e(static_cast<std::size_t>(dimension), 0);
      e[static_cast<std::size_t>(i)] = 2;
      sq.push_back({1.0, std::move(e)});
    }
    const MultiPoly r2(dimension, std::move(sq));
    for (int j = 0; j < k; ++j) acc = acc * r2;
    return acc;
  }

  [[nodiscard]] int dimension() const { return d_; }
  [[nodiscard]] const std::vector<Monomial>& terms() const { return terms_; }
  [[nodiscard]] int total_degree() const {
    int m = 0;
    for (const auto& t : terms_) m = std::max(m, std::accumulate(t.exponents.begin(), t.exponents.end(), 0));
    return m;
  }
  [[nodiscard]] bool is_constant() const { return total_degree() == 0; }

  [[nodiscard]] double operator()(std::span<const double> x) const {
    if (static_cast<int>(x.size()) != d_) throw input_error("point dimension does not match MultiPoly dimension");
    double acc = 0.0;
    for (const auto& t : terms_) {
      double v = t.coeff;
      for (std::size_t i = 0; i < x.size(); ++i)
        for (int e = 0; e < t.exponents[i]; ++e) v *= x[i];
      acc += v;
    }
    return acc;
  }

  [[nodiscard]] MultiPoly partial(int var) const {
    std::vector<Monomial> out;
    for (const auto& t : terms_) {
      const int e = t.exponents[static_cast<std::size_t>(var)];
      if (e == 0) continue;
      Monomial m{t.coeff * e, t.exponents};
      m.exponents[static_cast<std::size_t>(var)] -= 1;
      out.push_back(std::move(m));
    }
    return {d_, std::move(out)};
  }

  friend MultiPoly operator+(const MultiPoly& a, const MultiPoly& b) {
    if (a.d_ != b.d_) throw input_error("MultiPoly dimension mismatch");
    std::vector<Monomial> t = a.terms_;
    t.insert(t.end(), b.terms_.begin(), b.terms_.end());
    return MultiPoly(a.d_, std::move(t)).collected();
  }
  friend MultiPoly operator-(const MultiPoly& a, const MultiPoly& b) {
    std::vector<Monomial> t = b.terms_;
    for (auto& m : t) m.coeff = -m.coeff;
    return a + MultiPoly(b.d_, std::move(t));
  }
  friend MultiPoly operator*(const MultiPoly& a, const MultiPoly& b) {
    if (a.d_ != b.d_) throw input_error("MultiPoly dimension mismatch");
    std::vector<Monomial> t;
    for (const auto& x : a.terms_)
      for (const auto& y : b.terms_) {
        Monomial m{x.coeff * y.coeff, x.exponents};
        for (std::size_t i = 0; i < m.exponents.size(); ++i) m.exponents[i] += y.exponents[i];
        t.push_back(std::move(m));
      }
    return MultiPoly(a.d_, std::move(t)).collected();
  }

 private:
  [[nodiscard]] MultiPoly collected() const {
    std::vector<Monomial> t = terms_;
    std::sort(t.begin(), t.end(), [](const Monomial& x, const Monomial& y) { return x.exponents < y.exponents; });
    std::vector<Monomial> out;
    for (auto& m : t) {
      if (!out.empty() && out.back().exponents == m.exponents) out.back().coeff += m.coeff;
      else out.push_back(std::move(m));
    }
    return {d_, std::move(out)};
  }

  int d_ = 1;
  std::vector<Monomial> terms_;
};

inline double evaluate(const MultiPoly& f, std::span<const double> x) { return f(x); }

/// Parse lines "coeff: e1 e2 ... ed" (blank lines and '#' comments ignored).
inline MultiPoly parse_multipoly(std::string_view text) {
  const std::string s = detail::normalize_minus(text);
  std::vector<Monomial> terms;
  int dim = -1;
  std::size_t start = 0;
  while (start < s.size()) {
    std::size_t nl = s.find('\n', start);
    if (nl == std::string::npos) nl = s.size();
    std::string_view line = detail::strip(std::string_view(s).substr(start, nl - start));
    start = nl + 1;
    if (line.empty() || line.front() == '#') continue;
    const std::size_t colon = line.find(':');
    if (colon == std::string_view::npos) throw input_error("monomial line '" + std::string(line) + "' lacks ':'");
    Monomial m;
    m.coeff = detail::parse_real(line.substr(0, colon));
    std::string_view rest = line.substr(colon + 1);
    while (true) {
      rest = detail::strip(rest);
      if (rest.empty()) break;
      std::size_t sp = 0;
      while (sp < rest.size() && !std::isspace(static_cast<unsigned char>(rest[sp]))) ++sp;
      const double e = detail::parse_real(rest.substr(0, sp));
      if (e < 0 || e != std::floor(e)) throw input_error("exponent '" + std::string(rest.substr(0, sp)) + "' is not a non-negative integer");
      m.exponents.push_back(static_cast<int>(e));
      rest.remove_prefix(sp);
    }
    if (dim < 0) dim = static_cast<int>(m.exponents.size());
    if (static_cast<int>(m.exponents.size()) != dim || dim == 0)
      throw input_error("monomial line '" + std::string(line) + "' has inconsistent dimension");
    terms.push_back(std::move(m));
  }
  if (dim < 0) throw input_error("empty MultiPoly specification");
  return {dim, std::move(terms)};
}

}  // namespace tvkit
