#pragma once

// Univariate real polynomials stored in ascending order: coeffs[k] multiplies x^k.
// The descending convention f(x) = sum a_k x^{m-k} maps to coeffs[m-k] = a_k.

#include <tvkit/errors.hpp>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstddef>
#include <cstdio>
#include <limits>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace tvkit {

class Polynomial {
 public:
  Polynomial() = default;
  explicit Polynomial(std::vector<double> ascending) : c_(std::move(ascending)) { trim(); }
  Polynomial(std::initializer_list<double> ascending) : c_(ascending) { trim(); }

  static Polynomial constant(double v) { return Polynomial({v}); }
  static Polynomial monomial(int k, double coeff = 1.0) {
    std::vector<double> c(static_cast<std::size_t>(k) + 1, 0.0);
    c.back() = coeff;
    return Polynomial(std::move(c));
  }

  /// Degree after trimming; the zero polynomial reports 0.
  [[nodiscard]] int degree() const { return c_.empty() ? 0 : static_cast<int>(c_.size()) - 1; }
  [[nodiscard]] bool is_zero() const { return c_.empty(); }
  [[nodiscard]] std::span<const double> coeffs() const { return c_; }
  [[nodiscard]] double coeff(int k) const {
    return (k >= 0 && static_cast<std::size_t>(k) < c_.size()) ? c_[static_cast<std::size_t>(k)] : 0.0;
  }
  [[nodiscard]] double leading() const { return c_.empty() ? 0.0 : c_.back(); }

  [[nodiscard]] double operator()(double x) const {
    double acc = 0.0;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + *it;
    return acc;
  }

  /// Largest |c_k| (0 for the zero polynomial).
  [[nodiscard]] double max_abs_coeff() const {
    double m = 0.0;
    for (double v : c_) m = std::max(m, std::abs(v));
    return m;
  }

  friend Polynomial operator+(const Polynomial& a, const Polynomial& b) {
    std::vector<double> r(std::max(a.c_.size(), b.c_.size()), 0.0);
    for (std::size_t i = 0; i < a.c_.size(); ++i) r[i] += a.c_[i];
    for (std::size_t i = 0; i < b.c_.size(); ++i) r[i] += b.c_[i];
    return Polynomial(std::move(r));
  }
  friend Polynomial operator-(const Polynomial& a) {
    std::vector<double> r(a.c_);
    for (double& v : r) v = -v;
    return Polynomial(std::move(r));
  }
  friend Polynomial operator-(const Polynomial& a, const Polynomial& b) { return a + (-b); }
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    if (a.is_zero() || b.is_zero()) return {};
    std::vector<double> r(a.c_.size() + b.c_.size() - 1, 0.0);
    for (std::size_t i = 0; i < a.c_.size(); ++i)
      for (std::size_t j = 0; j < b.c_.size(); ++j) r[i + j] += a.c_[i] * b.c_[j];
    return Polynomial(std::move(r));
  }
  friend Polynomial operator*(double s, const Polynomial& a) {
    std::vector<double> r(a.c_);
    for (double& v : r) v *= s;
    return Polynomial(std::move(r));
  }
  friend bool operator==(const Polynomial&, const Polynomial&) = default;

 private:
  void trim() {
    while (!c_.empty() && c_.back() == 0.0) c_.pop_back();
  }
  std::vector<double> c_;
};

inline double evaluate(const Polynomial& f, double x) { return f(x); }

inline Polynomial differentiate(const Polynomial& f) {
  const auto c = f.coeffs();
  if (c.size() <= 1) return {};
  std::vector<double> d(c.size() - 1);
  for (std::size_t k = 1; k < c.size(); ++k) d[k - 1] = static_cast<double>(k) * c[k];
  return Polynomial(std::move(d));
}

/// k-th derivative evaluated at x, computed from the coefficient list.
inline double derivative_at(const Polynomial& f, int order, double x) {
  const auto c = f.coeffs();
  double acc = 0.0;
  for (std::size_t j = c.size(); j-- > static_cast<std::size_t>(order);) {
    double falling = 1.0;
    for (int i = 0; i < order; ++i) falling *= static_cast<double>(j - static_cast<std::size_t>(i));
    acc = acc * x + falling * c[j];
  }
  return acc;
}

/// Coefficients of y -> f(x0 + y) (Taylor shift by repeated synthetic division).
inline Polynomial taylor_shift(const Polynomial& f, double x0) {
  std::vector<double> c(f.coeffs().begin(), f.coeffs().end());
  const std::size_t n = c.size();
  for (std::size_t i = 0; i + 1 < n; ++i)
    for (std::size_t j = n - 1; j > i; --j) c[j - 1] += x0 * c[j];
  return Polynomial(std::move(c));
}

/// Coefficients of y -> f(s * y).
inline Polynomial scale_argument(const Polynomial& f, double s) {
  std::vector<double> c(f.coeffs().begin(), f.coeffs().end());
  double p = 1.0;
  for (double& v : c) {
    v *= p;
    p *= s;
  }
  return Polynomial(std::move(c));
}

/// Cauchy bound 1 + max |c_k / c_m|: every real root lies in [-B, B].
inline double cauchy_bound(const Polynomial& f) {
  if (f.degree() < 1) return 1.0;
  const auto c = f.coeffs();
  double m = 0.0;
  for (std::size_t k = 0; k + 1 < c.size(); ++k) m = std::max(m, std::abs(c[k] / c.back()));
  return 1.0 + m;
}

namespace detail {

/// Replace the UTF-8 minus sign (U+2212) with ASCII '-'.
inline std::string normalize_minus(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (i + 2 < s.size() && static_cast<unsigned char>(s[i]) == 0xE2 &&
        static_cast<unsigned char>(s[i + 1]) == 0x88 && static_cast<unsigned char>(s[i + 2]) == 0x92) {
      out.push_back('-');
      i += 2;
    } else {
      out.push_back(s[i]);
    }
  }
  return out;
}

inline std::string_view strip(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

inline double parse_real(std::string_view token) {
  const std::string t(strip(token));
  if (t.empty()) throw input_error("empty number token");
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(t, &used);
  } catch (const std::exception&) {
    throw input_error("cannot parse number '" + t + "'");
  }
  if (used != t.size() || !std::isfinite(v)) throw input_error("cannot parse number '" + t + "'");
  return v;
}

/// Split on `sep`, parsing every field as a real number.
inline std::vector<double> parse_real_list(std::string_view text, char sep = ',') {
  const std::string s = normalize_minus(text);
  std::vector<double> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = s.find(sep, start);
    out.push_back(parse_real(std::string_view(s).substr(start, pos - start)));
    if (pos == std::string::npos) break;
    start = pos + 1;
  }
  return out;
}

inline std::string format_real(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

}  // namespace detail

/// Parse "c0,c1,...,cm" (ascending). Both '-' and the Unicode minus are accepted.
inline Polynomial parse_polynomial(std::string_view text) {
  if (detail::strip(text).empty()) throw input_error("empty polynomial specification");
  return Polynomial(detail::parse_real_list(text));
}

inline std::string to_string(const Polynomial& f) {
  if (f.is_zero()) return "0";
  std::string out;
  for (std::size_t k = 0; k < f.coeffs().size(); ++k) {
    if (k) out += ',';
    out += detail::format_real(f.coeffs()[k]);
  }
  return out;
}

}  // namespace tvkit
