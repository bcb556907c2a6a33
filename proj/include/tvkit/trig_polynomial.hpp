#pragma once

// Trigonometric polynomials f(x) = sum_{k=0}^n (a_k cos kx + b_k sin kx).

#include <tvkit/errors.hpp>
#include <tvkit/polynomial.hpp>

#include <algorithm>
#include <cmath>
#include <complex>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace tvkit {

class TrigPolynomial {
 public:
  TrigPolynomial() = default;
  TrigPolynomial(std::vector<double> cos_coeffs, std::vector<double> sin_coeffs)
      : a_(std::move(cos_coeffs)), b_(std::move(sin_coeffs)) {
    if (!b_.empty() && b_[0] != 0.0) throw input_error("sin coefficient at k=0 must be 0");
    const std::size_t n = std::max(a_.size(), b_.size());
    a_.resize(n, 0.0);
    b_.resize(n, 0.0);
    if (!b_.empty()) b_[0] = 0.0;
    while (!a_.empty() && a_.back() == 0.0 && b_.back() == 0.0) {
      a_.pop_back();
      b_.pop_back();
    }
  }

  /// Largest k with a nonzero coefficient (0 for constants and for zero).
  [[nodiscard]] int degree() const { return a_.empty() ? 0 : static_cast<int>(a_.size()) - 1; }
  [[nodiscard]] bool is_zero() const { return a_.empty(); }
  [[nodiscard]] const std::vector<double>& cos_coeffs() const { return a_; }
  [[nodiscard]] const std::vector<double>& sin_coeffs() const { return b_; }

  [[nodiscard]] double operator()(double x) const { return derivative_at(0, x); }

  /// order-th derivative at x.
  [[nodiscard]] double derivative_at(int order, double x) const {
    double acc = 0.0;
    for (std::size_t k = 0; k < a_.size(); ++k) {
      const double kd = static_cast<double>(k);
      const double s = std::sin(kd * x), c = std::cos(kd * x);
      // d^j/dx^j cos(kx) = k^j cos(kx + j pi/2); same shift for sin.
      double cj = c, sj = s;
      switch (order % 4) {
        case 1: cj = -s; sj = c; break;
        case 2: cj = -c; sj = -s; break;
        case 3: cj = s; sj = -c; break;
        default: break;
      }
      const double kp = order == 0 ? 1.0 : std::pow(kd, order);
      acc += kp * (a_[k] * cj + b_[k] * sj);
    }
    return acc;
  }

  /// Sum_k k^order (|a_k| + |b_k|): the natural rounding scale of derivative_at.
  [[nodiscard]] double derivative_scale(int order) const {
    double s = 0.0;
    for (std::size_t k = 0; k < a_.size(); ++k)
      s += (order == 0 ? 1.0 : std::pow(static_cast<double>(k), order)) * (std::abs(a_[k]) + std::abs(b_[k]));
    return s;
  }

  friend bool operator==(const TrigPolynomial&, const TrigPolynomial&) = default;

 private:
  std::vector<double> a_, b_;
};

inline double evaluate(const TrigPolynomial& f, double x) { return f(x); }

inline TrigPolynomial differentiate(const TrigPolynomial& f) {
  const auto& a = f.cos_coeffs();
  const auto& b = f.sin_coeffs();
  std::vector<double> da(a.size(), 0.0), db(a.size(), 0.0);
  for (std::size_t k = 1; k < a.size(); ++k) {
    const double kd = static_cast<double>(k);
    da[k] = kd * b[k];
    db[k] = -kd * a[k];
  }
  return {std::move(da), std::move(db)};
}

inline double derivative_at(const TrigPolynomial& f, int order, double x) { return f.derivative_at(order, x); }

/// Algebraic image under t = tan(x/2): f(x) (1+t^2)^n = P(t). Real zeros of f in
/// (-pi, pi) correspond to real roots of P; x = pi corresponds to t = infinity.
inline Polynomial half_angle_polynomial(const TrigPolynomial& f) {
  using cvec = std::vector<std::complex<double>>;
  const int n = f.degree();
  auto mul = [](const cvec& p, const cvec& q) {
    cvec r(p.size() + q.size() - 1, 0.0);
    for (std::size_t i = 0; i < p.size(); ++i)
      for (std::size_t j = 0; j < q.size(); ++j) r[i + j] += p[i] * q[j];
    return r;
  };
  const cvec one_it{1.0, std::complex<double>(0.0, 1.0)};
  const cvec one_t2{1.0, 0.0, 1.0};
  std::vector<double> acc(static_cast<std::size_t>(2 * n) + 1, 0.0);
  cvec power{1.0};  // (1 + i t)^{2k}
  for (int k = 0; k <= n; ++k) {
    cvec term = power;
    for (int j = k; j < n; ++j) term = mul(term, one_t2);
    const double ak = f.cos_coeffs()[static_cast<std::size_t>(k)];
    const double bk = f.sin_coeffs()[static_cast<std::size_t>(k)];
    for (std::size_t i = 0; i < term.size(); ++i) acc[i] += ak * term[i].real() + bk * term[i].imag();
    power = mul(mul(power, one_it), one_it);
  }
  return Polynomial(std::move(acc));
}

/// Parse "cos=a0,a1,...;sin=b0,b1,...". Either part may be omitted.
inline TrigPolynomial parse_trig_polynomial(std::string_view text) {
  const std::string s = detail::normalize_minus(text);
  std::vector<double> a, b;
  bool any = false;
  std::size_t start = 0;
  while (start <= s.size()) {
    const std::size_t semi = s.find(';', start);
    const std::string_view part = detail::strip(std::string_view(s).substr(start, semi - start));
    if (!part.empty()) {
      const std::size_t eq = part.find('=');
      if (eq == std::string_view::npos) throw input_error("trig term '" + std::string(part) + "' lacks '='");
      const std::string_view key = detail::strip(part.substr(0, eq));
      const auto vals = detail::parse_real_list(part.substr(eq + 1));
      if (key == "cos") a = vals;
      else if (key == "sin") b = vals;
      else throw input_error("unknown trig key '" + std::string(key) + "'");
      any = true;
    }
    if (semi == std::string::npos) break;
    start = semi + 1;
  }
  if (!any) throw input_error("empty trigonometric polynomial specification");
  return {std::move(a), std::move(b)};
}

inline std::string to_string(const TrigPolynomial& f) {
  std::string out = "cos=";
  for (std::size_t k = 0; k < f.cos_coeffs().size(); ++k) out += (k ? "," : "") + detail::format_real(f.cos_coeffs()[k]);
  out += ";sin=";
  for (std::size_t k = 0; k < f.sin_coeffs().size(); ++k) out += (k ? "," : "") + detail::format_real(f.sin_coeffs()[k]);
  return out;
}

}  // namespace tvkit
