#pragma once

// Splitting a map into pieces on which it is strictly monotone and either
// convex or concave, plus the local power law f(x) - f(a) ~ K |x - a|^m at the
// end of each piece where |f'| is smallest.

#include <tvkit/errors.hpp>
#include <tvkit/polynomial.hpp>
#include <tvkit/roots.hpp>
#include <tvkit/trig_polynomial.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <concepts>
#include <limits>
#include <string>
#include <vector>

namespace tvkit {

template <class F>
concept UnivariateMap = requires(const F& f, double x) {
  { f(x) } -> std::convertible_to<double>;
  { derivative_at(f, 1, x) } -> std::convertible_to<double>;
  { differentiate(f) } -> std::convertible_to<F>;
  { real_roots(f, x, x) } -> std::convertible_to<std::vector<double>>;
};

enum class Direction { increasing, decreasing };
enum class Shape { convex, concave };
/// Which side of a point the piece of interest lies on.
enum class Side { right, left };

struct LocalOrder {
  int m = 1;
  double K = 0.0;
};

struct MonotonePiece {
  double a = 0.0;
  double b = 0.0;
  Direction direction = Direction::increasing;
  Shape shape = Shape::convex;
  int local_order_m = 1;
  double local_constant_K = 0.0;
  /// (m, K) describe the left end when true, the right end otherwise.
  bool flat_at_left = true;
  bool tail = false;

  [[nodiscard]] double flat_end() const { return flat_at_left ? a : b; }
  [[nodiscard]] double length() const { return b - a; }
  [[nodiscard]] bool finite() const { return std::isfinite(a) && std::isfinite(b); }
};

namespace detail {

inline double derivative_scale(const Polynomial& f, int order, double x) {
  const auto c = f.coeffs();
  double acc = 0.0;
  const double ax = std::max(1.0, std::abs(x));
  for (std::size_t j = c.size(); j-- > static_cast<std::size_t>(order);) {
    double falling = 1.0;
    for (int i = 0; i < order; ++i) falling *= static_cast<double>(j - static_cast<std::size_t>(i));
    acc = acc * ax + falling * std::abs(c[j]);
  }
  return acc;
}

inline double derivative_scale(const TrigPolynomial& f, int order, double /*x*/) { return f.derivative_scale(order); }

inline int max_scan_order(const Polynomial& f) { return std::max(1, f.degree()); }
inline int max_scan_order(const TrigPolynomial& f) { return 4 * std::max(1, f.degree()) + 4; }

inline double factorial(int n) {
  double r = 1.0;
  for (int i = 2; i <= n; ++i) r *= i;
  return r;
}

}  // namespace detail

/// Leading power-law term of f near x: m is the first derivative order that
/// does not vanish (threshold 1e-12 times the rounding scale of that
/// derivative), K = |f^{(m)}(x)| / m!.
template <UnivariateMap F>
LocalOrder local_order(const F& f, double x, Side /*toward*/ = Side::right) {
  const int max_order = detail::max_scan_order(f);
  for (int k = 1; k <= max_order; ++k) {
    const double d = derivative_at(f, k, x);
    if (std::abs(d) > 1e-12 * detail::derivative_scale(f, k, x)) return {k, std::abs(d) / detail::factorial(k)};
  }
  throw numeric_error("local_order: all derivatives vanish at x = " + detail::format_real(x));
}

/// y -> f(e + dir*y) - f(e) for y >= 0, accurate in relative terms near y = 0.
/// Taylor terms below the local order are dropped so the map is consistent
/// with the (m, K) found by local_order.
template <class F>
class LocalMap;

template <>
class LocalMap<Polynomial> {
 public:
  LocalMap() = default;
  LocalMap(const Polynomial& f, double e, int dir, int order) {
    const Polynomial shifted = scale_argument(taylor_shift(f, e), static_cast<double>(dir));
    std::vector<double> c(shifted.coeffs().begin(), shifted.coeffs().end());
    for (std::size_t j = 0; j < c.size() && static_cast<int>(j) < order; ++j) c[j] = 0.0;
    g_ = Polynomial(std::move(c));
    dg_ = differentiate(g_);
  }
  [[nodiscard]] double value(double y) const { return g_(y); }
  [[nodiscard]] double slope(double y) const { return dg_(y); }

 private:
  Polynomial g_, dg_;
};

template <>
class LocalMap<TrigPolynomial> {
 public:
  LocalMap() = default;
  LocalMap(const TrigPolynomial& f, double e, int dir, int order) : f_(f), e_(e), dir_(dir) {
    switch_ = 0.5 / std::max(1, f.degree());
    f_e_ = f(e);
    for (int j = 1; j <= kTerms; ++j) {
      double d = j < order ? 0.0 : f.derivative_at(j, e);
      if (dir < 0 && j % 2 == 1) d = -d;
      taylor_[static_cast<std::size_t>(j)] = d;
    }
  }
  [[nodiscard]] double value(double y) const {
    if (y > switch_) return f_(e_ + dir_ * y) - f_e_;
    double acc = 0.0;
    for (int j = kTerms; j >= 1; --j) acc = (acc + taylor_[static_cast<std::size_t>(j)]) * y / j;
    return acc;
  }
  [[nodiscard]] double slope(double y) const {
    if (y > switch_) return dir_ * f_.derivative_at(1, e_ + dir_ * y);
    double acc = 0.0;
    for (int j = kTerms; j >= 2; --j) acc = (acc + taylor_[static_cast<std::size_t>(j)]) * y / (j - 1);
    return acc + taylor_[1];
  }

 private:
  static constexpr int kTerms = 40;
  TrigPolynomial f_;
  double e_ = 0.0, f_e_ = 0.0, switch_ = 0.5;
  int dir_ = 1;
  std::array<double, kTerms + 1> taylor_{};
};

namespace detail {

inline double breakpoint_tolerance(const Polynomial& f, double, double) {
  return 1e-9 * cauchy_bound(differentiate(f) * differentiate(differentiate(f)));
}
inline double breakpoint_tolerance(const TrigPolynomial&, double lo, double hi) {
  return 1e-9 * std::max(1.0, hi - lo);
}

}  // namespace detail

/// Sorted union of the zeros of f' and f'' strictly inside (lo, hi).
template <UnivariateMap F>
std::vector<double> decomposition_breakpoints(const F& f, double lo, double hi) {
  const F d1 = differentiate(f);
  const F d2 = differentiate(d1);
  std::vector<double> pts;
  if (!d1.is_zero()) {
    const auto r = real_roots(d1, lo, hi);
    pts.insert(pts.end(), r.begin(), r.end());
  }
  if (!d2.is_zero()) {
    const auto r = real_roots(d2, lo, hi);
    pts.insert(pts.end(), r.begin(), r.end());
  }
  const double tol = detail::breakpoint_tolerance(f, lo, hi);
  auto merged = detail::merge_close(std::move(pts), tol);
  std::erase_if(merged, [&](double x) { return x <= lo + tol || x >= hi - tol; });
  return merged;
}

/// Classify [a, b] (no zero of f' or f'' inside) and attach the local order.
template <UnivariateMap F>
MonotonePiece make_piece(const F& f, double a, double b) {
  double probe = 0.0;
  if (std::isfinite(a) && std::isfinite(b)) probe = 0.5 * (a + b);
  else if (std::isfinite(a)) probe = a + 1.0;
  else if (std::isfinite(b)) probe = b - 1.0;
  MonotonePiece p;
  p.a = a;
  p.b = b;
  p.tail = !std::isfinite(a) || !std::isfinite(b);
  const double d1 = derivative_at(f, 1, probe);
  const double d2 = derivative_at(f, 2, probe);
  if (d1 == 0.0) throw input_error("make_piece: map is constant on the piece");
  p.direction = d1 > 0 ? Direction::increasing : Direction::decreasing;
  p.shape = d2 >= 0 ? Shape::convex : Shape::concave;
  const bool inc = p.direction == Direction::increasing;
  const bool cvx = p.shape == Shape::convex;
  p.flat_at_left = (inc && cvx) || (!inc && !cvx);
  if (!std::isfinite(p.flat_end())) p.flat_at_left = !p.flat_at_left;
  const double e = std::isfinite(p.flat_end()) ? p.flat_end() : 0.0;
  const LocalOrder lo = local_order(f, e, p.flat_at_left ? Side::right : Side::left);
  p.local_order_m = lo.m;
  p.local_constant_K = lo.K;
  return p;
}

/// Pieces covering [lo, hi] split at every zero of f' and f''. Infinite ends
/// produce tail pieces (polynomials only).
template <UnivariateMap F>
std::vector<MonotonePiece> monotone_convex_decomposition(const F& f, double lo, double hi) {
  if (!(lo < hi)) throw input_error("monotone_convex_decomposition: empty domain");
  if (differentiate(f).is_zero()) throw input_error("monotone_convex_decomposition: map is constant");
  const auto bps = decomposition_breakpoints(f, lo, hi);
  std::vector<double> edges{lo};
  edges.insert(edges.end(), bps.begin(), bps.end());
  edges.push_back(hi);
  std::vector<MonotonePiece> pieces;
  for (std::size_t i = 0; i + 1 < edges.size(); ++i) pieces.push_back(make_piece(f, edges[i], edges[i + 1]));
  return pieces;
}

}  // namespace tvkit
