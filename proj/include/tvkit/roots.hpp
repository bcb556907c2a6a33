#pragma once

// Real root isolation: Sturm-sequence counting on the square-free part,
// bisection inside isolating intervals, and a Newton polish on the original.

#include <tvkit/errors.hpp>
#include <tvkit/polynomial.hpp>
#include <tvkit/trig_polynomial.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <utility>
#include <vector>

namespace tvkit {

namespace detail {

inline Polynomial normalized(const Polynomial& p) {
  const double m = p.max_abs_coeff();
  return m > 0.0 ? (1.0 / m) * p : p;
}

/// Quotient and remainder of a / b. Remainder coefficients below
/// rel_tol * max|a| are treated as rounding noise and zeroed.
inline std::pair<Polynomial, Polynomial> divide(const Polynomial& a, const Polynomial& b, double rel_tol = 1e-10) {
  if (b.is_zero()) throw input_error("polynomial division by zero");
  std::vector<double> r(a.coeffs().begin(), a.coeffs().end());
  const int db = b.degree();
  const int da = a.degree();
  if (a.is_zero() || da < db) return {Polynomial{}, a};
  std::vector<double> q(static_cast<std::size_t>(da - db) + 1, 0.0);
  const auto bc = b.coeffs();
  for (int k = da - db; k >= 0; --k) {
    const double coef = r[static_cast<std::size_t>(k + db)] / bc.back();
    q[static_cast<std::size_t>(k)] = coef;
    for (int j = 0; j <= db; ++j) r[static_cast<std::size_t>(k + j)] -= coef * bc[static_cast<std::size_t>(j)];
    r[static_cast<std::size_t>(k + db)] = 0.0;
  }
  r.resize(static_cast<std::size_t>(db));
  const double scale = a.max_abs_coeff();
  for (double& v : r)
    if (std::abs(v) <= rel_tol * scale) v = 0.0;
  return {Polynomial(std::move(q)), Polynomial(std::move(r))};
}

/// Euclidean gcd with tolerance-based remainder truncation.
inline Polynomial approximate_gcd(Polynomial a, Polynomial b) {
  a = normalized(a);
  b = normalized(b);
  while (!b.is_zero()) {
    Polynomial r = divide(a, b).second;
    a = std::move(b);
    b = normalized(r);
  }
  return normalized(a);
}

inline Polynomial square_free_part(const Polynomial& f) {
  if (f.degree() < 2) return normalized(f);
  const Polynomial g = approximate_gcd(f, differentiate(f));
  if (g.degree() == 0) return normalized(f);
  return normalized(divide(normalized(f), g).first);
}

inline std::vector<Polynomial> sturm_chain(const Polynomial& p) {
  std::vector<Polynomial> chain{normalized(p)};
  if (p.degree() == 0) return chain;
  chain.push_back(normalized(differentiate(p)));
  while (chain.back().degree() > 0) {
    Polynomial r = divide(chain[chain.size() - 2], chain.back(), 1e-12).second;
    if (r.is_zero()) break;
    chain.push_back(normalized(-r));
  }
  return chain;
}

inline int sign_of(double v) { return (v > 0.0) - (v < 0.0); }

/// Sign variations of the chain at x; zeros are skipped. x may be +-infinity.
inline int sign_variations(const std::vector<Polynomial>& chain, double x) {
  int count = 0, last = 0;
  for (const auto& p : chain) {
    int s = 0;
    if (std::isinf(x)) {
      s = sign_of(p.leading());
      if (x < 0 && p.degree() % 2 == 1) s = -s;
    } else {
      s = sign_of(p(x));
    }
    if (s == 0) continue;
    if (last != 0 && s != last) ++count;
    last = s;
  }
  return count;
}

/// Root of sf in (x0, x1] known to be unique there.
inline double refine_isolated(const Polynomial& sf, double x0, double x1) {
  const Polynomial dsf = differentiate(sf);
  int s1 = sign_of(sf(x1));
  if (s1 == 0) return x1;
  int s0 = sign_of(sf(x0));
  if (s0 == 0) s0 = sign_of(dsf(x0));
  if (s0 == s1 || s0 == 0) {
    // No visible sign change (rounding near an even-multiplicity root): minimise |sf|.
    double a = x0, b = x1;
    const double g = (std::sqrt(5.0) - 1.0) / 2.0;
    for (int it = 0; it < 200 && b - a > 0.0; ++it) {
      const double c = b - g * (b - a), d = a + g * (b - a);
      if (c <= a || d >= b) break;
      if (std::abs(sf(c)) < std::abs(sf(d))) b = d;
      else a = c;
    }
    return 0.5 * (a + b);
  }
  double a = x0, b = x1;
  for (int it = 0; it < 200; ++it) {
    const double m = 0.5 * (a + b);
    if (m <= a || m >= b) break;
    const int sm = sign_of(sf(m));
    if (sm == 0) return m;
    if (sm == s0) a = m;
    else b = m;
  }
  return 0.5 * (a + b);
}

inline std::vector<double> merge_close(std::vector<double> xs, double tol) {
  std::sort(xs.begin(), xs.end());
  std::vector<double> out;
  for (double x : xs) {
    if (!out.empty() && x - out.back() <= tol) continue;
    out.push_back(x);
  }
  return out;
}

}  // namespace detail

/// All distinct real roots of f in [lo, hi], sorted. Infinite ends are replaced
/// by the Cauchy bound. Roots closer than 1e-9 * (Cauchy bound) are merged.
inline std::vector<double> real_roots(const Polynomial& f, double lo, double hi) {
  if (f.is_zero()) throw input_error("real_roots: polynomial is identically zero");
  if (!(lo < hi)) throw input_error("real_roots: empty interval");
  if (f.degree() == 0) return {};
  const Polynomial sf = detail::square_free_part(f);
  const double bound = cauchy_bound(sf);
  const double a = std::max(lo, -bound - 1.0);
  const double b = std::min(hi, bound + 1.0);
  if (!(a < b)) return {};
  const double cluster = 1e-9 * cauchy_bound(f);
  const auto chain = detail::sturm_chain(sf);

  std::vector<double> roots;
  if (sf(a) == 0.0) roots.push_back(a);

  struct Span { double x0, x1; int v0, v1; };
  std::vector<Span> stack{{a, b, detail::sign_variations(chain, a), detail::sign_variations(chain, b)}};
  while (!stack.empty()) {
    const Span s = stack.back();
    stack.pop_back();
    const int count = s.v0 - s.v1;
    if (count <= 0) continue;
    if (count == 1) {
      roots.push_back(detail::refine_isolated(sf, s.x0, s.x1));
      continue;
    }
    if (s.x1 - s.x0 <= cluster) {
      roots.push_back(0.5 * (s.x0 + s.x1));
      continue;
    }
    const double m = 0.5 * (s.x0 + s.x1);
    const int vm = detail::sign_variations(chain, m);
    stack.push_back({m, s.x1, vm, s.v1});
    stack.push_back({s.x0, m, s.v0, vm});
  }

  // Newton polish on the original polynomial where it is well conditioned.
  const Polynomial df = differentiate(f);
  const double scale = f.max_abs_coeff();
  for (double& r : roots) {
    for (int it = 0; it < 3; ++it) {
      const double d = df(r);
      if (std::abs(d) <= 1e-8 * scale) break;
      const double next = r - f(r) / d;
      if (!std::isfinite(next) || std::abs(next - r) > cluster || std::abs(f(next)) > std::abs(f(r))) break;
      r = next;
    }
  }
  auto merged = detail::merge_close(std::move(roots), cluster);
  std::erase_if(merged, [&](double x) { return x < lo || x > hi; });
  return merged;
}

/// Distinct real zeros of a trigonometric polynomial on the finite interval [lo, hi].
inline std::vector<double> real_roots(const TrigPolynomial& f, double lo, double hi) {
  if (f.is_zero()) throw input_error("real_roots: trigonometric polynomial is identically zero");
  if (!(lo < hi) || !std::isfinite(lo) || !std::isfinite(hi))
    throw input_error("real_roots: trigonometric roots need a finite interval");
  if (f.degree() == 0) return {};
  constexpr double pi = std::numbers::pi;
  const double scale = f.derivative_scale(0);
  const double dscale = f.derivative_scale(1);

  std::vector<double> base;
  const Polynomial p = half_angle_polynomial(f);
  if (!p.is_zero() && p.degree() > 0)
    for (double t : real_roots(p, -std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()))
      base.push_back(2.0 * std::atan(t));
  if (std::abs(f(pi)) <= 1e-12 * scale) base.push_back(pi);

  std::vector<double> roots;
  for (double x0 : base) {
    const double kmin = std::ceil((lo - x0) / (2.0 * pi) - 1e-12);
    const double kmax = std::floor((hi - x0) / (2.0 * pi) + 1e-12);
    for (double k = kmin; k <= kmax; k += 1.0) {
      double r = x0 + 2.0 * pi * k;
      for (int it = 0; it < 4; ++it) {
        const double d = f.derivative_at(1, r);
        if (std::abs(d) <= 1e-8 * dscale) break;
        const double next = r - f(r) / d;
        if (!std::isfinite(next) || std::abs(next - r) > 1e-6 || std::abs(f(next)) > std::abs(f(r))) break;
        r = next;
      }
      if (r >= lo && r <= hi) roots.push_back(r);
    }
  }

  // Safety net for simple zeros lost to conditioning of the algebraic image.
  const int n = f.degree();
  const auto samples = static_cast<std::size_t>(std::ceil((hi - lo) * 64.0 * n)) + 2;
  const double h = (hi - lo) / static_cast<double>(samples - 1);
  std::sort(roots.begin(), roots.end());
  double xprev = lo, fprev = f(lo);
  for (std::size_t i = 1; i < samples; ++i) {
    const double x = (i + 1 == samples) ? hi : lo + h * static_cast<double>(i);
    const double fx = f(x);
    if (fprev * fx < 0.0) {
      const auto it = std::lower_bound(roots.begin(), roots.end(), xprev);
      if (it == roots.end() || *it > x) {
        double a = xprev, b = x, fa = fprev;
        for (int k = 0; k < 200; ++k) {
          const double m = 0.5 * (a + b);
          if (m <= a || m >= b) break;
          const double fm = f(m);
          if ((fm < 0) == (fa < 0)) { a = m; fa = fm; }
          else b = m;
        }
        roots.insert(std::lower_bound(roots.begin(), roots.end(), 0.5 * (a + b)), 0.5 * (a + b));
      }
    }
    xprev = x;
    fprev = fx;
  }
  return detail::merge_close(std::move(roots), 1e-9 * std::max(1.0, hi - lo));
}

}  // namespace tvkit
