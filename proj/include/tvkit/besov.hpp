#pragma once

// Constants for the shift-modulus condition delta(u) <= C u^alpha: the single
// piece constants (convex monotone pieces, Lebesgue and Lipschitz sources), the
// partition-and-sum certificate for Gaussian sources, and log-log fitting.

#include <tvkit/decomposition.hpp>
#include <tvkit/density_model.hpp>
#include <tvkit/errors.hpp>
#include <tvkit/polynomial.hpp>
#include <tvkit/tv.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

namespace tvkit {

enum class EstimateKind { certified, fitted };

struct BesovEstimate {
  double alpha = 0.0;
  double constant_C = 0.0;
  EstimateKind kind = EstimateKind::fitted;
  double residual = 0.0;
  double alpha_std_error = 0.0;
  int points = 0;
};

namespace detail {

/// y -> |f(e + dir y) - f(e)| measured from the flat end of the piece.
template <UnivariateMap F>
struct CanonicalPiece {
  LocalMap<F> map;
  double length = 0.0;
  int m = 1;
  double K = 0.0;
  double operator()(double y) const { return std::abs(map.value(y)); }
};

template <UnivariateMap F>
CanonicalPiece<F> canonical_piece(const F& f, const MonotonePiece& p) {
  if (!p.finite()) throw input_error("piece constant needs a finite piece");
  if (!(p.local_constant_K > 0.0)) throw input_error("piece has no local order data");
  // Strict monotonicity: f' keeps one sign in the interior.
  int sign = 0;
  for (int k = 1; k <= 20; ++k) {
    const double d = derivative_at(f, 1, p.a + p.length() * k / 21.0);
    const int s = (d > 0) - (d < 0);
    if (s == 0 || (sign != 0 && s != sign)) throw input_error("piece is not strictly monotone");
    sign = s;
  }
  const int dir = p.flat_at_left ? 1 : -1;
  return {LocalMap<F>(f, p.flat_end(), dir, p.local_order_m), p.length(), p.local_order_m, p.local_constant_K};
}

}  // namespace detail

/// C_f = sup over the piece of |f^{-1}(f(a) + v) - a| / v^{1/m}, measured from
/// the flat end a (reflected when that end is on the right). Its limit at the
/// flat end is K^{-1/m}. Grid: 10^4 points geometric toward the flat end, then
/// golden-section refinement around the best grid point.
template <UnivariateMap F>
double prop1_constant(const F& f, const MonotonePiece& piece) {
  const auto c = detail::canonical_piece(f, piece);
  const double inv_m = 1.0 / c.m;
  auto ratio = [&](double y) {
    const double v = c(y);
    return v > 0.0 ? y / std::pow(v, inv_m) : 0.0;
  };
  double best = std::pow(c.K, -inv_m);
  double best_y = 0.0;
  constexpr int kGrid = 10000;
  const double y_min = c.length * 1e-12;
  for (int i = 0; i < kGrid; ++i) {
    const double y = y_min * std::pow(c.length / y_min, static_cast<double>(i) / (kGrid - 1));
    const double r = ratio(y);
    if (r > best) {
      best = r;
      best_y = y;
    }
  }
  if (best_y > 0.0) {
    const double step = std::pow(c.length / y_min, 1.0 / (kGrid - 1));
    double lo = std::log(best_y / step), hi = std::log(std::min(c.length, best_y * step));
    const double g = (std::sqrt(5.0) - 1.0) / 2.0;
    for (int it = 0; it < 80; ++it) {
      const double x1 = hi - g * (hi - lo), x2 = lo + g * (hi - lo);
      if (ratio(std::exp(x1)) > ratio(std::exp(x2))) hi = x2;
      else lo = x1;
    }
    best = std::max(best, ratio(std::exp(0.5 * (lo + hi))));
  }
  return best;
}

/// [3A + L(b - a)] C_f u^{1/m} with A, L the sup and Lipschitz constant of the
/// model density on the piece.
template <UnivariateMap F>
double prop2_bound(const F& f, const DensityModel& model, const MonotonePiece& piece, double u) {
  if (!(u >= 0.0)) throw input_error("prop2_bound: u must be >= 0");
  if (u == 0.0) return 0.0;
  const double A = model.sup_bound_on(piece.a, piece.b);
  const double L = model.lipschitz_on(piece.a, piece.b);
  return (3.0 * A + L * piece.length()) * prop1_constant(f, piece) * std::pow(u, 1.0 / piece.local_order_m);
}

struct PieceConstant {
  double a = 0.0, b = 0.0;
  double A = 0.0, L = 0.0;
  double C_f = 0.0;
  int m = 1;
  double K = 0.0;
  /// (3A + L(b - a)) C_f
  double term = 0.0;
  bool tail = false;
};

struct PartitionCertificate {
  std::vector<double> breakpoints;
  std::vector<PieceConstant> pieces;
  double C1 = 0.0;  // central pieces
  double C2 = 0.0;  // right tail segments
  double C3 = 0.0;  // left tail segments
  /// Bound for the tail beyond the last segment on either side.
  double truncation_bound = 0.0;
  int right_segments = 0, left_segments = 0;
  double alpha = 1.0;
  int m_max = 1;
  /// C1 + C2 + C3 + truncation_bound; delta(u) <= C_total u^alpha for u in (0, 1].
  double C_total = 0.0;
  /// max(C_total, 2): valid for every u > 0 since delta <= 2.
  [[nodiscard]] double C_all_u() const { return std::max(C_total, 2.0); }
};

namespace detail {

inline PieceConstant piece_constant(const Polynomial& f, const DensityModel& model, double a, double b, bool tail) {
  const MonotonePiece p = make_piece(f, a, b);
  PieceConstant c;
  c.a = a;
  c.b = b;
  c.A = model.sup_bound_on(a, b);
  c.L = model.lipschitz_on(a, b);
  c.C_f = prop1_constant(f, p);
  c.m = p.local_order_m;
  c.K = p.local_constant_K;
  c.term = (3.0 * c.A + c.L * (b - a)) * c.C_f;
  c.tail = tail;
  return c;
}

}  // namespace detail

/// Partition-and-sum constant for a Gaussian source: pieces between the zeros
/// of f' and f'', then unit segments outward in each tail until a segment
/// term drops below tail_tol 2^{-j} beyond mean + sigma (mean - sigma on the
/// left). The rest of a tail has a decreasing image density, so its modulus is
/// at most 2u p(z)/|f'(z)| at the truncation point z.
inline PartitionCertificate certified_modulus_constant(const Polynomial& f, const DensityModel& model, double tail_tol = 1e-8) {
  if (!(tail_tol > 0.0)) throw input_error("certified_modulus_constant: tail_tol must be > 0");
  if (!model.is_gaussian() || model.kind() == DensityKind::restricted)
    throw input_error("certified_modulus_constant: model must be Gaussian");
  if (f.degree() < 1) throw input_error("certified_modulus_constant: map is constant");
  constexpr double inf = std::numeric_limits<double>::infinity();
  PartitionCertificate cert;
  cert.breakpoints = decomposition_breakpoints(f, -inf, inf);
  const double mu = model.mean(), sd = model.sigma();
  const double first = cert.breakpoints.empty() ? mu : cert.breakpoints.front();
  const double last = cert.breakpoints.empty() ? mu : cert.breakpoints.back();
  for (std::size_t i = 0; i + 1 < cert.breakpoints.size(); ++i) {
    auto c = detail::piece_constant(f, model, cert.breakpoints[i], cert.breakpoints[i + 1], false);
    cert.C1 += c.term;
    cert.pieces.push_back(c);
  }
  const Polynomial df = differentiate(f);
  for (int side : {1, -1}) {
    double z = side > 0 ? last : first;
    double sum = 0.0;
    int j = 0;
    for (;; ++j) {
      if (j > 10000) throw numeric_error("certified_modulus_constant: tail series did not converge");
      const double z1 = z + side;
      auto c = side > 0 ? detail::piece_constant(f, model, z, z1, true) : detail::piece_constant(f, model, z1, z, true);
      sum += c.term;
      cert.pieces.push_back(c);
      z = z1;
      const bool beyond = side > 0 ? z >= mu + sd : z <= mu - sd;
      if (beyond && c.term < tail_tol * std::ldexp(1.0, -j)) break;
    }
    const double slope = std::abs(df(z));
    if (!(slope > 0.0)) throw numeric_error("certified_modulus_constant: flat point at tail truncation");
    cert.truncation_bound += 2.0 * model.density(z) / slope;
    if (side > 0) {
      cert.C2 = sum;
      cert.right_segments = j + 1;
    } else {
      cert.C3 = sum;
      cert.left_segments = j + 1;
    }
  }
  for (const auto& p : cert.pieces) cert.m_max = std::max(cert.m_max, p.m);
  cert.alpha = 1.0 / cert.m_max;
  cert.C_total = cert.C1 + cert.C2 + cert.C3 + cert.truncation_bound;
  return cert;
}

struct PowerFit {
  double slope = 0.0;
  double intercept = 0.0;
  double slope_std_error = 0.0;
  double residual = 0.0;  // RMS of the log residuals
  int points = 0;
};

/// Least squares log y = intercept + slope log x over positive pairs.
inline PowerFit fit_power_law(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size()) throw input_error("fit_power_law: size mismatch");
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < x.size(); ++i)
    if (x[i] > 0.0 && y[i] > 0.0) {
      lx.push_back(std::log(x[i]));
      ly.push_back(std::log(y[i]));
    }
  const auto n = static_cast<double>(lx.size());
  if (lx.size() < 2) throw input_error("fit_power_law: need at least two positive points");
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    mx += lx[i];
    my += ly[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
  }
  if (!(sxx > 0.0)) throw input_error("fit_power_law: x values are all equal");
  PowerFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double ss = 0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    const double r = ly[i] - fit.intercept - fit.slope * lx[i];
    ss += r * r;
  }
  fit.residual = std::sqrt(ss / n);
  fit.slope_std_error = lx.size() > 2 ? std::sqrt(ss / (n - 2.0) / sxx) : 0.0;
  fit.points = static_cast<int>(lx.size());
  return fit;
}

/// Fit log delta = log C + alpha log u over curve points with u in window and
/// 0 < delta < 2 mass (saturated points dropped).
inline BesovEstimate fit_smoothness(const ModulusCurve& curve, Interval window) {
  std::vector<double> u, d;
  for (std::size_t i = 0; i < curve.u_grid.size(); ++i) {
    const double ui = curve.u_grid[i], di = curve.delta_values[i];
    if (ui < window.lo || ui > window.hi) continue;
    if (!(di > 0.0) || di >= 2.0 * curve.mass * (1.0 - 1e-9)) continue;
    u.push_back(ui);
    d.push_back(di);
  }
  if (u.size() < 8) throw input_error("fit_smoothness: fewer than 8 usable points in the window");
  const PowerFit fit = fit_power_law(u, d);
  BesovEstimate e;
  e.alpha = fit.slope;
  e.constant_C = std::exp(fit.intercept);
  e.kind = EstimateKind::fitted;
  e.residual = fit.residual;
  e.alpha_std_error = fit.slope_std_error;
  e.points = fit.points;
  return e;
}

}  // namespace tvkit
