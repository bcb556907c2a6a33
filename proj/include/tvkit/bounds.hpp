#pragma once

// The smoothing bound for ||law f(X) - law g(X)|| and its ingredients, the
// gradient star norm, the multivariate rate check, the trigonometric
// determinant identity, and the radial modulus example.

#include <tvkit/besov.hpp>
#include <tvkit/density_model.hpp>
#include <tvkit/errors.hpp>
#include <tvkit/multipoly.hpp>
#include <tvkit/pushforward.hpp>
#include <tvkit/quadrature.hpp>
#include <tvkit/random.hpp>
#include <tvkit/special.hpp>
#include <tvkit/tv.hpp>
#include <tvkit/value_integral.hpp>

#include <boost/math/special_functions/gamma.hpp>
#include <boost/multiprecision/cpp_int.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <memory>
#include <numbers>
#include <numeric>
#include <vector>

namespace tvkit {

struct BoundReport {
  double alpha = 0.0;
  double C_f = 0.0;
  double C_g = 0.0;
  double abs_moment = 0.0;
  /// ((C_f + C_g) l1)^{1/(1+alpha)}
  double sigma_opt = 0.0;
  /// (l1 / (C_f + C_g))^{1/(1+alpha)}: minimiser of the three-term bound.
  double sigma_min = 0.0;
  double constant_C = 0.0;
  double l1 = 0.0;
  double raw_bound = 0.0;
  double clamped_bound = 0.0;
  /// Term bounds at sigma_opt.
  double delta1_bound = 0.0;
  double delta2_bound = 0.0;
  double delta3_bound = 0.0;
  /// Sum of the three term bounds at sigma_min.
  double min_sum_bound = 0.0;
  bool degenerate = false;
};

namespace detail {

inline double term_bounds(double Cf, double Cg, double alpha, double E, double l1, double sigma, double* d1, double* d2,
                          double* d3) {
  const double sa = std::pow(sigma, alpha);
  *d1 = Cf * sa * E;
  *d2 = Cg * sa * E;
  *d3 = 2.0 / (sigma * std::sqrt(2.0 * std::numbers::pi)) * l1;
  return *d1 + *d2 + *d3;
}

}  // namespace detail

/// C = (C_f + C_g)^{1/(alpha+1)} (E|nu|^alpha + sqrt(pi/2)), raw = C l1^{alpha/(alpha+1)}.
inline BoundReport theorem1_bound(double C_f, double C_g, double alpha, double l1) {
  if (!(C_f >= 0.0) || !(C_g >= 0.0) || !(l1 >= 0.0)) throw input_error("theorem1_bound: inputs must be >= 0");
  if (!(alpha > 0.0)) throw input_error("theorem1_bound: alpha must be > 0");
  BoundReport r;
  r.alpha = alpha;
  r.C_f = C_f;
  r.C_g = C_g;
  r.l1 = l1;
  r.abs_moment = gaussian_abs_moment(alpha);
  const double S = C_f + C_g;
  r.constant_C = std::pow(S, 1.0 / (alpha + 1.0)) * (r.abs_moment + std::sqrt(std::numbers::pi / 2.0));
  if (l1 == 0.0) {
    r.degenerate = true;
    return r;
  }
  r.raw_bound = r.constant_C * std::pow(l1, alpha / (alpha + 1.0));
  r.clamped_bound = std::min(2.0, r.raw_bound);
  if (S == 0.0) {
    r.degenerate = true;
    return r;
  }
  r.sigma_opt = std::pow(S * l1, 1.0 / (1.0 + alpha));
  r.sigma_min = std::pow(l1 / S, 1.0 / (1.0 + alpha));
  detail::term_bounds(C_f, C_g, alpha, r.abs_moment, l1, r.sigma_opt, &r.delta1_bound, &r.delta2_bound, &r.delta3_bound);
  double a, b, c;
  r.min_sum_bound = detail::term_bounds(C_f, C_g, alpha, r.abs_moment, l1, r.sigma_min, &a, &b, &c);
  return r;
}

/// int 2(2 Phi(|f - g| / (2 sigma)) - 1) dP: the exact smoothed comparison
/// averaged over the source.
inline double delta3_exact(const Polynomial& f, const Polynomial& g, const DensityModel& model, double sigma) {
  if (!(sigma > 0.0)) throw input_error("delta3_exact: sigma must be > 0");
  const Polynomial h = f - g;
  if (h.is_zero()) return 0.0;
  const Interval w = model.effective_support();
  std::vector<double> cuts{w.lo};
  if (h.degree() > 0)
    for (double r : real_roots(h, w.lo, w.hi))
      if (r > w.lo && r < w.hi) cuts.push_back(r);
  cuts.push_back(w.hi);
  double acc = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i)
    acc += integrate_adaptive(
               [&](double x) { return tv_gaussian_same_variance(f(x), g(x), sigma) * model.density(x); }, cuts[i],
               cuts[i + 1], 1e-15, 1e-13)
               .value;
  return acc;
}

/// Density of f(X) + sigma nu as a value-space term (smooth; support padded
/// by the Gaussian truncation width).
template <UnivariateMap F>
DensityTerm smoothed_term(const PushforwardDensity<F>& q, double sigma, double weight = 1.0, double inner_tol = 1e-13) {
  if (!(sigma > 0.0)) throw input_error("smoothed density needs sigma > 0");
  auto base = std::make_shared<const DensityTerm>(q.as_term());
  const double w = DensityModel::kTruncation * sigma;
  const Interval range = q.value_range();
  auto eval = [base, sigma, w, inner_tol](double anchor, double offset) {
    const double t = anchor + offset;
    const auto r = integrate_value_space(
        {*base}, [&](double v, double s) { return s * normal_pdf((t - v) / sigma) / sigma; }, {.abs_tol = inner_tol}, {},
        Interval{t - w, t + w});
    return r.value;
  };
  return {eval, {{range.lo - w, 1}, {range.hi + w, 1}}, 0.0, weight};
}

/// || law f(X) - law f(X) + sigma nu ||, nu ~ N(0,1) independent.
template <UnivariateMap F>
TVResult smoothing_distance(const PushforwardDensity<F>& q, double sigma, double tol = 1e-9) {
  TVResult r = tv_terms({q.as_term(0.0, 1.0), smoothed_term(q, sigma, -1.0)}, tol);
  r.error_estimate += 2.0 * q.tail_mass();
  return r;
}

// ---------------------------------------------------------------------------

/// sup over unit e of sqrt(E[(d_e f)^2]) under N(0, I_d). The second-moment
/// matrix of the gradient is exact by a Gauss-Hermite tensor rule; the sup is
/// taken over a direction grid doubled until the value changes by < 1e-4.
inline double grad_star_norm(const MultiPoly& f, int n_directions = 64, int quad_order = 0) {
  const int d = f.dimension();
  if (d > 6) throw unsupported_error("grad_star_norm: dimension above 6 is not supported");
  if ((d == 2 || d == 3) && n_directions < 64) throw input_error("grad_star_norm: need at least 64 directions for d = 2, 3");
  if (quad_order <= 0) quad_order = std::max(4, f.total_degree() + 2);
  const auto rule = gauss_hermite(quad_order);
  std::vector<MultiPoly> grad;
  for (int i = 0; i < d; ++i) grad.push_back(f.partial(i));
  std::vector<double> M(static_cast<std::size_t>(d * d), 0.0);
  std::vector<std::size_t> idx(static_cast<std::size_t>(d), 0);
  std::vector<double> x(static_cast<std::size_t>(d)), gv(static_cast<std::size_t>(d));
  const std::size_t q = rule.nodes.size();
  while (true) {
    double w = 1.0;
    for (int k = 0; k < d; ++k) {
      x[static_cast<std::size_t>(k)] = rule.nodes[idx[static_cast<std::size_t>(k)]];
      w *= rule.weights[idx[static_cast<std::size_t>(k)]];
    }
    for (int i = 0; i < d; ++i) gv[static_cast<std::size_t>(i)] = grad[static_cast<std::size_t>(i)](x);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) M[static_cast<std::size_t>(i * d + j)] += w * gv[static_cast<std::size_t>(i)] * gv[static_cast<std::size_t>(j)];
    int k = 0;
    while (k < d && ++idx[static_cast<std::size_t>(k)] == q) idx[static_cast<std::size_t>(k++)] = 0;
    if (k == d) break;
  }
  auto quad = [&](const std::vector<double>& e) {
    double s = 0.0;
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) s += e[static_cast<std::size_t>(i)] * M[static_cast<std::size_t>(i * d + j)] * e[static_cast<std::size_t>(j)];
    return s;
  };
  if (d == 1) return std::sqrt(M[0]);
  auto sup_on_grid = [&](int n) {
    double best = 0.0;
    std::vector<double> e(static_cast<std::size_t>(d));
    if (d == 2) {
      for (int k = 0; k < n; ++k) {
        const double th = std::numbers::pi * k / n;
        e = {std::cos(th), std::sin(th)};
        best = std::max(best, quad(e));
      }
    } else if (d == 3) {
      // Fibonacci lattice on the sphere.
      const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
      for (int k = 0; k < n; ++k) {
        const double z = 1.0 - 2.0 * (k + 0.5) / n;
        const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
        e = {r * std::cos(golden * k), r * std::sin(golden * k), z};
        best = std::max(best, quad(e));
      }
    } else {
      CounterRng rng(CounterRng::derive(0x9a7d, static_cast<std::uint64_t>(d)));
      for (int k = 0; k < n; ++k) {
        double norm = 0.0;
        for (auto& v : e) {
          v = rng.normal();
          norm += v * v;
        }
        for (auto& v : e) v /= std::sqrt(norm);
        best = std::max(best, quad(e));
      }
    }
    return best;
  };
  double prev = std::sqrt(sup_on_grid(n_directions));
  for (int n = 2 * n_directions; n <= (1 << 22); n *= 2) {
    const double cur = std::sqrt(sup_on_grid(n));
    if (std::abs(cur - prev) < 1e-4) return cur;
    prev = cur;
  }
  return prev;
}

struct Theorem2Point {
  TVResult measured_tv;
  double l1 = 0.0;
  double log_l1 = 0.0;
  double log_tv = 0.0;
  /// true when f = g or the measured TV is not resolved above its error
  bool excluded = false;
};

/// Sampler for f(X), X ~ N(0, I_d).
inline Sampler multipoly_sampler(MultiPoly f) {
  return [f = std::move(f)](CounterRng& rng) {
    std::vector<double> x(static_cast<std::size_t>(f.dimension()));
    for (auto& v : x) v = rng.normal();
    return f(x);
  };
}

inline Theorem2Point theorem2_check(const MultiPoly& f, const MultiPoly& g, const MonteCarloOptions& mc = {}) {
  if (f.dimension() != g.dimension()) throw input_error("theorem2_check: dimension mismatch");
  if (f.is_constant() || g.is_constant()) throw input_error("theorem2_check: maps must be non-constant");
  Theorem2Point p;
  p.l1 = l1_distance(f, g, mc.seed);
  if (p.l1 == 0.0) {
    p.excluded = true;
    return p;
  }
  const Sampler a = multipoly_sampler(f), b = multipoly_sampler(g);
  p.measured_tv = tv_histogram_mc(a, b, auto_range(a, b, mc.seed), mc);
  p.log_l1 = std::log(p.l1);
  p.log_tv = p.measured_tv.value > 0.0 ? std::log(p.measured_tv.value) : -std::numeric_limits<double>::infinity();
  p.excluded = !(p.measured_tv.value > p.measured_tv.error_estimate);
  return p;
}

// ---------------------------------------------------------------------------

using BigInt = boost::multiprecision::cpp_int;

struct VandermondeCheck {
  int n = 0;
  BigInt W;
  BigInt Delta;
  /// |det| of the explicit 2n x 2n system, by fraction-free elimination.
  BigInt dense_determinant;
  bool nonzero = false;
  bool agrees = false;
};

/// Fraction-free (Bareiss) determinant.
inline BigInt bareiss_determinant(std::vector<std::vector<BigInt>> a) {
  const std::size_t n = a.size();
  if (n == 0) return 1;
  BigInt prev = 1;
  int sign = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (a[k][k] == 0) {
      std::size_t p = k + 1;
      while (p < n && a[p][k] == 0) ++p;
      if (p == n) return 0;
      std::swap(a[k], a[p]);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i)
      for (std::size_t j = k + 1; j < n; ++j) a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
    prev = a[k][k];
  }
  return sign * a[n - 1][n - 1];
}

/// The system for f^{(j)}(0) = 0, j = 1..2n, in the unknowns a_1..a_n, b_1..b_n
/// of a degree-n trigonometric polynomial: row j has k^j in the b_k columns for
/// odd j and in the a_k columns for even j (signs dropped). Its determinant is
/// (n!)^3 W^2 with W the Vandermonde determinant of 1, 2^2, ..., n^2.
inline VandermondeCheck vandermonde_system_check(int n) {
  if (n < 1) throw input_error("vandermonde_system_check: n must be >= 1");
  if (n > 12) throw unsupported_error("vandermonde_system_check: n above 12 is not supported");
  VandermondeCheck c;
  c.n = n;
  c.W = 1;
  for (int i = 1; i <= n; ++i)
    for (int j = i + 1; j <= n; ++j) c.W *= BigInt(j * j - i * i);
  BigInt fact = 1;
  for (int i = 2; i <= n; ++i) fact *= i;
  c.Delta = fact * fact * fact * c.W * c.W;
  c.nonzero = c.Delta != 0;
  const auto N = static_cast<std::size_t>(2 * n);
  std::vector<std::vector<BigInt>> m(N, std::vector<BigInt>(N, 0));
  for (int j = 1; j <= 2 * n; ++j)
    for (int k = 1; k <= n; ++k) {
      BigInt p = 1;
      for (int e = 0; e < j; ++e) p *= k;
      const auto col = static_cast<std::size_t>(j % 2 == 1 ? n + k - 1 : k - 1);
      m[static_cast<std::size_t>(j - 1)][col] = p;
    }
  c.dense_determinant = abs(bareiss_determinant(std::move(m)));
  c.agrees = c.dense_determinant == c.Delta;
  return c;
}

// ---------------------------------------------------------------------------

/// delta(u) curve for a trigonometric polynomial under the standard Gaussian.
inline ModulusCurve trig_modulus_experiment(const TrigPolynomial& f, const std::vector<double>& u_grid, double tol = kDefaultTol) {
  if (f.degree() < 1) throw input_error("trig_modulus_experiment: map is constant");
  return modulus_curve(PushforwardDensity<TrigPolynomial>(f, DensityModel::standard_gaussian()), u_grid, tol);
}

/// Law of Y = |X|^m = (x_1^2 + ... + x_d^2)^{m/2}, X ~ N(0, I_d), as a value-space
/// term. Near 0 the density is c y^{d/m - 1}, regularised by y = s^M with
/// M = m / gcd(m, d).
class RadialDensity {
 public:
  RadialDensity(int d, int m) : d_(d), m_(m) {
    if (d < 1 || m < 1) throw input_error("radial density needs d >= 1 and m >= 1");
    s_max_ = 2.0 * (d + 40.0);
    y_max_ = std::pow(s_max_, 0.5 * m);
    log_c_ = std::log(2.0 / m) - 0.5 * d * std::numbers::ln2 - std::lgamma(0.5 * d);
    tail_ = boost::math::gamma_q(0.5 * d, 0.5 * s_max_);
  }
  [[nodiscard]] double operator()(double y) const {
    if (!(y > 0.0) || y > y_max_) return 0.0;
    const double ly = std::log(y);
    return std::exp(log_c_ + (static_cast<double>(d_) / m_ - 1.0) * ly - 0.5 * std::exp(2.0 / m_ * ly));
  }
  [[nodiscard]] int singular_order() const { return m_ / std::gcd(m_, d_); }
  [[nodiscard]] double tail_mass() const { return tail_; }
  [[nodiscard]] double y_max() const { return y_max_; }
  [[nodiscard]] DensityTerm as_term(double shift = 0.0, double weight = 1.0) const {
    const RadialDensity self = *this;
    return {[self](double a, double o) { return self(a + o); }, {{0.0, singular_order()}, {y_max_, 1}}, shift, weight};
  }

 private:
  int d_, m_;
  double s_max_ = 0.0, y_max_ = 0.0, log_c_ = 0.0, tail_ = 0.0;
};

inline ModulusCurve radial_modulus_curve(int d, int m, const std::vector<double>& u_grid, double tol = kDefaultTol) {
  const RadialDensity q(d, m);
  ModulusCurve c;
  c.u_grid = u_grid;
  c.map_description = "|x|^" + std::to_string(m) + " in dimension " + std::to_string(d);
  c.model_description = "gauss^" + std::to_string(d);
  c.mass = 1.0;
  for (double u : u_grid) {
    const TVResult r = tv_terms({q.as_term(0.0, 1.0), q.as_term(u, -1.0)}, tol);
    c.delta_values.push_back(r.value);
    c.error_estimates.push_back(r.error_estimate + 2.0 * q.tail_mass());
  }
  return c;
}

/// Sampler for |X|^m, X ~ N(0, I_d).
inline Sampler radial_sampler(int d, int m, double shift = 0.0) {
  return [d, m, shift](CounterRng& rng) {
    double s = 0.0;
    for (int i = 0; i < d; ++i) {
      const double z = rng.normal();
      s += z * z;
    }
    return std::pow(s, 0.5 * m) + shift;
  };
}

}  // namespace tvkit
