#pragma once

// Gauss-Kronrod (10/21) adaptive quadrature and Gauss-Hermite rules for
// expectations under the standard Gaussian.

#include <tvkit/errors.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <vector>

namespace tvkit {

struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;
  int intervals = 0;
};

namespace detail {

// QUADPACK qk21 abscissae and weights.
inline constexpr std::array<double, 11> kXgk{
    0.995657163025808080735527280689003, 0.973906528517171720077964012084452,
    0.930157491355708226001207180059508, 0.865063366688984510732096688423493,
    0.780817726586416897063717578345042, 0.679409568299024406234327365114874,
    0.562757134668604683339000099272694, 0.433395394129247190799265943165784,
    0.294392862701460198131126603103866, 0.148874338981631210884826001129720,
    0.000000000000000000000000000000000};
inline constexpr std::array<double, 11> kWgk{
    0.011694638867371874278064396062192, 0.032558162307964727478818972459390,
    0.054755896574351996031381300244580, 0.075039674810919952767043140916190,
    0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
    0.123491976262065851077208980114164, 0.134709217311473325928054001771707,
    0.142775938577060080797094273138717, 0.147739104901338491374841515972068,
    0.149445554002916905664936468389821};
inline constexpr std::array<double, 5> kWg{
    0.066671344308688137593568809893332, 0.149451349150580593145776339657697,
    0.219086362515982043995534934228163, 0.269266719309996355091226921569469,
    0.295524224714752870173892994651338};

struct Panel {
  double a, b, value, error;
  bool operator<(const Panel& o) const { return error < o.error; }
};

}  // namespace detail

/// One 21-point Kronrod panel; error = |K21 - G10|.
template <class Fn>
QuadratureResult gauss_kronrod_21(Fn&& f, double a, double b) {
  const double c = 0.5 * (a + b), h = 0.5 * (b - a);
  const double fc = f(c);
  double k = fc * detail::kWgk[10];
  double g = 0.0;
  for (int j = 0; j < 10; ++j) {
    const double dx = h * detail::kXgk[static_cast<std::size_t>(j)];
    const double s = f(c - dx) + f(c + dx);
    k += detail::kWgk[static_cast<std::size_t>(j)] * s;
    if (j % 2 == 1) g += detail::kWg[static_cast<std::size_t>(j / 2)] * s;
  }
  return {k * h, std::abs((k - g) * h), 1};
}

/// Globally adaptive bisection driven by the largest panel error.
template <class Fn>
QuadratureResult integrate_adaptive(Fn&& f, double a, double b, double abs_tol, double rel_tol = 1e-12,
                                    int max_intervals = 4000) {
  if (a == b) return {};
  std::vector<detail::Panel> heap;
  auto first = gauss_kronrod_21(f, a, b);
  heap.push_back({a, b, first.value, first.error});
  double total = first.value, err = first.error;
  std::vector<detail::Panel> frozen;
  while (!heap.empty() && err > std::max(abs_tol, rel_tol * std::abs(total)) &&
         static_cast<int>(heap.size() + frozen.size()) < max_intervals) {
    std::pop_heap(heap.begin(), heap.end());
    const detail::Panel p = heap.back();
    heap.pop_back();
    const double m = 0.5 * (p.a + p.b);
    if (!(m > p.a && m < p.b)) {
      frozen.push_back(p);
      continue;
    }
    const auto l = gauss_kronrod_21(f, p.a, m);
    const auto r = gauss_kronrod_21(f, m, p.b);
    total += l.value + r.value - p.value;
    err += l.error + r.error - p.error;
    heap.push_back({p.a, m, l.value, l.error});
    std::push_heap(heap.begin(), heap.end());
    heap.push_back({m, p.b, r.value, r.error});
    std::push_heap(heap.begin(), heap.end());
  }
  // Re-sum from panels to shed accumulated cancellation in the running totals.
  QuadratureResult out;
  for (const auto* set : {&heap, &frozen})
    for (const auto& p : *set) {
      out.value += p.value;
      out.error += p.error;
    }
  out.intervals = static_cast<int>(heap.size() + frozen.size());
  return out;
}

/// Nodes and weights for E[g(Z)], Z ~ N(0, 1): sum_i w_i g(z_i).
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

inline GaussRule gauss_hermite(int n) {
  if (n < 1) throw input_error("gauss_hermite: order must be >= 1");
  // Physicists' rule (weight exp(-x^2)) by Newton on the orthonormal recurrence.
  const double pim4 = 1.0 / std::pow(std::numbers::pi, 0.25);
  std::vector<double> x(static_cast<std::size_t>(n)), w(static_cast<std::size_t>(n));
  const int m = (n + 1) / 2;
  double z = 0.0;
  for (int i = 0; i < m; ++i) {
    if (i == 0) z = std::sqrt(2.0 * n + 1) - 1.85575 * std::pow(2.0 * n + 1, -0.16667);
    else if (i == 1) z -= 1.14 * std::pow(static_cast<double>(n), 0.426) / z;
    else if (i == 2) z = 1.86 * z - 0.86 * x[0];
    else if (i == 3) z = 1.91 * z - 0.91 * x[1];
    else z = 2.0 * z - x[static_cast<std::size_t>(i - 2)];
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p1 = pim4, p2 = 0.0;
      for (int j = 1; j <= n; ++j) {
        const double p3 = p2;
        p2 = p1;
        p1 = z * std::sqrt(2.0 / j) * p2 - std::sqrt((j - 1.0) / j) * p3;
      }
      pp = std::sqrt(2.0 * n) * p2;
      const double z1 = z;
      z = z1 - p1 / pp;
      if (std::abs(z - z1) <= 1e-15 * std::max(1.0, std::abs(z))) break;
    }
    x[static_cast<std::size_t>(i)] = z;
    x[static_cast<std::size_t>(n - 1 - i)] = -z;
    w[static_cast<std::size_t>(i)] = w[static_cast<std::size_t>(n - 1 - i)] = 2.0 / (pp * pp);
  }
  GaussRule rule;
  for (int i = n - 1; i >= 0; --i) {
    rule.nodes.push_back(std::numbers::sqrt2 * x[static_cast<std::size_t>(i)]);
    rule.weights.push_back(w[static_cast<std::size_t>(i)] / std::sqrt(std::numbers::pi));
  }
  return rule;
}

}  // namespace tvkit
