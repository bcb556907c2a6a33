#pragma once

// Integrals over value space of expressions built from several (possibly
// shifted) one-dimensional densities with integrable power-law blowups.
//
// Every density term lists its singular values with an order M: near such a
// value the density behaves like |t - t_c|^{1/M - 1}. The real line is cut at
// all singular values of all terms; each cell is split at its midpoint and each
// half is integrated in the variable s with t = t_b +- s^M, anchored at the
// nearer cut. With M a multiple of every local order the transformed integrand
// is bounded and smooth.

#include <tvkit/errors.hpp>
#include <tvkit/interval.hpp>
#include <tvkit/quadrature.hpp>
#include <tvkit/special.hpp>

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <vector>

namespace tvkit {

struct Singularity {
  double value = 0.0;
  int order = 1;
  friend bool operator==(const Singularity&, const Singularity&) = default;
};

/// A density evaluated as eval(anchor, offset) = q(anchor + offset). Callers
/// pass one of the term's own singular values as the anchor whenever the point
/// is near it, so the term can resolve tiny offsets without cancellation.
struct DensityTerm {
  std::function<double(double, double)> eval;
  /// Singular values in the term's own coordinates, including support ends.
  std::vector<Singularity> singularities;
  double shift = 0.0;
  double weight = 1.0;
};

struct ValueIntegralOptions {
  double abs_tol = 1e-10;
  int max_intervals = 4000;
  int max_order = 60;
};

namespace detail {

struct Cut {
  double x = 0.0;
  int order = 1;
  /// term index -> anchor in that term's coordinates
  std::map<std::size_t, double> anchors;
};

inline std::vector<Cut> build_cuts(const std::vector<DensityTerm>& terms, const std::vector<double>& extra, int max_order) {
  struct Node {
    double x;
    int order;
    std::size_t term;
    double anchor;
    bool owned;
  };
  std::vector<Node> nodes;
  for (std::size_t j = 0; j < terms.size(); ++j)
    for (const auto& s : terms[j].singularities) nodes.push_back({s.value + terms[j].shift, s.order, j, s.value, true});
  for (double x : extra) nodes.push_back({x, 1, 0, 0.0, false});
  std::sort(nodes.begin(), nodes.end(), [](const Node& a, const Node& b) { return a.x < b.x; });
  std::vector<Cut> cuts;
  for (const auto& n : nodes) {
    if (!std::isfinite(n.x)) throw numeric_error("value-space cut at a non-finite point");
    const bool merge = !cuts.empty() && n.x - cuts.back().x <= 8.0 * std::numeric_limits<double>::epsilon() *
                                                                   std::max(1.0, std::abs(n.x));
    if (!merge) cuts.push_back({n.x, 1, {}});
    Cut& c = cuts.back();
    c.order = static_cast<int>(lcm_capped(c.order, std::max(1, n.order), max_order));
    if (n.owned && n.order >= 1) {
      auto it = c.anchors.find(n.term);
      // Keep the anchor of the strongest singularity of this term at the cut.
      if (it == c.anchors.end() || n.order > 1) c.anchors[n.term] = n.anchor;
      if (n.order > 1) c.x = n.anchor + terms[n.term].shift;
    }
  }
  return cuts;
}

}  // namespace detail

/// Integral over [lo, hi] (default: hull of all cuts) of g(t, sum_j w_j q_j(t - shift_j)).
template <class G>
QuadratureResult integrate_value_space(const std::vector<DensityTerm>& terms, G&& g, const ValueIntegralOptions& opts = {},
                                       const std::vector<double>& extra_cuts = {},
                                       std::optional<Interval> range = std::nullopt) {
  std::vector<double> extra = extra_cuts;
  if (range) {
    extra.push_back(range->lo);
    extra.push_back(range->hi);
  }
  auto cuts = detail::build_cuts(terms, extra, opts.max_order);
  if (range)
    std::erase_if(cuts, [&](const detail::Cut& c) { return c.x < range->lo || c.x > range->hi; });
  QuadratureResult total;
  if (cuts.size() < 2) return total;
  const int halves = 2 * static_cast<int>(cuts.size() - 1);
  const double tol = std::max(opts.abs_tol / halves, 1e-16);

  auto integrate_half = [&](const detail::Cut& c, double sign, double half_len) {
    const int M = c.order;
    const double smax = std::pow(half_len, 1.0 / M);
    auto integrand = [&](double s) {
      const double off = sign * std::pow(s, M);
      double sum = 0.0;
      for (std::size_t j = 0; j < terms.size(); ++j) {
        const auto it = c.anchors.find(j);
        const double anchor = it != c.anchors.end() ? it->second : c.x - terms[j].shift;
        sum += terms[j].weight * terms[j].eval(anchor, off);
      }
      const double jac = M == 1 ? 1.0 : M * std::pow(s, M - 1);
      return g(c.x + off, sum) * jac;
    };
    return integrate_adaptive(integrand, 0.0, smax, tol, 1e-14, opts.max_intervals);
  };

  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double h = cuts[i + 1].x - cuts[i].x;
    if (!(h > 0.0)) continue;
    for (const auto& r : {integrate_half(cuts[i], 1.0, 0.5 * h), integrate_half(cuts[i + 1], -1.0, 0.5 * h)}) {
      total.value += r.value;
      total.error += r.error;
      total.intervals += r.intervals;
    }
  }
  return total;
}

}  // namespace tvkit
