#pragma once

// Density of the image measure P f^{-1} for a piecewise monotone map f:
// q(t) = sum over preimages x_i of t of p(x_i) / |f'(x_i)|.

#include <tvkit/decomposition.hpp>
#include <tvkit/density_model.hpp>
#include <tvkit/errors.hpp>
#include <tvkit/value_integral.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <vector>

namespace tvkit {

namespace detail {

/// Solve map.value(y) = d for y in [0, len], where |map.value| increases from 0.
template <class Map>
double solve_local(const Map& map, double d, double len, int m, double K) {
  if (d == 0.0) return 0.0;
  const double sgn = d > 0.0 ? 1.0 : -1.0;
  const double target = std::abs(d);
  double lo = 0.0, hi = len;
  double y = K > 0.0 ? std::pow(target / K, 1.0 / m) : 0.5 * len;
  if (!(y > 0.0 && y < len)) y = 0.5 * len;
  for (int it = 0; it < 300; ++it) {
    const double gy = sgn * map.value(y) - target;
    if (gy == 0.0) return y;
    if (gy < 0.0) lo = y;
    else hi = y;
    const double slope = sgn * map.slope(y);
    double next = slope > 0.0 ? y - gy / slope : -1.0;
    if (!(next > lo && next < hi)) next = lo > 0.0 && hi > 4.0 * lo ? std::sqrt(lo * hi) : 0.5 * (lo + hi);
    if (std::abs(next - y) <= 2.0 * std::numeric_limits<double>::epsilon() * next || !(hi > lo)) return next;
    y = next;
  }
  return y;
}

}  // namespace detail

template <UnivariateMap F>
class PushforwardDensity {
 public:
  struct End {
    double x = 0.0;
    double value = 0.0;
    LocalOrder order;
    int dir = 1;
    /// true when the end is interior to the domain (shared with a neighbour piece)
    bool shared = false;
    LocalMap<F> map;
  };
  struct Piece {
    MonotonePiece shape;
    End left, right;
    double mass = 0.0;
  };

  PushforwardDensity(F f, DensityModel model) : PushforwardDensity(f, model, model.effective_support()) {}

  PushforwardDensity(F f, DensityModel model, Interval domain)
      : f_(std::move(f)), model_(std::move(model)), domain_(domain) {
    domain_.lo = std::max(domain_.lo, model_.effective_support().lo);
    domain_.hi = std::min(domain_.hi, model_.effective_support().hi);
    if (!(domain_.lo < domain_.hi) || !std::isfinite(domain_.lo) || !std::isfinite(domain_.hi))
      throw input_error("pushforward needs a finite non-empty domain");
    const auto shapes = monotone_convex_decomposition(f_, domain_.lo, domain_.hi);
    for (std::size_t i = 0; i < shapes.size(); ++i) {
      Piece p;
      p.shape = shapes[i];
      p.left = make_end(shapes[i].a, +1, i > 0);
      p.right = make_end(shapes[i].b, -1, i + 1 < shapes.size());
      p.mass = model_.mass(shapes[i].a, shapes[i].b);
      pieces_.push_back(std::move(p));
    }
    for (const auto& p : pieces_)
      for (const End* e : {&p.left, &p.right}) {
        const Singularity s{e->value, e->order.m};
        if (std::find(singular_.begin(), singular_.end(), s) == singular_.end()) singular_.push_back(s);
      }
    std::sort(singular_.begin(), singular_.end(),
              [](const Singularity& a, const Singularity& b) { return a.value < b.value || (a.value == b.value && a.order < b.order); });
  }

  [[nodiscard]] const F& map() const { return f_; }
  [[nodiscard]] const DensityModel& model() const { return model_; }
  [[nodiscard]] Interval domain() const { return domain_; }
  [[nodiscard]] const std::vector<Piece>& pieces() const { return pieces_; }
  /// Piece-end values with their local orders; includes the support ends.
  [[nodiscard]] const std::vector<Singularity>& singularities() const { return singular_; }
  [[nodiscard]] std::vector<double> critical_values() const {
    std::vector<double> v;
    for (const auto& s : singular_)
      if (s.order > 1) v.push_back(s.value);
    v.erase(std::unique(v.begin(), v.end()), v.end());
    return v;
  }
  [[nodiscard]] Interval value_range() const { return {singular_.front().value, singular_.back().value}; }
  [[nodiscard]] double total_mass() const { return model_.mass(domain_.lo, domain_.hi); }
  /// Source mass outside the (truncated) domain.
  [[nodiscard]] double tail_mass() const { return model_.total_mass() - total_mass(); }

  [[nodiscard]] double operator()(double t) const { return value_near(t, 0.0); }
  [[nodiscard]] double value(double t) const { return value_near(t, 0.0); }

  /// q(anchor + offset). When anchor is exactly a stored piece-end value the
  /// distance to that end is taken to be offset itself.
  [[nodiscard]] double value_near(double anchor, double offset) const {
    double q = 0.0;
    for (const auto& p : pieces_) {
      const double da = anchor == p.left.value ? offset : (anchor - p.left.value) + offset;
      const double db = anchor == p.right.value ? offset : (anchor - p.right.value) + offset;
      const bool inc = p.shape.direction == Direction::increasing;
      const bool inside = inc ? (da >= 0.0 && db <= 0.0) : (da <= 0.0 && db >= 0.0);
      if (!inside) continue;
      double w = 1.0;
      if ((da == 0.0 && p.left.shared) || (db == 0.0 && p.right.shared)) w = 0.5;
      const bool use_left = std::abs(da) <= std::abs(db);
      const End& e = use_left ? p.left : p.right;
      const double d = use_left ? da : db;
      const double y = detail::solve_local(e.map, d, p.shape.length(), e.order.m, e.order.K);
      const double slope = std::abs(e.map.slope(y));
      if (slope == 0.0) return std::numeric_limits<double>::infinity();
      const double x = std::clamp(e.x + e.dir * y, p.shape.a, p.shape.b);
      q += w * model_.density(x) / slope;
    }
    return q;
  }

  /// Solutions of f(x) = t inside the domain, sorted, shared piece ends reported once.
  [[nodiscard]] std::vector<double> preimages(double t) const {
    std::vector<double> xs;
    for (const auto& p : pieces_) {
      const double da = t - p.left.value, db = t - p.right.value;
      const bool inc = p.shape.direction == Direction::increasing;
      if (!(inc ? (da >= 0.0 && db <= 0.0) : (da <= 0.0 && db >= 0.0))) continue;
      const bool use_left = std::abs(da) <= std::abs(db);
      const End& e = use_left ? p.left : p.right;
      const double y = detail::solve_local(e.map, use_left ? da : db, p.shape.length(), e.order.m, e.order.K);
      xs.push_back(std::clamp(e.x + e.dir * y, p.shape.a, p.shape.b));
    }
    std::sort(xs.begin(), xs.end());
    return detail::merge_close(std::move(xs), 1e-12 * std::max(1.0, domain_.length()));
  }

  /// Mass of {x in domain : f(x) <= t}; exact given the preimages.
  [[nodiscard]] double cdf(double t) const {
    double acc = 0.0;
    for (const auto& p : pieces_) {
      const double vmin = std::min(p.left.value, p.right.value), vmax = std::max(p.left.value, p.right.value);
      if (t >= vmax) {
        acc += p.mass;
        continue;
      }
      if (t <= vmin) continue;
      const double da = t - p.left.value, db = t - p.right.value;
      const bool use_left = std::abs(da) <= std::abs(db);
      const End& e = use_left ? p.left : p.right;
      const double y = detail::solve_local(e.map, use_left ? da : db, p.shape.length(), e.order.m, e.order.K);
      const double x = std::clamp(e.x + e.dir * y, p.shape.a, p.shape.b);
      acc += p.shape.direction == Direction::increasing ? model_.mass(p.shape.a, x) : model_.mass(x, p.shape.b);
    }
    return acc;
  }

  /// This density as a value-space term, translated by shift and scaled by weight.
  [[nodiscard]] DensityTerm as_term(double shift = 0.0, double weight = 1.0) const {
    auto self = std::make_shared<const PushforwardDensity>(*this);
    return {[self](double a, double o) { return self->value_near(a, o); }, singular_, shift, weight};
  }

 private:
  End make_end(double x, int dir, bool shared) const {
    End e;
    e.x = x;
    e.value = f_(x);
    e.dir = dir;
    e.shared = shared;
    e.order = local_order(f_, x, dir > 0 ? Side::right : Side::left);
    e.map = LocalMap<F>(f_, x, dir, e.order.m);
    return e;
  }

  F f_;
  DensityModel model_;
  Interval domain_;
  std::vector<Piece> pieces_;
  std::vector<Singularity> singular_;
};

/// Preimages of t on the given pieces (one per piece whose value range holds t).
template <UnivariateMap F>
std::vector<double> preimages(const F& f, const std::vector<MonotonePiece>& pieces, double t) {
  std::vector<double> xs;
  double span = 1.0;
  for (const auto& p : pieces) {
    if (!p.finite()) throw input_error("preimages: pieces must be finite");
    span = std::max(span, std::max(std::abs(p.a), std::abs(p.b)));
    const double fa = f(p.a), fb = f(p.b);
    if (t < std::min(fa, fb) || t > std::max(fa, fb)) continue;
    double lo = p.a, hi = p.b;
    const bool inc = fb > fa;
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (mid <= lo || mid >= hi) break;
      if ((f(mid) < t) == inc) lo = mid;
      else hi = mid;
    }
    double x = 0.5 * (lo + hi);
    for (int it = 0; it < 3; ++it) {
      const double d = derivative_at(f, 1, x);
      if (d == 0.0) break;
      const double next = x - (f(x) - t) / d;
      if (!(next >= p.a && next <= p.b) || std::abs(f(next) - t) > std::abs(f(x) - t)) break;
      x = next;
    }
    xs.push_back(x);
  }
  std::sort(xs.begin(), xs.end());
  return detail::merge_close(std::move(xs), 1e-12 * span);
}

/// q(t) for the image of model under f. Throws singular_point_error when t is a
/// critical value (the density is infinite there).
template <UnivariateMap F>
double pushforward_density(const F& f, const DensityModel& model, double t) {
  const PushforwardDensity<F> q(f, model);
  for (const auto& s : q.singularities())
    if (s.order > 1 && std::abs(t - s.value) <= 4.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(s.value)))
      throw singular_point_error("pushforward density is infinite at the critical value t = " + detail::format_real(t));
  return q.value(t);
}

}  // namespace tvkit
