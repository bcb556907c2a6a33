#pragma once

// One-dimensional reference densities with explicit sup bound A and Lipschitz
// constant L.

#include <tvkit/errors.hpp>
#include <tvkit/interval.hpp>
#include <tvkit/polynomial.hpp>
#include <tvkit/special.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <string>
#include <string_view>
#include <utility>

namespace tvkit {

enum class DensityKind { standard_gaussian, gaussian, lebesgue, restricted };

class DensityModel {
 public:
  /// Gaussian densities are treated as supported on mean +- kTruncation * sigma
  /// wherever a finite domain is needed.
  static constexpr double kTruncation = 8.0;

  static DensityModel standard_gaussian() {
    DensityModel m;
    m.kind_ = DensityKind::standard_gaussian;
    return m;
  }
  static DensityModel gaussian(double mean, double sigma) {
    if (!(sigma > 0.0) || !std::isfinite(sigma) || !std::isfinite(mean))
      throw input_error("gaussian density needs finite mean and sigma > 0");
    DensityModel m;
    m.kind_ = (mean == 0.0 && sigma == 1.0) ? DensityKind::standard_gaussian : DensityKind::gaussian;
    m.mean_ = mean;
    m.sigma_ = sigma;
    return m;
  }
  static DensityModel lebesgue_on(double a, double b) {
    if (!(a < b) || !std::isfinite(a) || !std::isfinite(b)) throw input_error("lebesgue density needs finite a < b");
    DensityModel m;
    m.kind_ = DensityKind::lebesgue;
    m.support_ = {a, b};
    return m;
  }
  /// Restriction of base to [a, b]; total mass is not renormalised.
  static DensityModel restricted(const DensityModel& base, double a, double b) {
    if (!(a < b)) throw input_error("restricted density needs a < b");
    DensityModel m;
    m.kind_ = DensityKind::restricted;
    m.base_ = std::make_shared<const DensityModel>(base);
    m.support_ = {std::max(a, base.support().lo), std::min(b, base.support().hi)};
    if (!(m.support_.lo < m.support_.hi)) throw input_error("restricted density has empty support");
    return m;
  }

  [[nodiscard]] DensityKind kind() const { return kind_; }
  [[nodiscard]] Interval support() const { return support_; }
  [[nodiscard]] const DensityModel& base() const { return kind_ == DensityKind::restricted ? *base_ : *this; }
  /// The underlying unrestricted model (follows nested restrictions).
  [[nodiscard]] const DensityModel& root() const {
    const DensityModel* m = this;
    while (m->kind_ == DensityKind::restricted) m = m->base_.get();
    return *m;
  }
  [[nodiscard]] bool is_gaussian() const { return root().kind_ == DensityKind::standard_gaussian || root().kind_ == DensityKind::gaussian; }
  [[nodiscard]] double mean() const { return root().mean_; }
  [[nodiscard]] double sigma() const { return root().sigma_; }

  [[nodiscard]] double density(double x) const {
    if (!support_.contains(x)) return 0.0;
    switch (kind_) {
      case DensityKind::standard_gaussian:
      case DensityKind::gaussian: return normal_pdf((x - mean_) / sigma_) / sigma_;
      case DensityKind::lebesgue: return 1.0;
      case DensityKind::restricted: return base_->density(x);
    }
    return 0.0;
  }
  [[nodiscard]] double operator()(double x) const { return density(x); }

  /// Mass of [lo, hi].
  [[nodiscard]] double mass(double lo, double hi) const {
    lo = std::max(lo, support_.lo);
    hi = std::min(hi, support_.hi);
    if (!(lo < hi)) return 0.0;
    switch (kind_) {
      case DensityKind::standard_gaussian:
      case DensityKind::gaussian: return normal_mass((lo - mean_) / sigma_, (hi - mean_) / sigma_);
      case DensityKind::lebesgue: return hi - lo;
      case DensityKind::restricted: return base_->mass(lo, hi);
    }
    return 0.0;
  }
  [[nodiscard]] double total_mass() const { return mass(support_.lo, support_.hi); }

  /// Finite interval carrying all but tail_mass() of the measure.
  [[nodiscard]] Interval effective_support() const {
    Interval s = support_;
    if (is_gaussian()) {
      s.lo = std::max(s.lo, mean() - kTruncation * sigma());
      s.hi = std::min(s.hi, mean() + kTruncation * sigma());
    }
    return s;
  }
  [[nodiscard]] double tail_mass() const {
    const Interval e = effective_support();
    return mass(support_.lo, e.lo) + mass(e.hi, support_.hi);
  }

  /// A = sup p.
  [[nodiscard]] double sup_bound() const { return sup_bound_on(support_.lo, support_.hi); }
  /// L = sup |p'| over the interior of the support.
  [[nodiscard]] double lipschitz() const { return lipschitz_on(support_.lo, support_.hi); }

  [[nodiscard]] double sup_bound_on(double lo, double hi) const {
    lo = std::max(lo, support_.lo);
    hi = std::min(hi, support_.hi);
    if (!(lo <= hi)) return 0.0;
    if (kind_ == DensityKind::lebesgue) return 1.0;
    if (kind_ == DensityKind::restricted) return base_->sup_bound_on(lo, hi);
    return normal_pdf((std::clamp(mean_, lo, hi) - mean_) / sigma_) / sigma_;
  }

  [[nodiscard]] double lipschitz_on(double lo, double hi) const {
    lo = std::max(lo, support_.lo);
    hi = std::min(hi, support_.hi);
    if (!(lo <= hi)) return 0.0;
    if (kind_ == DensityKind::lebesgue) return 0.0;
    if (kind_ == DensityKind::restricted) return base_->lipschitz_on(lo, hi);
    // |p'(x)| = |z| phi(z) / sigma^2 peaks at |z| = 1.
    const double zlo = (lo - mean_) / sigma_, zhi = (hi - mean_) / sigma_;
    auto g = [](double z) { return std::isfinite(z) ? std::abs(z) * normal_pdf(z) : 0.0; };
    double best = std::max(g(zlo), g(zhi));
    if (zlo <= -1.0 && -1.0 <= zhi) best = std::max(best, g(-1.0));
    if (zlo <= 1.0 && 1.0 <= zhi) best = std::max(best, g(1.0));
    return best / (sigma_ * sigma_);
  }

  [[nodiscard]] std::string describe() const {
    switch (kind_) {
      case DensityKind::standard_gaussian: return "gauss";
      case DensityKind::gaussian: return "gauss:" + detail::format_real(mean_) + "," + detail::format_real(sigma_);
      case DensityKind::lebesgue:
        return "lebesgue:" + detail::format_real(support_.lo) + "," + detail::format_real(support_.hi);
      case DensityKind::restricted:
        return "restrict:" + detail::format_real(support_.lo) + "," + detail::format_real(support_.hi) + ":" +
               base_->describe();
    }
    return {};
  }

 private:
  DensityKind kind_ = DensityKind::standard_gaussian;
  double mean_ = 0.0;
  double sigma_ = 1.0;
  Interval support_{};
  std::shared_ptr<const DensityModel> base_;
};

inline double density(const DensityModel& model, double x) { return model.density(x); }

/// "gauss", "gauss:mean,sigma", "lebesgue:a,b", "restrict:a,b:<base>".
inline DensityModel parse_density(std::string_view text) {
  const std::string s = detail::normalize_minus(text);
  const std::string_view v = detail::strip(s);
  const std::size_t colon = v.find(':');
  const std::string_view head = v.substr(0, colon);
  const std::string_view rest = colon == std::string_view::npos ? std::string_view{} : v.substr(colon + 1);
  auto two = [&](std::string_view list) {
    const auto xs = detail::parse_real_list(list);
    if (xs.size() != 2) throw input_error("density parameters '" + std::string(list) + "' must be two numbers");
    return std::pair{xs[0], xs[1]};
  };
  if (head == "gauss") {
    if (colon == std::string_view::npos) return DensityModel::standard_gaussian();
    const auto [m, sd] = two(rest);
    return DensityModel::gaussian(m, sd);
  }
  if (head == "lebesgue") {
    const auto [a, b] = two(rest);
    return DensityModel::lebesgue_on(a, b);
  }
  if (head == "restrict") {
    const std::size_t c2 = rest.find(':');
    if (c2 == std::string_view::npos) throw input_error("restrict density needs 'restrict:a,b:<base>'");
    const auto [a, b] = two(rest.substr(0, c2));
    return DensityModel::restricted(parse_density(rest.substr(c2 + 1)), a, b);
  }
  throw input_error("unknown density '" + std::string(v) + "'");
}

}  // namespace tvkit
