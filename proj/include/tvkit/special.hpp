#pragma once

#include <tvkit/errors.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

namespace tvkit {

inline double normal_pdf(double z) { return std::exp(-0.5 * z * z) / std::sqrt(2.0 * std::numbers::pi); }

/// Phi(z), accurate in the lower tail.
inline double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

/// 1 - Phi(z), accurate in the upper tail.
inline double normal_sf(double z) { return 0.5 * std::erfc(z / std::numbers::sqrt2); }

/// Phi(b) - Phi(a) without cancellation when both are in the same tail.
inline double normal_mass(double a, double b) {
  if (!(a < b)) return 0.0;
  if (a >= 0.0) return normal_sf(a) - normal_sf(b);
  if (b <= 0.0) return normal_cdf(b) - normal_cdf(a);
  return 1.0 - normal_cdf(a) - normal_sf(b);
}

/// E|nu|^alpha for nu ~ N(0, 1): 2^{alpha/2} Gamma((alpha+1)/2) / sqrt(pi).
inline double gaussian_abs_moment(double alpha) {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) throw input_error("gaussian_abs_moment: alpha must be > 0");
  return std::exp(0.5 * alpha * std::numbers::ln2 + std::lgamma(0.5 * (alpha + 1.0)) - 0.5 * std::log(std::numbers::pi));
}

inline long long lcm_capped(long long a, long long b, long long cap) {
  const long long l = std::lcm(a, b);
  return l > cap ? std::max(a, b) : l;
}

}  // namespace tvkit
