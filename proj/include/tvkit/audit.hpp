#pragma once

// Composite studies built from the calculators: the end-to-end smoothing
// chain for a polynomial pair, and TV-versus-perturbation rate tables.

#include <tvkit/besov.hpp>
#include <tvkit/bounds.hpp>
#include <tvkit/density_model.hpp>
#include <tvkit/errors.hpp>
#include <tvkit/polynomial.hpp>
#include <tvkit/tv.hpp>

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

namespace tvkit {

struct AuditOptions {
  double tol = 1e-9;
  double tail_tol = 1e-8;
  /// n_samples == 0 skips the Monte Carlo cross-check.
  MonteCarloOptions mc{.n_samples = 0};
  /// Supplied (C_f, C_g, alpha) replace certification; any model is then allowed.
  struct Constants {
    double C_f, C_g, alpha;
  };
  std::optional<Constants> constants;
};

/// measured TV <= delta1 + delta2 + delta3 (at sigma_opt) <= clamped bound.
struct Theorem1Audit {
  PartitionCertificate cert_f, cert_g;
  BoundReport bound;
  TVResult tv;
  TVResult delta1, delta2;
  double delta3 = 0.0;
  double diagnostic_sum = 0.0;
  /// sum of the quadrature error estimates that enter each link
  double link_tolerance = 0.0;
  bool tv_below_sum = true;
  bool sum_below_bound = true;
  std::optional<TVResult> mc;
  bool mc_agrees = true;

  [[nodiscard]] bool holds() const { return tv_below_sum && sum_below_bound && mc_agrees; }
};

/// Unless supplied, constants are certified for both maps (Gaussian model) and
/// combined with the smaller exponent; C_all_u keeps them valid for every shift size.
inline Theorem1Audit theorem1_audit(const Polynomial& f, const Polynomial& g, const DensityModel& model,
                                    const AuditOptions& opt = {}) {
  Theorem1Audit a;
  const double l1 = l1_distance(f, g, model);
  if (opt.constants) {
    a.bound = theorem1_bound(opt.constants->C_f, opt.constants->C_g, opt.constants->alpha, l1);
  } else {
    a.cert_f = certified_modulus_constant(f, model, opt.tail_tol);
    a.cert_g = certified_modulus_constant(g, model, opt.tail_tol);
    const double alpha = std::min(a.cert_f.alpha, a.cert_g.alpha);
    a.bound = theorem1_bound(a.cert_f.C_all_u(), a.cert_g.C_all_u(), alpha, l1);
  }
  const PushforwardDensity<Polynomial> qf(f, model), qg(g, model);
  a.tv = tv_quadrature(qf, qg, opt.tol);
  if (a.bound.degenerate) {
    a.delta1 = a.delta2 = {0.0, TVMethod::quadrature, 0.0};
  } else {
    const double sigma = a.bound.sigma_opt;
    a.delta1 = smoothing_distance(qf, sigma, opt.tol);
    a.delta2 = smoothing_distance(qg, sigma, opt.tol);
    a.delta3 = delta3_exact(f, g, model, sigma);
  }
  a.diagnostic_sum = a.delta1.value + a.delta2.value + a.delta3;
  a.link_tolerance = a.tv.error_estimate + a.delta1.error_estimate + a.delta2.error_estimate + 1e-12;
  a.tv_below_sum = a.tv.value <= a.diagnostic_sum + a.link_tolerance;
  a.sum_below_bound = a.diagnostic_sum <= a.bound.clamped_bound + a.link_tolerance;
  if (opt.mc.n_samples > 0) {
    a.mc = tv_monte_carlo(f, model, g, model, opt.mc);
    a.mc_agrees = std::abs(a.mc->value - a.tv.value) <= 3.0 * (a.mc->error_estimate + a.tv.error_estimate);
  }
  return a;
}

enum class Perturbation { all_coefficients, linear, constant };

inline std::string to_string(Perturbation p) {
  switch (p) {
    case Perturbation::all_coefficients: return "all_coefficients";
    case Perturbation::linear: return "linear";
    case Perturbation::constant: return "constant";
  }
  return "?";
}

/// x^m + delta (1 + x + ... + x^m), x^m + delta x, or x^m + delta.
inline Polynomial perturbed_power(int m, double delta, Perturbation p) {
  std::vector<double> c(static_cast<std::size_t>(m + 1), 0.0);
  c.back() = 1.0;
  switch (p) {
    case Perturbation::all_coefficients:
      for (auto& v : c) v += delta;
      break;
    case Perturbation::linear: c[1] += delta; break;
    case Perturbation::constant: c[0] += delta; break;
  }
  return Polynomial(c);
}

struct RateRow {
  double delta = 0.0;
  double l1 = 0.0;
  TVResult tv;
};

struct RateStudy {
  int m = 1;
  Perturbation perturbation = Perturbation::all_coefficients;
  std::vector<RateRow> rows;
  PowerFit fit_delta;  // log tv against log delta
  PowerFit fit_l1;     // log tv against log l1
  /// [1/(m+1) - 0.05, 1/m + 0.1]
  double lower = 0.0, upper = 0.0;
  [[nodiscard]] bool within() const { return fit_delta.slope >= lower && fit_delta.slope <= upper; }
};

inline RateStudy gauss_poly_rates(int m, const std::vector<double>& deltas, Perturbation p,
                                  const DensityModel& model = DensityModel::standard_gaussian(), double tol = kDefaultTol) {
  if (m < 1) throw input_error("rate study needs m >= 1");
  if (deltas.size() < 2) throw input_error("rate study needs at least two perturbation sizes");
  RateStudy s;
  s.m = m;
  s.perturbation = p;
  s.lower = 1.0 / (m + 1) - 0.05;
  s.upper = 1.0 / m + 0.1;
  const Polynomial f = perturbed_power(m, 0.0, p);
  const PushforwardDensity<Polynomial> qf(f, model);
  std::vector<double> ds, ls, ts;
  for (double delta : deltas) {
    if (!(delta > 0.0)) throw input_error("rate study needs positive perturbation sizes");
    const Polynomial g = perturbed_power(m, delta, p);
    RateRow r{delta, l1_distance(f, g, model), tv_quadrature(qf, PushforwardDensity<Polynomial>(g, model), tol)};
    s.rows.push_back(r);
    ds.push_back(r.delta);
    ls.push_back(r.l1);
    ts.push_back(r.tv.value);
  }
  s.fit_delta = fit_power_law(ds, ts);
  s.fit_l1 = fit_power_law(ls, ts);
  return s;
}

}  // namespace tvkit
