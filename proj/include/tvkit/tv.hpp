#pragma once

// Total variation ||mu - nu|| = int |m| (range [0, 2] for probability
// measures), shift moduli, L1 distances and a histogram Monte Carlo oracle.

#include <tvkit/density_model.hpp>
#include <tvkit/errors.hpp>
#include <tvkit/multipoly.hpp>
#include <tvkit/pushforward.hpp>
#include <tvkit/quadrature.hpp>
#include <tvkit/random.hpp>
#include <tvkit/roots.hpp>
#include <tvkit/special.hpp>
#include <tvkit/value_integral.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <thread>
#include <vector>

namespace tvkit {

enum class TVMethod { quadrature, exact_gaussian, monte_carlo };

inline std::string to_string(TVMethod m) {
  switch (m) {
    case TVMethod::quadrature: return "quadrature";
    case TVMethod::exact_gaussian: return "exact_gaussian";
    case TVMethod::monte_carlo: return "monte_carlo";
  }
  return {};
}

struct TVResult {
  double value = 0.0;
  TVMethod method = TVMethod::quadrature;
  double error_estimate = 0.0;
};

inline constexpr double kDefaultTol = 1e-10;

/// int |sum_j w_j q_j(t - shift_j)| dt.
inline TVResult tv_terms(const std::vector<DensityTerm>& terms, double tol = kDefaultTol) {
  const auto r = integrate_value_space(terms, [](double, double s) { return std::abs(s); }, {.abs_tol = tol});
  return {r.value, TVMethod::quadrature, r.error};
}

template <UnivariateMap F, UnivariateMap G>
TVResult tv_quadrature(const PushforwardDensity<F>& q1, const PushforwardDensity<G>& q2, double tol = kDefaultTol) {
  TVResult r = tv_terms({q1.as_term(0.0, 1.0), q2.as_term(0.0, -1.0)}, tol);
  r.error_estimate += q1.tail_mass() + q2.tail_mass();
  return r;
}

/// Exact TV between N(mu1, sigma^2) and N(mu2, sigma^2): 2(2 Phi(|mu1-mu2|/(2 sigma)) - 1).
inline double tv_gaussian_same_variance(double mu1, double mu2, double sigma) {
  if (!(sigma > 0.0)) throw input_error("tv_gaussian_same_variance: sigma must be > 0");
  const double z = std::abs(mu1 - mu2) / (2.0 * sigma);
  return 2.0 * std::erf(z / std::numbers::sqrt2);
}

/// delta(u) = || law of f(X) - law of f(X) + u ||, X ~ model.
template <UnivariateMap F>
TVResult shift_modulus_result(const PushforwardDensity<F>& q, double u, double tol = kDefaultTol) {
  if (!(u >= 0.0)) throw input_error("shift_modulus: u must be >= 0");
  if (u == 0.0) return {0.0, TVMethod::quadrature, 0.0};
  TVResult r = tv_terms({q.as_term(0.0, 1.0), q.as_term(u, -1.0)}, tol);
  r.error_estimate += 2.0 * q.tail_mass();
  return r;
}

template <UnivariateMap F>
double shift_modulus(const F& f, const DensityModel& model, double u, double tol = kDefaultTol) {
  return shift_modulus_result(PushforwardDensity<F>(f, model), u, tol).value;
}

inline Polynomial shift_argument(const Polynomial& f, double u) { return taylor_shift(f, -u); }

inline TrigPolynomial shift_argument(const TrigPolynomial& f, double u) {
  std::vector<double> a(f.cos_coeffs().size()), b(a.size());
  for (std::size_t k = 0; k < a.size(); ++k) {
    const double c = std::cos(static_cast<double>(k) * u), s = std::sin(static_cast<double>(k) * u);
    a[k] = f.cos_coeffs()[k] * c - f.sin_coeffs()[k] * s;
    b[k] = k == 0 ? 0.0 : f.cos_coeffs()[k] * s + f.sin_coeffs()[k] * c;
  }
  return {std::move(a), std::move(b)};
}

/// || P f^{-1} - P f_u^{-1} || with f_u(x) = f(x - u): the argument-shift reading.
template <UnivariateMap F>
double shift_modulus_argument(const F& f, const DensityModel& model, double u, double tol = kDefaultTol) {
  if (!(u >= 0.0)) throw input_error("shift_modulus_argument: u must be >= 0");
  if (u == 0.0) return 0.0;
  const PushforwardDensity<F> q1(f, model), q2(shift_argument(f, u), model);
  return tv_quadrature(q1, q2, tol).value;
}

struct ModulusCurve {
  std::vector<double> u_grid;
  std::vector<double> delta_values;
  std::vector<double> error_estimates;
  std::string map_description;
  std::string model_description;
  double mass = 1.0;
};

inline std::vector<double> geometric_grid(double lo, double hi, int points) {
  if (!(lo > 0.0) || !(hi >= lo) || points < 1) throw input_error("geometric grid needs 0 < lo <= hi and points >= 1");
  std::vector<double> g;
  for (int i = 0; i < points; ++i)
    g.push_back(points == 1 ? lo : lo * std::pow(hi / lo, static_cast<double>(i) / (points - 1)));
  g.back() = hi;
  return g;
}

template <UnivariateMap F>
ModulusCurve modulus_curve(const PushforwardDensity<F>& q, const std::vector<double>& u_grid, double tol = kDefaultTol) {
  ModulusCurve c;
  c.u_grid = u_grid;
  c.map_description = to_string(q.map());
  c.model_description = q.model().describe();
  c.mass = q.total_mass();
  for (double u : u_grid) {
    const auto r = shift_modulus_result(q, u, tol);
    c.delta_values.push_back(r.value);
    c.error_estimates.push_back(r.error_estimate);
  }
  return c;
}

template <UnivariateMap F>
ModulusCurve modulus_curve(const F& f, const DensityModel& model, const std::vector<double>& u_grid, double tol = kDefaultTol) {
  return modulus_curve(PushforwardDensity<F>(f, model), u_grid, tol);
}

/// int |f - g| dP, by adaptive quadrature between the zeros of f - g.
inline double l1_distance(const Polynomial& f, const Polynomial& g, const DensityModel& model) {
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
    acc += integrate_adaptive([&](double x) { return std::abs(h(x)) * model.density(x); }, cuts[i], cuts[i + 1], 1e-15, 1e-14)
               .value;
  return acc;
}

struct L1Result {
  double value = 0.0;
  double std_error = 0.0;
  std::string method;
};

namespace detail {

/// h with variables 0..d-2 fixed, as a polynomial in the last variable.
inline Polynomial last_variable_slice(const MultiPoly& h, std::span<const double> fixed) {
  const std::size_t last = static_cast<std::size_t>(h.dimension() - 1);
  std::vector<double> c;
  for (const auto& t : h.terms()) {
    double v = t.coeff;
    for (std::size_t i = 0; i < last; ++i)
      for (int e = 0; e < t.exponents[i]; ++e) v *= fixed[i];
    const auto k = static_cast<std::size_t>(t.exponents[last]);
    if (c.size() <= k) c.resize(k + 1, 0.0);
    c[k] += v;
  }
  return Polynomial(std::move(c));
}

inline double nested_abs_integral(const MultiPoly& h, std::vector<double>& x, std::size_t level, double tol) {
  static const DensityModel gauss = DensityModel::standard_gaussian();
  if (level + 1 == x.size()) return l1_distance(last_variable_slice(h, x), Polynomial{}, gauss);
  const double lim = DensityModel::kTruncation;
  return integrate_adaptive(
             [&](double v) {
               x[level] = v;
               return normal_pdf(v) * nested_abs_integral(h, x, level + 1, tol);
             },
             -lim, lim, tol, 1e-9, 300)
      .value;
}

}  // namespace detail

/// int |f - g| dN(0, I_d): iterated adaptive quadrature for d <= 3 (the innermost
/// variable split at the zeros of the slice), seeded Monte Carlo above.
inline L1Result l1_distance_detailed(const MultiPoly& f, const MultiPoly& g, std::uint64_t seed = 1,
                                     std::int64_t mc_samples = 1000000) {
  if (f.dimension() != g.dimension()) throw input_error("l1_distance: dimension mismatch");
  const MultiPoly h = f - g;
  const int d = h.dimension();
  if (h.terms().empty()) return {0.0, 0.0, "exact"};
  if (h.is_constant()) return {std::abs(h.terms().front().coeff), 0.0, "exact"};
  if (d <= 3) {
    std::vector<double> x(static_cast<std::size_t>(d), 0.0);
    return {detail::nested_abs_integral(h, x, 0, 1e-10), 0.0, "quadrature"};
  }
  CounterRng rng(CounterRng::derive(seed, 0x11));
  std::vector<double> x(static_cast<std::size_t>(d));
  double s = 0.0, s2 = 0.0;
  for (std::int64_t i = 0; i < mc_samples; ++i) {
    for (auto& v : x) v = rng.normal();
    const double a = std::abs(h(x));
    s += a;
    s2 += a * a;
  }
  const double mean = s / static_cast<double>(mc_samples);
  const double var = std::max(0.0, s2 / static_cast<double>(mc_samples) - mean * mean);
  return {mean, std::sqrt(var / static_cast<double>(mc_samples)), "monte_carlo"};
}

inline double l1_distance(const MultiPoly& f, const MultiPoly& g, std::uint64_t seed = 1) {
  return l1_distance_detailed(f, g, seed).value;
}

// ---------------------------------------------------------------------------
// Histogram Monte Carlo

/// Draws one value; sample i is generated after rng.seek(i * kDrawsPerSample).
using Sampler = std::function<double(CounterRng&)>;
inline constexpr std::uint64_t kDrawsPerSample = 64;
inline constexpr std::int64_t kBatchSize = 65536;

inline int default_bins(std::int64_t n) {
  return static_cast<int>(std::min<double>(4096.0, std::ceil(std::cbrt(static_cast<double>(n)) - 1e-9)));
}

namespace detail {

struct Histogram {
  std::vector<std::int64_t> counts;
  std::int64_t below = 0, above = 0;
};

/// Bin i covers [edges[i], edges[i+1]); edges.front() = range.lo, edges.back() = range.hi.
inline Histogram histogram(const Sampler& sampler, std::uint64_t key, std::int64_t n, const std::vector<double>& edges,
                           unsigned threads) {
  const std::int64_t batches = (n + kBatchSize - 1) / kBatchSize;
  const std::size_t bins = edges.size() - 1;
  std::vector<Histogram> parts(static_cast<std::size_t>(batches));
  auto run_batch = [&](std::int64_t b) {
    Histogram h;
    h.counts.assign(bins, 0);
    CounterRng rng(key);
    const std::int64_t end = std::min(n, (b + 1) * kBatchSize);
    for (std::int64_t i = b * kBatchSize; i < end; ++i) {
      rng.seek(static_cast<std::uint64_t>(i) * kDrawsPerSample);
      const double v = sampler(rng);
      if (!(v >= edges.front())) ++h.below;
      else if (!(v < edges.back())) ++h.above;
      else ++h.counts[static_cast<std::size_t>(std::upper_bound(edges.begin(), edges.end(), v) - edges.begin()) - 1];
    }
    parts[static_cast<std::size_t>(b)] = std::move(h);
  };
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(batches)));
  if (threads == 1) {
    for (std::int64_t b = 0; b < batches; ++b) run_batch(b);
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t)
      pool.emplace_back([&, t] {
        for (std::int64_t b = t; b < batches; b += threads) run_batch(b);
      });
    for (auto& th : pool) th.join();
  }
  Histogram total;
  total.counts.assign(bins, 0);
  for (const auto& h : parts) {
    for (std::size_t k = 0; k < bins; ++k) total.counts[k] += h.counts[k];
    total.below += h.below;
    total.above += h.above;
  }
  return total;
}

inline double binned_tv(const std::vector<std::int64_t>& a, const std::vector<std::int64_t>& b, std::size_t merge, double n) {
  double acc = 0.0;
  for (std::size_t k = 0; k < a.size(); k += merge) {
    std::int64_t ca = 0, cb = 0;
    for (std::size_t j = k; j < std::min(a.size(), k + merge); ++j) {
      ca += a[j];
      cb += b[j];
    }
    acc += static_cast<double>(std::abs(ca - cb));
  }
  return acc / n;
}

}  // namespace detail

enum class BinLayout { uniform, quantile };

struct MonteCarloOptions {
  std::int64_t n_samples = 1000000;
  int n_bins = 0;  // 0: default_bins(n_samples)
  std::uint64_t seed = 1;
  unsigned threads = 0;  // 0: hardware concurrency; the result does not depend on it
  BinLayout layout = BinLayout::quantile;
};

/// Bin edges over range: equal width, or at quantiles of a pooled pilot sample
/// from both samplers (drawn from streams disjoint from the main ones).
inline std::vector<double> histogram_edges(const Sampler& a, const Sampler& b, Interval range, int bins,
                                           const MonteCarloOptions& opt) {
  std::vector<double> edges{range.lo};
  if (opt.layout == BinLayout::uniform) {
    for (int k = 1; k < bins; ++k) edges.push_back(range.lo + range.length() * k / bins);
  } else {
    const std::int64_t pilot = std::min<std::int64_t>(opt.n_samples, std::max<std::int64_t>(100000, 50LL * bins));
    std::vector<double> pool;
    pool.reserve(static_cast<std::size_t>(2 * pilot));
    for (int s = 0; s < 2; ++s) {
      CounterRng rng(CounterRng::derive(opt.seed, 0xb1a5 + static_cast<std::uint64_t>(s)));
      for (std::int64_t i = 0; i < pilot; ++i) {
        rng.seek(static_cast<std::uint64_t>(i) * kDrawsPerSample);
        const double v = (s == 0 ? a : b)(rng);
        if (v > range.lo && v < range.hi) pool.push_back(v);
      }
    }
    std::sort(pool.begin(), pool.end());
    for (int k = 1; k < bins && !pool.empty(); ++k) {
      const double e = pool[static_cast<std::size_t>(static_cast<double>(pool.size()) * k / bins)];
      if (e > edges.back()) edges.push_back(e);
    }
  }
  if (range.hi > edges.back()) edges.push_back(range.hi);
  return edges;
}

/// Histogram estimate of || law(a) - law(b) || from n draws of each sampler.
/// error_estimate = |TV_B - TV_{B/2}| / (sqrt(2) - 1) + sum_k sqrt(c_a + c_b) / n
///                  + 3 / sqrt(n) + out-of-range mass.
/// The first term extrapolates the binning bias assuming it decays at least
/// like B^{-1/2}.
inline TVResult tv_histogram_mc(const Sampler& a, const Sampler& b, Interval range, const MonteCarloOptions& opt = {}) {
  if (opt.n_samples < 10000) throw input_error("tv_histogram_mc: need at least 1e4 samples");
  if (!(range.lo < range.hi) || !std::isfinite(range.lo) || !std::isfinite(range.hi))
    throw input_error("tv_histogram_mc: empty or infinite range");
  int bins = opt.n_bins > 0 ? opt.n_bins : default_bins(opt.n_samples);
  bins = std::max(2, bins + bins % 2);
  const auto edges = histogram_edges(a, b, range, bins, opt);
  const unsigned threads = opt.threads ? opt.threads : std::max(1u, std::thread::hardware_concurrency());
  const auto ha = detail::histogram(a, CounterRng::derive(opt.seed, 0), opt.n_samples, edges, threads);
  const auto hb = detail::histogram(b, CounterRng::derive(opt.seed, 1), opt.n_samples, edges, threads);
  const double n = static_cast<double>(opt.n_samples);
  const double tv = detail::binned_tv(ha.counts, hb.counts, 1, n);
  const double tv_coarse = detail::binned_tv(ha.counts, hb.counts, 2, n);
  double noise = 0.0;
  for (std::size_t k = 0; k < ha.counts.size(); ++k) noise += std::sqrt(static_cast<double>(ha.counts[k] + hb.counts[k]));
  const double out_diff = static_cast<double>(std::abs(ha.below - hb.below) + std::abs(ha.above - hb.above)) / n;
  const double out_mass = static_cast<double>(ha.below + hb.below + ha.above + hb.above) / n;
  TVResult r;
  r.method = TVMethod::monte_carlo;
  r.value = tv + out_diff;
  r.error_estimate = std::abs(tv - tv_coarse) / (std::numbers::sqrt2 - 1.0) + noise / n + 3.0 / std::sqrt(n) + out_mass;
  return r;
}

/// Sampler for f(X) + shift with X drawn from the normalised model.
template <class F>
Sampler pushforward_sampler(F f, DensityModel model, double shift = 0.0) {
  return [f = std::move(f), model = std::move(model), shift](CounterRng& rng) { return f(sample(model, rng)) + shift; };
}

/// Range covering both samplers: pilot draws, widened by 10% on each side.
inline Interval auto_range(const Sampler& a, const Sampler& b, std::uint64_t seed, std::int64_t pilot = 20000) {
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (int s = 0; s < 2; ++s) {
    CounterRng rng(CounterRng::derive(seed, 0x5eed + static_cast<std::uint64_t>(s)));
    for (std::int64_t i = 0; i < pilot; ++i) {
      rng.seek(static_cast<std::uint64_t>(i) * kDrawsPerSample);
      const double v = (s == 0 ? a : b)(rng);
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  }
  const double pad = 0.1 * std::max(hi - lo, 1e-12);
  return {lo - pad, hi + pad};
}

/// Histogram estimate on the same scale as tv_quadrature: the samplers draw
/// from the normalised models, so the estimate is multiplied by the common
/// model mass (restricted models are not renormalised).
template <class F, class G>
TVResult tv_monte_carlo(const F& f, const DensityModel& mf, const G& g, const DensityModel& mg,
                        const MonteCarloOptions& opt = {}) {
  const double mass = mf.total_mass();
  if (std::abs(mass - mg.total_mass()) > 1e-12 * std::max(1.0, mass))
    throw unsupported_error("tv_monte_carlo: models with different total mass");
  const Sampler a = pushforward_sampler(f, mf), b = pushforward_sampler(g, mg);
  TVResult r = tv_histogram_mc(a, b, auto_range(a, b, opt.seed), opt);
  r.value *= mass;
  r.error_estimate *= mass;
  return r;
}

}  // namespace tvkit
