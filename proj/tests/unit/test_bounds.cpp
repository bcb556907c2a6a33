#include <catch_amalgamated.hpp>

#include <tvkit/bounds.hpp>

#include <cmath>
#include <numbers>
#include <random>

using namespace tvkit;
using Catch::Approx;

namespace {
const auto gauss = DensityModel::standard_gaussian();
using PF = PushforwardDensity<Polynomial>;

// E over X ~ N(0,1) of 2(2 Phi(|h(X)|/(2 sigma)) - 1), plain MC with the standard library.
std::pair<double, double> delta3_mc(const Polynomial& h, double sigma, int n, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> N(0, 1);
  double s = 0, s2 = 0;
  for (int i = 0; i < n; ++i) {
    const double v = 2 * (2 * normal_cdf(std::abs(h(N(rng))) / (2 * sigma)) - 1);
    s += v;
    s2 += v * v;
  }
  const double mean = s / n;
  return {mean, std::sqrt((s2 / n - mean * mean) / n)};
}

// Largest eigenvalue of a symmetric matrix by power iteration.
double top_eigenvalue(const std::vector<std::vector<double>>& M) {
  const std::size_t d = M.size();
  std::vector<double> v(d, 1.0), w(d);
  double lam = 0;
  for (int it = 0; it < 2000; ++it) {
    double norm = 0;
    for (std::size_t i = 0; i < d; ++i) {
      w[i] = 0;
      for (std::size_t j = 0; j < d; ++j) w[i] += M[i][j] * v[j];
      norm += w[i] * w[i];
    }
    norm = std::sqrt(norm);
    for (std::size_t i = 0; i < d; ++i) v[i] = w[i] / norm;
    lam = norm;
  }
  return lam;
}
}  // namespace

TEST_CASE("gaussian absolute moments", "[bounds]") {
  CHECK(std::abs(gaussian_abs_moment(1) - std::sqrt(2 / std::numbers::pi)) <= 1e-12);
  CHECK(std::abs(gaussian_abs_moment(2) - 1.0) <= 1e-12);
  CHECK(gaussian_abs_moment(0.5) == Approx(0.822179).margin(1e-6));
  CHECK(gaussian_abs_moment(4) == Approx(3.0).margin(1e-12));
  CHECK_THROWS_AS(gaussian_abs_moment(0), input_error);
}

TEST_CASE("smoothing bound calculator", "[bounds]") {
  const auto r = theorem1_bound(1, 1, 1, 0.01);
  CHECK(r.sigma_opt == Approx(0.141421).margin(1e-6));
  CHECK(r.constant_C == Approx(2.900838).margin(1e-6));
  CHECK(r.raw_bound == Approx(0.290084).margin(1e-6));
  CHECK(r.clamped_bound == r.raw_bound);
  CHECK(r.min_sum_bound <= r.raw_bound + 1e-12);
  CHECK(r.delta1_bound + r.delta2_bound + r.delta3_bound >= r.min_sum_bound - 1e-12);
  CHECK(r.delta3_bound == Approx(2 / (r.sigma_opt * std::sqrt(2 * std::numbers::pi)) * 0.01).margin(1e-12));

  const auto z = theorem1_bound(1, 1, 1, 0);
  CHECK(z.raw_bound == 0.0);
  CHECK(z.clamped_bound == 0.0);
  CHECK(z.degenerate);

  const auto big = theorem1_bound(10, 10, 1, 1);
  CHECK(big.raw_bound > 2);
  CHECK(big.clamped_bound == 2.0);

  CHECK_THROWS_AS(theorem1_bound(1, 1, 0, 0.1), input_error);
  CHECK_THROWS_AS(theorem1_bound(-1, 1, 1, 0.1), input_error);
  CHECK_THROWS_AS(theorem1_bound(1, 1, 1, -0.1), input_error);
}

TEST_CASE("delta3 exact", "[bounds]") {
  const Polynomial f({0, 0, 1});
  CHECK(delta3_exact(f, f, gauss, 0.3) == 0.0);
  for (double c : {0.01, 0.5, 3.0}) {
    const double s = 0.4;
    CHECK(delta3_exact(f, f + Polynomial({c}), gauss, s) == Approx(2 * (2 * normal_cdf(c / (2 * s)) - 1)).margin(1e-10));
  }
  const Polynomial g({0, 0.1, 1});
  const double v = delta3_exact(f, g, gauss, 0.2);
  CHECK(v <= 0.318310);
  const auto [mc, se] = delta3_mc(f - g, 0.2, 1000000, 11);
  CHECK(std::abs(v - mc) <= 4 * se);
  CHECK_THROWS_AS(delta3_exact(f, g, gauss, 0), input_error);

  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> U(-1, 1);
  for (int i = 0; i < 50; ++i) {
    const Polynomial a({U(rng), U(rng), U(rng), U(rng)});
    const Polynomial b = a + Polynomial({0.1 * U(rng), 0.1 * U(rng), 0.1 * U(rng)});
    const double s = 0.05 + std::abs(U(rng));
    const double l1 = l1_distance(a, b, gauss);
    CHECK(delta3_exact(a, b, gauss, s) <= 2 / (s * std::sqrt(2 * std::numbers::pi)) * l1 + 1e-9);
  }
}

TEST_CASE("smoothing distance against the gaussian closed form", "[bounds]") {
  const PF q(Polynomial({0, 1}), gauss);
  for (double sigma : {0.05, 0.3, 1.0}) {
    const double s = std::sqrt(1 + sigma * sigma);
    const double x0 = std::sqrt(2 * s * s * std::log(s) / (s * s - 1));
    const double exact = 4 * (normal_cdf(x0) - normal_cdf(x0 / s));
    CHECK(smoothing_distance(q, sigma).value == Approx(exact).margin(1e-8));
  }
  CHECK_THROWS_AS(smoothing_distance(q, 0.0), input_error);
}

TEST_CASE("grad star norm", "[bounds]") {
  CHECK(grad_star_norm(MultiPoly(1, {{1.0, {1}}})) == Approx(1).margin(1e-10));
  CHECK(grad_star_norm(MultiPoly(2, {{1.0, {1, 0}}})) == Approx(1).margin(1e-10));
  CHECK(grad_star_norm(MultiPoly(2, {{0.5, {2, 0}}, {0.5, {0, 2}}})) == Approx(1).margin(1e-10));
  CHECK(grad_star_norm(MultiPoly(2, {{1.0, {2, 0}}})) == Approx(2).margin(1e-4));
  CHECK(grad_star_norm(MultiPoly(3, {{1.0, {2, 0, 0}}})) == Approx(2).margin(1e-3));

  // f = x1 x2 + x1 + 2 x2: grad = (x2 + 1, x1 + 2); E[grad grad^T] = [[2, 2], [2, 5]].
  const MultiPoly f(2, {{1.0, {1, 1}}, {1.0, {1, 0}}, {2.0, {0, 1}}});
  const double lam = top_eigenvalue({{2, 2}, {2, 5}});
  CHECK(lam == Approx(6).margin(1e-10));
  const double est = grad_star_norm(f);
  CHECK(est <= std::sqrt(lam) + 1e-10);
  CHECK(est == Approx(std::sqrt(lam)).margin(1e-4));

  CHECK_THROWS_AS(grad_star_norm(MultiPoly(2, {{1.0, {1, 0}}}), 10), input_error);
  CHECK_THROWS_AS(grad_star_norm(MultiPoly(7, {{1.0, {1, 0, 0, 0, 0, 0, 0}}})), unsupported_error);
}

TEST_CASE("vandermonde system", "[bounds]") {
  const auto one = vandermonde_system_check(1);
  CHECK(one.W == 1);
  CHECK(one.Delta == 1);
  const auto three = vandermonde_system_check(3);
  CHECK(three.W == 120);
  CHECK(three.Delta == 3110400);
  CHECK(three.agrees);
  for (int n = 1; n <= 8; ++n) {
    const auto c = vandermonde_system_check(n);
    CHECK(c.nonzero);
    CHECK(c.agrees);
  }
  CHECK(bareiss_determinant({{2, 1}, {1, 3}}) == 5);
  CHECK(bareiss_determinant({{0, 1}, {1, 0}}) == -1);
  CHECK_THROWS_AS(vandermonde_system_check(0), input_error);
  CHECK_THROWS_AS(vandermonde_system_check(13), unsupported_error);
}

TEST_CASE("trig modulus exponents", "[bounds]") {
  const auto grid = geometric_grid(1e-4, 1e-2, 12);
  const Interval w{1e-4, 1e-2};
  auto alpha = [&](const TrigPolynomial& f) { return fit_smoothness(trig_modulus_experiment(f, grid), w).alpha; };
  CHECK(alpha(TrigPolynomial({0, 1}, {})) == Approx(0.5).margin(0.05));
  CHECK(alpha(TrigPolynomial({0, 1, 0}, {0, 0, 0.5})) >= 0.2);
  // f' = -4 sin x (1 - cos x) vanishes to third order at 0.
  CHECK(alpha(TrigPolynomial({0, 4, -1}, {})) == Approx(0.25).margin(0.05));
  const auto zero = trig_modulus_experiment(TrigPolynomial({}, {0, 1}), {0.0});
  CHECK(zero.delta_values[0] == 0.0);
}

TEST_CASE("radial exponents", "[bounds]") {
  const auto grid = geometric_grid(1e-4, 1e-2, 12);
  const Interval w{1e-4, 1e-2};
  CHECK(fit_smoothness(radial_modulus_curve(1, 2, grid), w).alpha == Approx(0.5).margin(0.05));
  CHECK(fit_smoothness(radial_modulus_curve(3, 1, grid), w).alpha == Approx(1.0).margin(0.05));
  CHECK(fit_smoothness(radial_modulus_curve(2, 2, grid), w).alpha == Approx(1.0).margin(0.05));
  // d = 1, m = 2 is chi-square with one degree of freedom.
  const auto c = radial_modulus_curve(1, 2, {0.01});
  const PF q(Polynomial({0, 0, 1}), gauss);
  CHECK(c.delta_values[0] == Approx(shift_modulus_result(q, 0.01, 1e-10).value).margin(1e-7));
  CHECK_THROWS_AS(radial_modulus_curve(0, 2, grid), input_error);
}

TEST_CASE("multivariate rate points", "[bounds][mc]") {
  const MultiPoly f(2, {{1.0, {2, 0}}, {1.0, {0, 2}}});
  const auto same = theorem2_check(f, f, {.n_samples = 200000, .seed = 3});
  CHECK(same.l1 == 0.0);
  CHECK(same.excluded);

  std::vector<double> ls, ts;
  for (double delta : {0.4, 0.8, 1.6, 3.2}) {
    const auto p = theorem2_check(f, f + MultiPoly(2, {{delta, {1, 0}}}), {.n_samples = 1000000, .seed = 7});
    CHECK_FALSE(p.excluded);
    CHECK(p.l1 == Approx(delta * std::sqrt(2 / std::numbers::pi)).epsilon(0.02));
    ls.push_back(p.l1);
    ts.push_back(p.measured_tv.value);
  }
  CHECK(fit_power_law(ls, ts).slope >= 1.0 / 3 - 0.1);
  CHECK_THROWS_AS(theorem2_check(f, MultiPoly(2, {{1.0, {0, 0}}})), input_error);
}
