#include <catch_amalgamated.hpp>

#include <tvkit/besov.hpp>

#include <cmath>
#include <numbers>
#include <random>

using namespace tvkit;
using Catch::Approx;

namespace {
const auto gauss = DensityModel::standard_gaussian();
const auto unit = DensityModel::lebesgue_on(0, 1);

Polynomial monomial(int m) {
  std::vector<double> c(static_cast<std::size_t>(m) + 1, 0.0);
  c.back() = 1.0;
  return Polynomial(c);
}

MonotonePiece only_piece(const Polynomial& f, double a, double b) {
  const auto pieces = monotone_convex_decomposition(f, a, b);
  REQUIRE(pieces.size() == 1);
  return pieces.front();
}
}  // namespace

TEST_CASE("piece constant examples", "[besov]") {
  CHECK(prop1_constant(monomial(2), only_piece(monomial(2), 0, 1)) == Approx(1.0).epsilon(1e-9));
  CHECK(prop1_constant(monomial(1), only_piece(monomial(1), 0, 1)) == Approx(1.0).epsilon(1e-12));
  CHECK(prop1_constant(Polynomial({0, 2, 1}), only_piece(Polynomial({0, 2, 1}), 0, 1)) == Approx(0.5).epsilon(1e-9));
  // Mirror: x^2 on [-1, 0] is decreasing and convex with the flat end on the right.
  CHECK(prop1_constant(monomial(2), only_piece(monomial(2), -1, 0)) == Approx(1.0).epsilon(1e-9));
  // Concave increasing: sqrt-like growth from a non-flat start, flat end on the right.
  const Polynomial g({0, 2, -1});
  const auto p = only_piece(g, 0, 1);
  CHECK_FALSE(p.flat_at_left);
  CHECK(prop1_constant(g, p) == Approx(1.0).epsilon(1e-9));
  MonotonePiece bad = only_piece(monomial(2), 0, 1);
  bad.a = -1;
  CHECK_THROWS_AS(prop1_constant(monomial(2), bad), input_error);
}

TEST_CASE("exact modulus and piece constant for x^m on [0,1]", "[besov][property]") {
  for (int m = 1; m <= 5; ++m) {
    const Polynomial f = monomial(m);
    const double C = prop1_constant(f, only_piece(f, 0, 1));
    for (double u : geometric_grid(1e-6, 0.9, 20)) {
      const double d = shift_modulus(f, unit, u);
      CHECK(d == Approx(2 * std::pow(u, 1.0 / m)).margin(1e-8));
      CHECK(d <= 2 * C * std::pow(u, 1.0 / m) + 1e-8);
    }
  }
}

TEST_CASE("piece bound examples", "[besov]") {
  const auto r = DensityModel::restricted(gauss, 0, 1);
  const auto p = only_piece(monomial(2), 0, 1);
  CHECK(prop2_bound(monomial(2), r, p, 0.01) == Approx(0.143880).margin(1e-6));
  CHECK(prop2_bound(monomial(2), r, p, 0.0) == 0.0);
  CHECK_THROWS_AS(prop2_bound(monomial(2), r, p, -0.1), input_error);
  CHECK(prop2_bound(monomial(2), unit, p, 0.04) == Approx(0.6).epsilon(1e-9));
  CHECK(shift_modulus(monomial(2), unit, 0.04) == Approx(0.4).margin(1e-9));
}

TEST_CASE("piece bound dominance on random pieces", "[besov][property]") {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> U(-1, 1);
  int cases = 0;
  while (cases < 20) {
    const Polynomial f({U(rng), U(rng), U(rng), 0.6 * U(rng)});
    const auto pieces = monotone_convex_decomposition(f, -2.5, 2.5);
    const auto& p = pieces[rng() % pieces.size()];
    if (p.length() < 0.05) continue;
    const auto model = cases % 2 ? DensityModel::restricted(DensityModel::gaussian(U(rng), 0.5 + std::abs(U(rng))), p.a, p.b)
                                 : DensityModel::restricted(gauss, p.a, p.b);
    const PushforwardDensity<Polynomial> q(f, model);
    for (double u : geometric_grid(1e-5, 1.0, 12)) {
      const double measured = shift_modulus_result(q, u).value;
      INFO("f = " << to_string(f) << " piece [" << p.a << ", " << p.b << "] u = " << u);
      CHECK(prop2_bound(f, model, p, u) - measured >= -1e-6);
    }
    ++cases;
  }
}

TEST_CASE("certified constants", "[besov]") {
  const auto c1 = certified_modulus_constant(monomial(1), gauss);
  CHECK(c1.alpha == 1.0);
  CHECK(c1.C_total >= std::sqrt(2 / std::numbers::pi));
  CHECK(c1.breakpoints.empty());
  CHECK(certified_modulus_constant(monomial(3), gauss).alpha == Approx(1.0 / 3));
  CHECK_THROWS_AS(certified_modulus_constant(monomial(2), gauss, 0.0), input_error);
  CHECK_THROWS_AS(certified_modulus_constant(monomial(2), unit), input_error);

  for (const Polynomial& f : {monomial(2), monomial(3), Polynomial({0, 0, -1, 0, 1})}) {
    const auto cert = certified_modulus_constant(f, gauss);
    double sum = cert.truncation_bound;
    for (const auto& p : cert.pieces) {
      CHECK(p.term >= 0.0);
      sum += p.term;
    }
    CHECK(sum == Approx(cert.C_total).epsilon(1e-12));
    CHECK(cert.C1 + cert.C2 + cert.C3 + cert.truncation_bound == Approx(cert.C_total).epsilon(1e-14));
    const PushforwardDensity<Polynomial> q(f, gauss);
    for (double u : geometric_grid(1e-4, 1.0, 30)) {
      INFO("f = " << to_string(f) << " u = " << u);
      CHECK(shift_modulus_result(q, u).value <= cert.C_total * std::pow(u, cert.alpha) + 1e-6);
    }
  }
}

TEST_CASE("fit smoothness", "[besov]") {
  ModulusCurve c;
  c.u_grid = geometric_grid(1e-4, 1, 20);
  for (double u : c.u_grid) c.delta_values.push_back(2 * std::sqrt(u));
  c.mass = 1.0;
  auto e = fit_smoothness(c, {1e-4, 1});
  CHECK(e.alpha == Approx(0.5).epsilon(1e-12));
  CHECK(e.constant_C == Approx(2.0).epsilon(1e-12));
  CHECK(e.residual < 1e-12);
  // Saturated values are excluded.
  CHECK(fit_smoothness(c, {1e-4, 2}).points == 19);

  c.delta_values.clear();
  for (double u : c.u_grid) c.delta_values.push_back(std::min(2.0, 5 * u));
  e = fit_smoothness(c, {1e-4, 0.3});
  CHECK(e.alpha == Approx(1.0).epsilon(1e-12));
  CHECK(e.constant_C == Approx(5.0).epsilon(1e-12));
  CHECK_THROWS_AS(fit_smoothness(c, {0.5, 1}), input_error);

  const auto curve = modulus_curve(monomial(2), gauss, geometric_grid(1e-4, 1e-2, 12));
  e = fit_smoothness(curve, {1e-4, 1e-2});
  CHECK(std::abs(e.alpha - 0.5) <= 0.05);
}
