#include <catch_amalgamated.hpp>

#include <tvkit/roots.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <vector>

using namespace tvkit;
using Catch::Approx;

namespace {
constexpr double inf = std::numeric_limits<double>::infinity();

Polynomial from_roots(const std::vector<double>& roots, double lead = 1.0) {
  Polynomial p = Polynomial::constant(lead);
  for (double r : roots) p = p * Polynomial({-r, 1.0});
  return p;
}
}  // namespace

TEST_CASE("real roots of small examples", "[roots]") {
  auto r = real_roots(Polynomial({-1, 0, 1}), -10, 10);
  REQUIRE(r.size() == 2);
  CHECK(r[0] == Approx(-1.0).epsilon(1e-14));
  CHECK(r[1] == Approx(1.0).epsilon(1e-14));

  CHECK(real_roots(Polynomial({1, 0, 1}), -10, 10).empty());

  r = real_roots(Polynomial({-6, 11, -6, 1}), 0, 10);
  REQUIRE(r.size() == 3);
  CHECK(r[0] == Approx(1.0).epsilon(1e-13));
  CHECK(r[1] == Approx(2.0).epsilon(1e-13));
  CHECK(r[2] == Approx(3.0).epsilon(1e-13));
}

TEST_CASE("multiple roots are collapsed", "[roots]") {
  auto r = real_roots(Polynomial({0, 0, 3}), -inf, inf);  // 3x^2
  REQUIRE(r.size() == 1);
  CHECK(r[0] == Approx(0.0).margin(1e-12));
  r = real_roots(from_roots({1.0 / 3, 1.0 / 3, 1.0 / 3, -0.7}), -inf, inf);
  REQUIRE(r.size() == 2);
  CHECK(r[0] == Approx(-0.7).margin(1e-9));
  CHECK(r[1] == Approx(1.0 / 3).margin(1e-5));
}

TEST_CASE("zero polynomial is rejected", "[roots]") {
  CHECK_THROWS_AS(real_roots(Polynomial{}, -1, 1), input_error);
}

TEST_CASE("roots at interval ends are included", "[roots]") {
  const auto r = real_roots(Polynomial({-1, 0, 1}), -1.0, 1.0);
  CHECK(r.size() == 2);
}

TEST_CASE("root completeness on constructed polynomials", "[roots][property]") {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  std::uniform_int_distribution<int> deg(1, 6);
  for (int trial = 0; trial < 300; ++trial) {
    const int n = deg(rng);
    std::vector<double> roots;
    while (static_cast<int>(roots.size()) < n) {
      const double c = u(rng);
      bool ok = true;
      for (double r : roots) ok = ok && std::abs(r - c) > 0.1;
      if (ok) roots.push_back(c);
    }
    std::sort(roots.begin(), roots.end());
    // Add an irreducible quadratic factor half the time.
    Polynomial p = from_roots(roots, u(rng) >= 0 ? 1.5 : -0.7);
    if (trial % 2) p = p * Polynomial({1.3, 0.4, 1.0});
    const auto found = real_roots(p, -inf, inf);
    REQUIRE(found.size() == roots.size());
    const double tol = 1e-12 * cauchy_bound(p) * 1e3;  // conditioning slack for clustered roots
    for (std::size_t i = 0; i < roots.size(); ++i) CHECK(std::abs(found[i] - roots[i]) <= std::max(tol, 1e-12));
  }
}

TEST_CASE("trigonometric roots", "[roots]") {
  constexpr double pi = std::numbers::pi;
  const TrigPolynomial s({}, {0, 1});  // sin x
  auto r = real_roots(s, -8, 8);
  REQUIRE(r.size() == 5);
  CHECK(r[0] == Approx(-2 * pi));
  CHECK(r[2] == Approx(0.0).margin(1e-14));
  CHECK(r[3] == Approx(pi));

  // f' of 4cos x - cos 2x is 4 sin x (cos x - 1): triple zeros at 2 pi k.
  const TrigPolynomial f({0, 4, -1}, {});
  r = real_roots(differentiate(f), -8, 8);
  REQUIRE(r.size() == 5);
  for (std::size_t i = 0; i < r.size(); ++i) CHECK(r[i] == Approx(pi * (static_cast<double>(i) - 2.0)).margin(1e-6));

  const TrigPolynomial g({0, 1}, {0, 0, 0.5});  // cos x + 0.5 sin 2x
  r = real_roots(differentiate(g), -8, 8);
  for (double x : r) CHECK(std::abs(differentiate(g)(x)) < 1e-12);
  // -sin x + cos 2x = 0 at sin x = 1/2 and sin x = -1 (a double zero): three per period.
  CHECK(r.size() == 8);
  CHECK(std::count_if(r.begin(), r.end(), [](double x) { return std::abs(std::sin(x) + 1) < 1e-9; }) == 3);
}
