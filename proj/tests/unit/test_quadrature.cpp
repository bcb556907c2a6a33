#include <catch_amalgamated.hpp>

#include <tvkit/quadrature.hpp>

#include <cmath>
#include <numbers>

using namespace tvkit;
using Catch::Approx;

TEST_CASE("Kronrod panel is exact for low degree", "[quadrature]") {
  const auto r = gauss_kronrod_21([](double x) { return x * x * x * x; }, 0.0, 2.0);
  CHECK(r.value == Approx(32.0 / 5.0).epsilon(1e-15));
}

TEST_CASE("adaptive integration handles peaks and endpoint singularities", "[quadrature]") {
  auto r = integrate_adaptive([](double x) { return 1.0 / (1e-4 + x * x); }, -1.0, 1.0, 1e-10);
  CHECK(r.value == Approx(2.0 * std::atan(100.0) * 100.0).epsilon(1e-10));
  r = integrate_adaptive([](double x) { return 1.0 / std::sqrt(x); }, 0.0, 1.0, 1e-8, 1e-12, 20000);
  CHECK(r.value == Approx(2.0).epsilon(1e-6));
  CHECK(integrate_adaptive([](double) { return 1.0; }, 1.0, 1.0, 1e-9).value == 0.0);
}

TEST_CASE("Gauss-Hermite reproduces Gaussian moments", "[quadrature]") {
  for (int n : {1, 5, 20, 64}) {
    const auto rule = gauss_hermite(n);
    double m0 = 0, m2 = 0, m4 = 0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
      const double z = rule.nodes[i];
      m0 += rule.weights[i];
      m2 += rule.weights[i] * z * z;
      m4 += rule.weights[i] * z * z * z * z;
    }
    CHECK(m0 == Approx(1.0).epsilon(1e-13));
    if (n >= 2) CHECK(m2 == Approx(1.0).epsilon(1e-12));
    if (n >= 3) CHECK(m4 == Approx(3.0).epsilon(1e-12));
  }
  CHECK_THROWS_AS(gauss_hermite(0), input_error);
}
