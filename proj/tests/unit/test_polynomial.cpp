#include <catch_amalgamated.hpp>

#include <tvkit/multipoly.hpp>
#include <tvkit/polynomial.hpp>
#include <tvkit/trig_polynomial.hpp>

#include <cmath>
#include <random>
#include <vector>

using namespace tvkit;
using Catch::Approx;

TEST_CASE("evaluate polynomial and trig polynomial", "[funcspace]") {
  CHECK(Polynomial({-1, 0, 1})(2.0) == 3.0);
  CHECK(Polynomial{}(3.7) == 0.0);
  CHECK(Polynomial{}.is_zero());
  const TrigPolynomial t({0, 1}, {0, 0, 1});  // cos x + sin 2x
  CHECK(t(0.0) == 1.0);
  CHECK(t(0.3) == Approx(std::cos(0.3) + std::sin(0.6)).epsilon(1e-15));
}

TEST_CASE("trailing zeros are trimmed", "[funcspace]") {
  const Polynomial p({1, 2, 0, 0});
  CHECK(p.degree() == 1);
  CHECK(p.leading() == 2.0);
}

TEST_CASE("differentiate", "[funcspace]") {
  CHECK(differentiate(Polynomial::monomial(3)) == Polynomial({0, 0, 3}));
  CHECK(differentiate(Polynomial::constant(5.0)).is_zero());
  const TrigPolynomial s2({}, {0, 0, 1});
  const auto d = differentiate(s2);
  CHECK(d.cos_coeffs().at(2) == 2.0);
  CHECK(d.sin_coeffs().at(2) == 0.0);
  CHECK(d(0.4) == Approx(2.0 * std::cos(0.8)));
}

TEST_CASE("derivative_at agrees with repeated differentiate", "[funcspace]") {
  const Polynomial f({0.3, -1.2, 0.7, 2.0, -0.5, 0.1});
  Polynomial d = f;
  for (int k = 0; k <= 6; ++k) {
    CHECK(derivative_at(f, k, 0.77) == Approx(d(0.77)).margin(1e-12));
    d = differentiate(d);
  }
}

TEST_CASE("central differences match the exact derivative", "[funcspace][property]") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> coef(-2.0, 2.0), xs(-2.0, 2.0);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> c(6);
    for (auto& v : c) v = coef(rng);
    const Polynomial f(c);
    const TrigPolynomial t({c[0], c[1], c[2]}, {0.0, c[3], c[4]});
    const double x = xs(rng);
    const double h = 1e-5;
    const double fd = (f(x + h) - f(x - h)) / (2 * h);
    const double ex = differentiate(f)(x);
    CHECK(std::abs(fd - ex) <= 1e-6 * std::max(1.0, std::abs(ex)));
    const double tfd = (t(x + h) - t(x - h)) / (2 * h);
    const double tex = differentiate(t)(x);
    CHECK(std::abs(tfd - tex) <= 1e-6 * std::max(1.0, std::abs(tex)));
  }
}

TEST_CASE("taylor shift", "[funcspace]") {
  const Polynomial f({-6, 11, -6, 1});
  const Polynomial g = taylor_shift(f, 2.0);  // (y+1) y (y-1) = y^3 - y
  CHECK(g.coeff(0) == Approx(0.0).margin(1e-14));
  CHECK(g.coeff(1) == Approx(-1.0));
  CHECK(g.coeff(2) == Approx(0.0).margin(1e-14));
  CHECK(g.coeff(3) == Approx(1.0));
}

TEST_CASE("parse polynomial text", "[funcspace]") {
  const auto p = parse_polynomial("\xE2\x88\x92" "6,11,\xE2\x88\x92" "6,1");
  CHECK(p == Polynomial({-6, 11, -6, 1}));
  CHECK(parse_polynomial(" 0, 0 ,1 ") == Polynomial({0, 0, 1}));
  CHECK_THROWS_AS(parse_polynomial("1,x,2"), input_error);
  CHECK_THROWS_AS(parse_polynomial(""), input_error);
  CHECK_THROWS_AS(parse_polynomial("1,,2"), input_error);
}

TEST_CASE("parse trig polynomial text", "[funcspace]") {
  const auto t = parse_trig_polynomial("cos=0,1;sin=0,0.5");
  CHECK(t.degree() == 1);
  CHECK(t(0.2) == Approx(std::cos(0.2) + 0.5 * std::sin(0.2)));
  CHECK_THROWS_AS(parse_trig_polynomial("cos=1;sin=1"), input_error);
  CHECK_THROWS_AS(parse_trig_polynomial("tan=1"), input_error);
}

TEST_CASE("half-angle image vanishes where the trig polynomial does", "[funcspace]") {
  const TrigPolynomial t({0.2, 1.0, -0.4}, {0.0, 0.3, 0.5});
  const Polynomial p = half_angle_polynomial(t);
  for (double x : {-2.5, -1.0, 0.3, 1.7, 2.9}) {
    const double tt = std::tan(x / 2);
    CHECK(p(tt) == Approx(t(x) * std::pow(1 + tt * tt, 2)).epsilon(1e-12));
  }
}

TEST_CASE("multipoly evaluation, partials and parsing", "[funcspace]") {
  const auto f = parse_multipoly("1: 2 0\n1: 0 2\n# comment\n-3: 1 1\n");
  CHECK(f.dimension() == 2);
  CHECK(f.total_degree() == 2);
  const std::vector<double> x{1.5, -2.0};
  CHECK(f(x) == Approx(2.25 + 4.0 + 9.0));
  CHECK(f.partial(0)(x) == Approx(3.0 + 6.0));
  const std::vector<double> bad{1.0};
  CHECK_THROWS_AS(f(bad), input_error);
  CHECK_THROWS_AS(parse_multipoly("1: 1 2\n2: 1\n"), input_error);
  const auto r = MultiPoly::radial_power(3, 2);
  const std::vector<double> y{1.0, 2.0, -1.0};
  CHECK(r(y) == Approx(36.0));
  CHECK(r.total_degree() == 4);
}
