#include <catch_amalgamated.hpp>

#include <tvkit/audit.hpp>
#include <tvkit/report.hpp>

#include <cmath>
#include <sstream>

using namespace tvkit;
using Catch::Approx;

namespace {
const auto gauss = DensityModel::standard_gaussian();
}

TEST_CASE("smoothing chain for a shifted square", "[audit]") {
  const Polynomial f({0, 0, 1}), g({0.01, 0, 1});
  const auto a = theorem1_audit(f, g, gauss);
  CHECK(a.bound.l1 == Approx(0.01).margin(1e-12));
  CHECK(a.bound.alpha == Approx(0.5));
  CHECK(a.tv_below_sum);
  CHECK(a.sum_below_bound);
  CHECK(a.holds());
  CHECK_FALSE(a.mc.has_value());
  // delta3 for a constant difference is the Gaussian closed form at sigma_opt.
  CHECK(a.delta3 == Approx(tv_gaussian_same_variance(0, 0.01, a.bound.sigma_opt)).margin(1e-12));
}

TEST_CASE("identical maps give a degenerate chain", "[audit]") {
  const Polynomial f({0, 1, 1});
  const auto a = theorem1_audit(f, f, gauss);
  CHECK(a.bound.degenerate);
  CHECK(a.tv.value == Approx(0).margin(1e-12));
  CHECK(a.diagnostic_sum == 0.0);
  CHECK(a.holds());
}

TEST_CASE("supplied constants skip certification", "[audit]") {
  const auto unit = DensityModel::lebesgue_on(0, 1);
  AuditOptions opt;
  opt.constants = AuditOptions::Constants{2.0, 2.0, 1.0};
  const auto a = theorem1_audit(Polynomial({0, 1}), Polynomial({0.05, 1}), unit, opt);
  CHECK(a.cert_f.pieces.empty());
  CHECK(a.tv.value == Approx(0.1).margin(1e-10));
  CHECK(a.tv_below_sum);
  CHECK_THROWS_AS(theorem1_audit(Polynomial({0, 1}), Polynomial({0.05, 1}), unit), input_error);
}

TEST_CASE("rate studies", "[audit]") {
  const auto deltas = geometric_grid(1e-4, 1e-1, 10);
  const auto all = gauss_poly_rates(2, deltas, Perturbation::all_coefficients);
  CHECK(all.within());
  CHECK(all.fit_delta.slope == Approx(0.5).margin(0.05));
  // A purely linear perturbation of x^2 moves the law smoothly: slope near 1, outside the band.
  const auto lin = gauss_poly_rates(2, deltas, Perturbation::linear);
  CHECK(lin.fit_delta.slope == Approx(1.0).margin(0.05));
  CHECK_FALSE(lin.within());
  const auto p = perturbed_power(3, 0.5, Perturbation::all_coefficients);
  CHECK(std::vector<double>(p.coeffs().begin(), p.coeffs().end()) == std::vector<double>{0.5, 0.5, 0.5, 1.5});
  CHECK_THROWS_AS(gauss_poly_rates(0, deltas, Perturbation::constant), input_error);
  CHECK_THROWS_AS(gauss_poly_rates(2, {0.1}, Perturbation::constant), input_error);
}

TEST_CASE("report formatting", "[report]") {
  CHECK(json_real(0.1 + 0.2).dump() == "0.3");
  CHECK(json_real(1.0 / 3.0).dump() == "0.333333333333");
  CHECK(json_real(std::numeric_limits<double>::infinity()).dump() == "\"inf\"");
  CHECK(json_real(std::nan("")).dump() == "\"nan\"");
  CHECK(csv_real(2.0) == "2");
  CHECK(csv_real(-std::numeric_limits<double>::infinity()) == "-inf");

  const auto v = vandermonde_system_check(3);
  const auto j = to_json(v);
  CHECK(j["Delta"] == "3110400");
  CHECK(j.begin().key() == "n");

  std::ostringstream os;
  write_csv(os, Table{{"a", "b"}, {{"1", "2"}, {"3", "4"}}});
  CHECK(os.str() == "a,b\n1,2\n3,4\n");
  std::ostringstream plot;
  write_plot_data(plot, "x y", {1, 2}, {0.5, 0.25});
  CHECK(plot.str() == "# x y\n1 0.5\n2 0.25\n");
}
