// Laws of x^2 and x^2 + 0.1x under a standard Gaussian: density, distance,
// shift modulus and the smoothing bound.

#include <tvkit/tvkit.hpp>

#include <cstdio>

int main() {
  using namespace tvkit;
  const auto gauss = DensityModel::standard_gaussian();
  const Polynomial f({0, 0, 1}), g({0, 0.1, 1});

  std::printf("q_f(1) = %.10f\n", pushforward_density(f, gauss, 1.0));

  const PushforwardDensity<Polynomial> qf(f, gauss), qg(g, gauss);
  const TVResult tv = tv_quadrature(qf, qg);
  std::printf("||law f - law g|| = %.10f (+/- %.1e)\n", tv.value, tv.error_estimate);

  const TVResult mc = tv_monte_carlo(f, gauss, g, gauss, {.n_samples = 1000000, .seed = 7});
  std::printf("monte carlo       = %.6f (+/- %.4f)\n", mc.value, mc.error_estimate);

  const auto curve = modulus_curve(qf, geometric_grid(1e-4, 1e-2, 12));
  const auto fit = fit_smoothness(curve, {1e-4, 1e-2});
  std::printf("delta(u) ~ %.4f u^%.4f\n", fit.constant_C, fit.alpha);

  const auto audit = theorem1_audit(f, g, gauss);
  std::printf("l1 = %.7f, sigma = %.4f, delta1+delta2+delta3 = %.4f, bound = %.4f\n", audit.bound.l1,
              audit.bound.sigma_opt, audit.diagnostic_sum, audit.bound.clamped_bound);
  return audit.holds() ? 0 : 1;
}
