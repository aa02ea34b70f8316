#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "fpuwave/limit_ode.hpp"
#include "fpuwave/rescaled.hpp"
#include "fpuwave/scan.hpp"
#include "fpuwave/spectral.hpp"
#include "fpuwave/wave.hpp"

using namespace fpuwave;

namespace {
const LimitOde& shared_ode() {
  static const LimitOde ode = solve_limit_ode(2.0, 500.0, 1e-3);
  return ode;
}
const CollapsePair& shared_pair() {
  static const CollapsePair pair = solve_collapse_pair(shared_ode());
  return pair;
}
}  // namespace

TEST_CASE("limit coefficient: value, symmetry, decay") {
  const LimitOde& ode = shared_ode();
  CHECK(limit_coefficient(ode, 0.0) == doctest::Approx(1.5).epsilon(1e-14));
  CHECK(limit_coefficient(ode, 3.7) ==
        doctest::Approx(limit_coefficient(ode, -3.7)).epsilon(1e-15));
  CHECK(limit_coefficient(ode, 1.0) > 0.0);
  CHECK(limit_coefficient(ode, 5.0) < limit_coefficient(ode, 1.0));
  // algebraic tail: xt^4 P -> 1.5, fitted exponent = 4 within 0.05
  const double p20 = limit_coefficient(ode, 20.0);
  const double p40 = limit_coefficient(ode, 40.0);
  const double p80 = limit_coefficient(ode, 80.0);
  const double slope1 = std::log(p20 / p40) / std::log(2.0);
  const double slope2 = std::log(p40 / p80) / std::log(2.0);
  CHECK(slope1 == doctest::Approx(4.0).epsilon(0.0125));
  CHECK(slope2 == doctest::Approx(4.0).epsilon(0.0125));
  CHECK(std::pow(80.0, 4) * p80 == doctest::Approx(1.5).epsilon(0.05));
}

TEST_CASE("collapse pair: normalization, certificates, envelopes") {
  const CollapsePair& pair = shared_pair();
  // far normalization: Te(0) -> -2/m, slope exactly 0 at the origin
  CHECK(pair.te0 == doctest::Approx(-1.0).epsilon(1e-4));
  CHECK(pair.eval_te_prime(0.0) == 0.0);
  CHECK(std::abs(pair.far_slope) > 1e-6);
  // odd branch anchored to the equation by finite differences
  CHECK(pair.to_certificate <= 1e-6);
  CHECK(pair.wronskian_drift <= 1e-8);
  // odd/even structure and origin values
  CHECK(pair.eval_to(0.0) == 0.0);
  CHECK(pair.eval_to(2.0) == -pair.eval_to(-2.0));
  CHECK(pair.eval_te(2.0) == pair.eval_te(-2.0));
  CHECK(pair.eval_to_prime(0.0) == doctest::Approx(1.0).epsilon(1e-12));
  // far field: To -> 1, Te' -> 1
  CHECK(std::abs(pair.eval_to(300.0) - 1.0) < 1e-4);
  CHECK(std::abs(pair.eval_te_prime(300.0) - 1.0) < 1e-4);
  // envelopes finite (and of expected magnitude)
  CHECK(pair.bound_affine < 10.0);
  CHECK(pair.bound_slope < 10.0);
  CHECK(pair.bound_to < 10.0);
  CHECK(pair.bound_affine > 0.0);
  // Wronskian equals Te(0) To'(0) everywhere
  const double w5 = pair.eval_te(5.0) * pair.eval_to_prime(5.0) -
                    pair.eval_te_prime(5.0) * pair.eval_to(5.0);
  CHECK(w5 == doctest::Approx(pair.te0).epsilon(1e-8));
  CHECK_THROWS_AS(pair.eval_te(401.0), std::out_of_range);
}

TEST_CASE("collapse pair: domain guards") {
  const LimitOde short_ode = solve_limit_ode(2.0, 50.0, 1e-3);
  CHECK_THROWS_AS(solve_collapse_pair(short_ode, 400.0, 1e-3),
                  std::domain_error);
  CHECK_THROWS_AS(solve_collapse_pair(shared_ode(), 5.0, 1e-3),
                  std::domain_error);
  CHECK_THROWS_AS(solve_collapse_pair(shared_ode(), 400.0, 0.5),
                  std::domain_error);
}

TEST_CASE("green kernel: closed form and defining equation") {
  CHECK(green_kernel(0.5, -2.0) == doctest::Approx(2.0 * std::exp(-1.0)));
  CHECK(green_kernel(0.5, 0.0) == 0.0);
  CHECK(green_kernel(0.5, 1.0) == 0.0);

  // zero in, zero out
  const std::vector<double> zero(256, 0.0);
  const std::vector<double> z = green_convolve(zero, 0.7, 0.01);
  for (double v : z) CHECK(v == 0.0);

  // (d/dxt - b)^2 (kernel * F) = F at second order in the spacing
  auto residual = [](int n) {
    const double L = 30.0;
    const double ht = 2.0 * L / (n - 1);
    const double b = 0.8;
    std::vector<double> F(n);
    for (int i = 0; i < n; ++i) {
      const double x = -L + i * ht;
      F[i] = std::exp(-0.5 * x * x);
    }
    const std::vector<double> u = green_convolve(F, b, ht);
    double worst = 0.0;
    for (int i = 2; i + 2 < n; ++i) {
      const double up =
          (u[i - 2] - 8 * u[i - 1] + 8 * u[i + 1] - u[i + 2]) / (12 * ht);
      const double upp = (-u[i - 2] + 16 * u[i - 1] - 30 * u[i] +
                          16 * u[i + 1] - u[i + 2]) /
                         (12 * ht * ht);
      const double x = -L + i * ht;
      if (std::abs(x) > L - 2.0) continue;
      worst = std::max(worst,
                       std::abs(upp - 2 * b * up + b * b * u[i] - F[i]));
    }
    return worst;
  };
  const double coarse = residual(1001);
  const double fine = residual(2001);
  CHECK(coarse < 1e-2);
  CHECK(fine < coarse / 3.0);
}

TEST_CASE("green kernel: smoothing constants uniform across amplitudes") {
  const PotentialParams p(2.0);
  const GreenBoundsReport rep =
      green_bounds(p, make_grid(6.0, 256), {0.2, 0.1, 0.05}, 20, 20240817u);
  REQUIRE(rep.c_smooth.size() == 3);
  for (int i = 0; i < 3; ++i) {
    CHECK(rep.c_smooth[i] > 0.0);
    CHECK(rep.c_grad_l2[i] > 0.0);
    CHECK(rep.c_grad_l1[i] > 0.0);
  }
  CHECK(rep.worst_ratio <= 2.0);
  CHECK(rep.commutation_sup <= 1e-12);
  CHECK_THROWS_AS(green_bounds(p, make_grid(6.0, 256), {}, 20, 1u),
                  std::domain_error);
}

TEST_CASE("rescaled kernel: fits and diagnostics at moderate amplitude") {
  const PotentialParams p(2.0);
  const WaveSolution w = solve_wave(p, 0.2, make_grid(6.0, 256));
  ScanOptions opts;
  opts.with_sectors = false;
  const double a = 0.5 * a_crit(std::sqrt(w.sigma));
  const KernelScanReport scan = kernel_scan(w, a, opts);
  const RescaledKernel rk =
      rescale_and_fit(w, scan, shared_ode(), shared_pair());

  CHECK(rk.lambda == doctest::Approx(w.mu / shared_ode().mu_bar).epsilon(1e-14));
  CHECK(rk.norm_check == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(std::abs(rk.xt[rk.i0]) < 1e-12);
  CHECK(rk.To[rk.i0] == 0.0);

  // frozen reference values from an independent pipeline (same design)
  CHECK(rk.c_o == doctest::Approx(0.472170).epsilon(0.01));
  CHECK(std::abs(rk.c_e) < 1e-5);
  CHECK(std::abs(rk.c_e) < 0.5 * scan.singular_values[0]);
  CHECK(rk.sup_residual == doctest::Approx(1.406e-2).epsilon(0.10));
  CHECK(rk.int0 == doctest::Approx(8.334e-2).epsilon(0.10));
  CHECK(rk.int1 == doctest::Approx(1.186e-1).epsilon(0.10));
  CHECK(rk.z_sup == doctest::Approx(2.78).epsilon(0.10));
  CHECK(rk.fp_residual < 1e-2);
  CHECK(rk.e0_sup > 0.0);
  CHECK(rk.ep_sup > 0.0);

  // coefficient comparison: Qt matches the limit coefficient at the tip
  CHECK(rk.Qt[rk.i0] == doctest::Approx(rk.Pt[rk.i0] +
                                        std::pow(rk.lambda, w.m + 2.0) *
                                            rk.Zt[rk.i0])
                            .epsilon(1e-12));
}

TEST_CASE("rescaled kernel: guards") {
  const PotentialParams p(2.0);
  const WaveSolution w = solve_wave(p, 0.2, make_grid(6.0, 64));
  ScanOptions opts;
  opts.with_sectors = false;
  const double a = 0.5 * a_crit(std::sqrt(w.sigma));
  KernelScanReport scan = kernel_scan(w, a, opts);
  KernelScanReport broken = scan;
  broken.kernel_vector.pop_back();
  CHECK_THROWS_AS(rescale_and_fit(w, broken, shared_ode(), shared_pair()),
                  std::domain_error);
  const LimitOde ode3 = solve_limit_ode(3.0, 450.0, 1e-3);
  CHECK_THROWS_AS(rescale_and_fit(w, scan, ode3, shared_pair()),
                  std::domain_error);
}

TEST_CASE("perturbation profile: refined tip comparison") {
  const PotentialParams p(2.0);
  const Grid coarse_grid = make_grid(6.0, 256);
  const Grid fine_grid = make_grid(6.0, 512);
  const WaveSolution wc = solve_wave(p, 0.2, coarse_grid);
  const WaveSolution wf = solve_wave(p, 0.2, fine_grid);
  const PerturbationReport rep = perturbation_profile(wc, wf, shared_ode());
  CHECK(rep.z_sup == doctest::Approx(2.78).epsilon(0.15));
  CHECK(rep.sigma_refined == doctest::Approx(wf.sigma).epsilon(1e-4));
  CHECK(rep.eps_refined == doctest::Approx(wf.eps).epsilon(1e-3));
  CHECK_THROWS_AS(perturbation_profile(wc, wc, shared_ode()),
                  std::domain_error);
  const WaveSolution other = solve_wave(p, 0.1, fine_grid);
  CHECK_THROWS_AS(perturbation_profile(wc, other, shared_ode()),
                  std::domain_error);
}
