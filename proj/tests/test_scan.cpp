#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <random>
#include <stdexcept>
#include <vector>

#include "fpuwave/scan.hpp"
#include "fpuwave/spectral.hpp"

using fpuwave::Grid;
using fpuwave::make_grid;
using fpuwave::PotentialParams;
using fpuwave::solve_wave;
using fpuwave::WaveSolution;
using fpuwave::a_crit;
using fpuwave::cyclic_nodes;
using fpuwave::apply_second_order;
using fpuwave::apply_second_order_constant;
using fpuwave::solve_second_order_constant;
using fpuwave::translation_seed;
using fpuwave::kernel_scan;
using fpuwave::ScanOptions;

namespace {
// Frozen values from an independent implementation of the identical scan
// (delta = 0.2, K = 256, X = 6, weight a = a_c/2, half_width = 8).
constexpr double kS1 = 1.0383355262719862e-05;
constexpr double kSv2 = 7.91737;
constexpr double kEvenMin = 4.2950601;
constexpr double kOddFirst = 4.9247291e-05;
constexpr double kOddSecond = 8.1061137;
}  // namespace

TEST_CASE("second-order operator: constant-coefficient symbol agreement") {
  const double Q = 1.0, sigma = 4.0, a = 0.1, k = 1.0;
  const int K = 256;
  const double hw = 8.0;
  const std::vector<double> x = cyclic_nodes(K, hw);
  const int n = static_cast<int>(x.size());
  std::vector<double> re(n), im(n);
  for (int i = 0; i < n; ++i) {
    re[i] = std::cos(k * x[i]);
    im[i] = std::sin(k * x[i]);
  }
  const auto Mre = apply_second_order_constant(Q, sigma, a, K, hw, re);
  const auto Mim = apply_second_order_constant(Q, sigma, a, K, hw, im);
  const int center = n / 2;  // x = 0, far from the cyclic seam
  const std::complex<double> applied(Mre[center], Mim[center]);
  const std::complex<double> z(-a, k);
  const std::complex<double> symbol =
      z * z - (Q / sigma) * (std::exp(std::complex<double>(-a, k)) +
                             std::exp(std::complex<double>(a, -k)) - 2.0);
  CHECK(std::abs(applied - symbol) <= 1e-10);
}

TEST_CASE("second-order operator: invertible without potential coupling") {
  const int K = 64;
  const double hw = 4.0, a = 0.5;
  const std::vector<double> x = cyclic_nodes(K, hw);
  const int n = static_cast<int>(x.size());
  std::vector<double> rhs(n);
  for (int i = 0; i < n; ++i) rhs[i] = std::exp(-2.0 * x[i] * x[i]);
  const auto u = solve_second_order_constant(0.0, 4.0, a, K, hw, rhs);
  const auto back = apply_second_order_constant(0.0, 4.0, a, K, hw, u);
  double worst = 0.0;
  for (int i = 0; i < n; ++i) worst = std::max(worst, std::abs(back[i] - rhs[i]));
  CHECK(worst < 1e-9);
}

TEST_CASE("second-order operator: translation mode is annihilated at O(h^2)") {
  const PotentialParams p(2.0);
  auto residual = [&](int K) {
    const auto w = solve_wave(p, 0.1, make_grid(6.0, K));
    const double a = 0.5 * a_crit(std::sqrt(w.sigma));
    const auto g = translation_seed(w, a, 8.0);
    const auto Mg = apply_second_order(w, a, 8.0, g);
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
      num += Mg[i] * Mg[i];
      den += g[i] * g[i];
    }
    return std::sqrt(num / den);
  };
  const double coarse = residual(256);
  const double fine = residual(512);
  CHECK(coarse < 1e-2);
  CHECK(fine < coarse / 3.0);
}

TEST_CASE("kernel scan: frozen spectrum at moderate amplitude") {
  const PotentialParams p(2.0);
  const auto w = solve_wave(p, 0.2, make_grid(6.0, 256));
  const double a = 0.5 * a_crit(std::sqrt(w.sigma));
  const auto rep = kernel_scan(w, a);

  CHECK(rep.singular_values.size() == 10);
  CHECK(rep.singular_values[0] == doctest::Approx(kS1).epsilon(0.05));
  CHECK(rep.singular_values[1] == doctest::Approx(kSv2).epsilon(0.01));
  CHECK(rep.translation_correlation >= 0.999);
  CHECK(rep.kernel_count == 1);
  CHECK(rep.zero_singular_value);
  CHECK_FALSE(rep.inconclusive);
  CHECK(rep.singular_values[1] / rep.singular_values[0] >= 100.0);

  // parity sectors: kernel odd; even restriction boundedly invertible
  CHECK(rep.even_min_sv == doctest::Approx(kEvenMin).epsilon(0.01));
  CHECK(rep.odd_first_sv == doctest::Approx(kOddFirst).epsilon(0.10));
  CHECK(rep.odd_second_sv == doctest::Approx(kOddSecond).epsilon(0.01));
  CHECK(rep.even_min_sv > 0.1 * rep.odd_second_sv);
  CHECK(rep.even_min_sv > 100.0 * rep.odd_first_sv);

  // kernel vector matches the translation surrogate pointwise
  const auto g = translation_seed(w, a, 8.0);
  double nrm = 0.0;
  for (double v : g) nrm += v * v;
  nrm = std::sqrt(nrm);
  double worst = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    worst = std::max(worst, std::abs(rep.kernel_vector[i] - g[i] / nrm));
  }
  CHECK(worst < 1e-3);
}

TEST_CASE("kernel scan: verdict stable under a different weight gauge") {
  const PotentialParams p(2.0);
  const auto w = solve_wave(p, 0.2, make_grid(6.0, 256));
  const double a = 0.25 * a_crit(std::sqrt(w.sigma));
  ScanOptions opts;
  opts.with_sectors = false;
  const auto rep = kernel_scan(w, a, opts);
  CHECK(rep.kernel_count == 1);
  CHECK(rep.singular_values[1] / rep.singular_values[0] >= 100.0);
  CHECK(rep.translation_correlation >= 0.999);
}

TEST_CASE("kernel scan: weight domain guards") {
  const PotentialParams p(2.0);
  const auto w = solve_wave(p, 0.2, make_grid(6.0, 64));
  const double ac = a_crit(std::sqrt(w.sigma));
  CHECK_THROWS_AS(kernel_scan(w, 0.0), std::domain_error);
  CHECK_THROWS_AS(kernel_scan(w, ac), std::domain_error);
  CHECK_THROWS_AS(kernel_scan(w, 1.5 * ac), std::domain_error);
  ScanOptions bad;
  bad.half_width = 5.0;  // smaller than the wave grid
  CHECK_THROWS_AS(kernel_scan(w, 0.5 * ac, bad), std::domain_error);
}
