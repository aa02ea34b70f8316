#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "fpuwave/lattice.hpp"
#include "fpuwave/wave.hpp"

using namespace fpuwave;

namespace {
const WaveSolution& wave01() {
  static const WaveSolution w =
      solve_wave(PotentialParams(2.0), 0.1, make_grid(6.0, 256));
  return w;
}
}  // namespace

TEST_CASE("init: profile sampling, margins, far field") {
  const WaveSolution& w = wave01();
  const int J = 48, center = 16;
  const LatticeState s = init_from_wave(w, J, center);

  CHECK(s.J == J);
  CHECK(s.bonds() == J - 1);
  // far-field sites at rest
  CHECK(s.bond(0) == 0.0);
  CHECK(s.bond(J - 2) == 0.0);
  CHECK(s.v[0] == 0.0);
  CHECK(s.v[J - 1] == 0.0);
  // exact node sampling: v at the center site, bond just right of center
  CHECK(s.v[center] ==
        doctest::Approx(-std::sqrt(w.sigma) * w.V[w.grid.center()])
            .epsilon(1e-15));
  const int ihalf = w.grid.center() + w.grid.K;
  CHECK(s.bond(center) == doctest::Approx(w.R[ihalf]).epsilon(1e-12));
  // peak bond below the barrier with the amplitude margin
  CHECK(max_bond(s) < 1.0 - w.delta);
  CHECK(max_bond(s) > 0.4);
  // half-integer sampling misses the tip; the travelling bound uses eps
  CHECK(dt_stability_limit(w) < dt_stability_limit(s));

  // sampled energy close to the grid quadrature of sigma V^2/2 + phi(R)
  const double e = lattice_energy(s);
  const double quad = w.sigma * (1.0 - w.delta) * (1.0 - w.delta) / 2.0 + w.p;
  CHECK(e == doctest::Approx(quad).epsilon(1e-2));

  // insufficient margins rejected
  CHECK_THROWS_AS(init_from_wave(w, 20, 10), std::domain_error);
  CHECK_THROWS_AS(init_from_wave(w, 48, 5), std::domain_error);
  CHECK_THROWS_AS(init_from_wave(w, 48, 44), std::domain_error);
}

TEST_CASE("stability limit and step rejection") {
  const WaveSolution& w = wave01();
  LatticeState s = init_from_wave(w, 48, 16);
  const double cap = dt_stability_limit(s);
  const double expected =
      std::pow(1.0 - max_bond(s), 0.5 * (2.0 + 2.0)) / 3.14159265358979324;
  CHECK(cap == doctest::Approx(expected).epsilon(1e-14));
  CHECK_THROWS_AS(lattice_step(s, 2.0 * cap), std::domain_error);
  CHECK_THROWS_AS(lattice_step(s, -1.0), std::domain_error);
}

TEST_CASE("zero state is an equilibrium") {
  LatticeState s;
  s.m = 2.0;
  s.J = 16;
  s.u.assign(16, 0.0);
  s.v.assign(16, 0.0);
  const RunSummary sum = lattice_run(s, 1.0, 0.01);
  CHECK(sum.energy_drift == 0.0);
  for (double uj : s.u) CHECK(uj == 0.0);
  for (double vj : s.v) CHECK(vj == 0.0);
  CHECK(lattice_energy(s) == 0.0);
}

TEST_CASE("barrier hit aborts with a diagnostic") {
  LatticeState s;
  s.m = 2.0;
  s.J = 2;
  s.u = {0.0, 0.9};
  s.v = {-50.0, 50.0};
  const double dt = 0.9 * dt_stability_limit(s);
  CHECK_THROWS_AS(lattice_step(s, dt), std::runtime_error);
}

TEST_CASE("time reversal retraces the trajectory") {
  const WaveSolution& w = wave01();
  LatticeState s = init_from_wave(w, 48, 16);
  const std::vector<double> u0 = s.u, v0 = s.v;
  const double dt = dt_stability_limit(w) / 10.0;
  const int n = 200;
  for (int k = 0; k < n; ++k) lattice_step(s, dt);
  for (double& vj : s.v) vj = -vj;
  for (int k = 0; k < n; ++k) lattice_step(s, dt);
  for (double& vj : s.v) vj = -vj;
  double worst = 0.0;
  for (int j = 0; j < s.J; ++j) {
    worst = std::max(worst, std::abs(s.u[j] - u0[j]));
    worst = std::max(worst, std::abs(s.v[j] - v0[j]));
  }
  CHECK(worst < 1e-9);
}

TEST_CASE("travelling wave: conservation, shape, speed") {
  const WaveSolution& w = wave01();
  LatticeState s = init_from_wave(w, 48, 16);
  const double c = std::sqrt(w.sigma);
  const double T = 5.0 / c;
  const double dt = default_time_step(w);
  CHECK(dt < dt_stability_limit(w));
  const RunSummary sum = lattice_run(s, T, dt);

  CHECK(sum.energy_drift <= 1e-6);
  CHECK(sum.momentum_drift <= 1e-12);
  CHECK(sum.max_bond_seen < 1.0);
  CHECK(sum.boundary_force_max <= 1e-12);

  const ShapeFit fit = fit_shape(s, w, 16, 0.0, 10.0);
  CHECK(fit.error <= 1e-2);
  CHECK(fit.shift / T == doctest::Approx(c).epsilon(0.01));
}

TEST_CASE("time-discretization error falls fourfold under dt halving") {
  const WaveSolution& w = wave01();
  const double T = 0.15;
  auto final_r = [&](double div) {
    LatticeState s = init_from_wave(w, 48, 16);
    const double dt = dt_stability_limit(w) / div;
    lattice_run(s, T, dt);
    return s.distances();
  };
  const std::vector<double> r1 = final_r(2.0);
  const std::vector<double> r2 = final_r(4.0);
  const std::vector<double> r4 = final_r(8.0);
  double d12 = 0.0, d24 = 0.0;
  for (std::size_t b = 0; b < r1.size(); ++b) {
    d12 = std::max(d12, std::abs(r1[b] - r2[b]));
    d24 = std::max(d24, std::abs(r2[b] - r4[b]));
  }
  CHECK(d24 > 0.0);
  const double ratio = d12 / d24;
  CHECK(ratio > 2.5);
  CHECK(ratio < 6.0);
}

TEST_CASE("shape fit recovers a known offset") {
  const WaveSolution& w = wave01();
  const LatticeState s = init_from_wave(w, 48, 16);
  const ShapeFit self = fit_shape(s, w, 16, -1.0, 1.0);
  CHECK(std::abs(self.shift) < 1e-6);
  CHECK(self.error < 1e-9);
  const ShapeFit moved = fit_shape(s, w, 13, 1.0, 5.0);
  CHECK(moved.shift == doctest::Approx(3.0).epsilon(1e-6));
  CHECK(moved.error < 1e-9);
  CHECK_THROWS_AS(fit_shape(s, w, 16, 2.0, 1.0), std::domain_error);
}
