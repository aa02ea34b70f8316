#include "fpuwave/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace fpuwave {

namespace {

// Cubic interpolation of a grid function, zero outside the grid. Integer
// multiples of the spacing are returned exactly.
double sample_profile(const std::vector<double>& F, const Grid& g, double x) {
  if (x <= -g.X || x >= g.X) return 0.0;
  const double pos = (x + g.X) / g.h();
  const int n = static_cast<int>(F.size());
  const int nearest = static_cast<int>(std::lround(pos));
  if (std::abs(pos - nearest) < 1e-9 && nearest >= 0 && nearest < n) {
    return F[nearest];
  }
  int i = static_cast<int>(std::floor(pos));
  i = std::clamp(i, 1, n - 3);
  const double s = pos - i;
  const double fm1 = F[i - 1], f0 = F[i], f1 = F[i + 1], f2 = F[i + 2];
  // 4-point Lagrange basis on offsets {-1, 0, 1, 2}
  return fm1 * (-s * (s - 1.0) * (s - 2.0) / 6.0) +
         f0 * ((s + 1.0) * (s - 1.0) * (s - 2.0) / 2.0) +
         f1 * (-(s + 1.0) * s * (s - 2.0) / 2.0) +
         f2 * ((s + 1.0) * s * (s - 1.0) / 6.0);
}

// Bond tensions phi'(r_b); throws on a barrier hit.
void bond_tensions(const LatticeState& s, const PotentialParams& params,
                   std::vector<double>& phi) {
  const int B = s.bonds();
  for (int b = 0; b < B; ++b) {
    const double r = s.bond(b);
    if (r >= 1.0) {
      std::ostringstream msg;
      msg << "lattice: bond " << b << " reached the barrier at t = " << s.t;
      throw std::runtime_error(msg.str());
    }
    phi[b] = eval_potential(params, r, 1);
  }
}

}  // namespace

std::vector<double> LatticeState::distances() const {
  std::vector<double> r(bonds());
  for (int b = 0; b < bonds(); ++b) r[b] = bond(b);
  return r;
}

LatticeState init_from_wave(const WaveSolution& w, int J, int center) {
  if (J < 8) throw std::domain_error("init_from_wave: chain too short");
  const double X = w.grid.X;
  if (center - X - 5.0 < 0.0 || center + X + 5.0 > J - 1.0) {
    throw std::domain_error(
        "init_from_wave: wave support plus margin exceeds the chain");
  }
  LatticeState s;
  s.m = w.m;
  s.J = J;
  s.t = 0.0;
  s.u.assign(J, 0.0);
  s.v.assign(J, 0.0);
  // accumulate positions from the sampled distances
  double acc = 0.0;
  for (int j = 1; j < J; ++j) {
    acc += sample_profile(w.R, w.grid, (j - 1) + 0.5 - center);
    s.u[j] = acc;
  }
  const double c = std::sqrt(w.sigma);
  for (int j = 0; j < J; ++j) {
    s.v[j] = -c * sample_profile(w.V, w.grid, static_cast<double>(j - center));
  }
  return s;
}

double lattice_energy(const LatticeState& s) {
  const PotentialParams params(s.m);
  double e = 0.0;
  for (double vj : s.v) e += 0.5 * vj * vj;
  for (int b = 0; b < s.bonds(); ++b) {
    e += eval_potential(params, s.bond(b), 0);
  }
  return e;
}

double lattice_momentum(const LatticeState& s) {
  double p = 0.0;
  for (double vj : s.v) p += vj;
  return p;
}

double max_bond(const LatticeState& s) {
  double r = -std::numeric_limits<double>::infinity();
  for (int b = 0; b < s.bonds(); ++b) r = std::max(r, s.bond(b));
  return r;
}

double dt_stability_limit(const LatticeState& s) {
  const double gap = 1.0 - max_bond(s);
  if (gap <= 0.0) return 0.0;
  return std::pow(gap, 0.5 * (s.m + 2.0)) / 3.14159265358979324;
}

double dt_stability_limit(const WaveSolution& w) {
  return std::pow(w.eps, 0.5 * (w.m + 2.0)) / 3.14159265358979324;
}

double default_time_step(const WaveSolution& w) {
  return dt_stability_limit(w) / 80.0;
}

void lattice_step(LatticeState& s, double dt) {
  if (!(dt > 0.0)) throw std::domain_error("lattice_step: dt must be > 0");
  if (dt > dt_stability_limit(s)) {
    throw std::domain_error("lattice_step: dt above the stability limit");
  }
  const PotentialParams params(s.m);
  const int J = s.J, B = s.bonds();
  std::vector<double> phi(B);
  bond_tensions(s, params, phi);
  // velocity half-kick, drift, then the closing half-kick
  for (int j = 0; j < J; ++j) {
    const double right = (j < B) ? phi[j] : 0.0;
    const double left = (j > 0) ? phi[j - 1] : 0.0;
    s.v[j] += 0.5 * dt * (right - left);
  }
  for (int j = 0; j < J; ++j) s.u[j] += dt * s.v[j];
  s.t += dt;
  bond_tensions(s, params, phi);
  for (int j = 0; j < J; ++j) {
    const double right = (j < B) ? phi[j] : 0.0;
    const double left = (j > 0) ? phi[j - 1] : 0.0;
    s.v[j] += 0.5 * dt * (right - left);
  }
}

RunSummary lattice_run(LatticeState& s, double T, double dt) {
  if (!(T > 0.0) || !(dt > 0.0)) {
    throw std::domain_error("lattice_run: horizon and dt must be > 0");
  }
  const long steps = std::max(1L, std::lround(std::ceil(T / dt - 1e-9)));
  const double step_dt = T / static_cast<double>(steps);
  const PotentialParams params(s.m);
  RunSummary sum;
  sum.T = T;
  sum.dt = step_dt;
  sum.steps = steps;
  const double e0 = lattice_energy(s);
  const double p0 = lattice_momentum(s);
  sum.max_bond_seen = max_bond(s);
  for (long k = 0; k < steps; ++k) {
    lattice_step(s, step_dt);
    const double e = lattice_energy(s);
    if (e0 != 0.0) {
      sum.energy_drift =
          std::max(sum.energy_drift, std::abs(e - e0) / std::abs(e0));
    } else {
      sum.energy_drift = std::max(sum.energy_drift, std::abs(e - e0));
    }
    sum.momentum_drift =
        std::max(sum.momentum_drift, std::abs(lattice_momentum(s) - p0));
    sum.max_bond_seen = std::max(sum.max_bond_seen, max_bond(s));
    const double fl = std::abs(eval_potential(params, s.bond(0), 1));
    const double fr =
        std::abs(eval_potential(params, s.bond(s.bonds() - 1), 1));
    sum.boundary_force_max = std::max({sum.boundary_force_max, fl, fr});
  }
  return sum;
}

ShapeFit fit_shape(const LatticeState& s, const WaveSolution& w, int center,
                   double s_lo, double s_hi) {
  if (!(s_hi > s_lo)) {
    throw std::domain_error("fit_shape: empty search interval");
  }
  double r_scale = 0.0;
  for (double rv : w.R) r_scale = std::max(r_scale, std::abs(rv));
  const std::vector<double> r = s.distances();
  auto err = [&](double shift) {
    double worst = 0.0;
    for (int b = 0; b < s.bonds(); ++b) {
      const double ref =
          sample_profile(w.R, w.grid, b + 0.5 - center - shift);
      worst = std::max(worst, std::abs(r[b] - ref));
    }
    return worst / r_scale;
  };
  const double gr = 0.6180339887498949;
  double a = s_lo, b = s_hi;
  double c = b - gr * (b - a), d = a + gr * (b - a);
  double fc = err(c), fd = err(d);
  for (int it = 0; it < 200 && (b - a) > 1e-10; ++it) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - gr * (b - a);
      fc = err(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + gr * (b - a);
      fd = err(d);
    }
  }
  ShapeFit fit;
  fit.shift = 0.5 * (a + b);
  fit.error = err(fit.shift);
  return fit;
}

}  // namespace fpuwave
