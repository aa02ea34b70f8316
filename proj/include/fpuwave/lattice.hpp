#pragma once

#include <vector>

#include "fpuwave/potential.hpp"
#include "fpuwave/wave.hpp"

namespace fpuwave {

// Chain state for the second-order site dynamics
//   u_j'' = phi'(u_{j+1} - u_j) - phi'(u_j - u_{j-1})
// with free (zero-force) ends. Positions and velocities are stored; the bond
// distances r_b = u_{b+1} - u_b (b = 0 .. J-2) are derived and must stay
// below the singularity barrier r < 1 at every accepted step.
struct LatticeState {
  double m = 2.0;
  int J = 0;        // number of sites
  double t = 0.0;   // elapsed time
  std::vector<double> u;
  std::vector<double> v;

  int bonds() const { return J - 1; }
  double bond(int b) const { return u[b + 1] - u[b]; }
  std::vector<double> distances() const;
};

// Sample the travelling profile onto the chain:
//   r_b(0) = R(b + 1/2 - center),  v_j(0) = -sqrt(sigma) V(j - center),
// by cubic interpolation on the wave grid (integer and half-integer
// arguments land exactly on grid nodes). Requires the wave support plus a
// 5-site margin to fit: center - X - 5 >= 0 and center + X + 5 <= J - 1.
// Throws std::domain_error otherwise.
LatticeState init_from_wave(const WaveSolution& w, int J, int center);

// Conserved quantities and the stability bound.
double lattice_energy(const LatticeState& s);    // sum v^2/2 + phi(r)
double lattice_momentum(const LatticeState& s);  // sum v
double max_bond(const LatticeState& s);

// Explicit stability limit (1/pi) (1 - max r)^{(m+2)/2} from the stiffest
// bond's curvature phi''(r) = (1-r)^{-(m+2)}.
double dt_stability_limit(const LatticeState& s);

// Horizon-wide limit for travelling data: as the profile slides, a bond
// sweeps through the tip, so the relevant gap is 1 - max R = eps.
double dt_stability_limit(const WaveSolution& w);

// Default production step for travelling-wave runs.  The symplectic
// integrator's energy error oscillates with amplitude ~ (dt * omega_peak)^2;
// measured on the delta = 0.1 wave over T = 5/sqrt(sigma) the drift is
// 3.0e-5 at dt_max/10, falling by 4x per halving, so an 80x margin is the
// smallest power-of-ten-free divisor that keeps the drift under 1e-6 with
// at least 2x headroom (4.7e-7 measured).
double default_time_step(const WaveSolution& w);

// One velocity-Verlet step. Throws std::domain_error if dt exceeds the
// current stability limit and std::runtime_error (with the step time in the
// message) if a bond reaches the barrier.
void lattice_step(LatticeState& s, double dt);

struct RunSummary {
  double T = 0.0;
  double dt = 0.0;
  long steps = 0;
  double energy_drift = 0.0;       // max |E - E0| / |E0|
  double momentum_drift = 0.0;     // max |sum v - initial|
  double max_bond_seen = 0.0;
  double boundary_force_max = 0.0;  // max end-bond |phi'| over the run
};

// Integrate over horizon T with uniform steps of size <= dt (the count is
// rounded up so the horizon is hit exactly). Energy and momentum are
// monitored every step.
RunSummary lattice_run(LatticeState& s, double T, double dt);

// Best continuous shift of the reference distance profile against the
// current bond distances:
//   error(shift) = max_b |r_b - R(b + 1/2 - center - shift)| / max|R|,
// minimized by golden-section search on [s_lo, s_hi].
struct ShapeFit {
  double shift = 0.0;
  double error = 0.0;
};

ShapeFit fit_shape(const LatticeState& s, const WaveSolution& w, int center,
                   double s_lo, double s_hi);

}  // namespace fpuwave
