#pragma once

#include <vector>

#include "fpuwave/grid.hpp"
#include "fpuwave/limit_ode.hpp"
#include "fpuwave/potential.hpp"

namespace fpuwave {

// Solitary-wave profile pair on a symmetric grid:
//   R = distance profile, V = velocity profile, sigma = squared wave speed,
// solving the integrated travelling-wave system
//   R = A V,   sigma * V = A phi'(A V)
// with A the sliding unit-box average, under the norm constraint
// ||V||_2 = 1 - delta.
struct WaveSolution {
  Grid grid;
  double m = 2.0;
  double delta = 0.0;
  std::vector<double> R;
  std::vector<double> V;
  double sigma = 0.0;
  double eps = 0.0;       // tip amplitude 1 - R(0)
  double mu = 0.0;        // sqrt(sigma * eps^{m+2})
  double p = 0.0;         // potential energy  int phi(R)
  double H = 0.0;         // total energy      int (V^2/2 + phi(R))
  double residual = 0.0;  // relative fixed-point residual
  int iterations = 0;
};

// Sliding unit-box average (A F)(x) = int_{x-1/2}^{x+1/2} F, computed with
// trapezoid prefix sums; the half-shift is the exact K-node offset.
// Out-of-range ends are clamped (F is assumed decayed at the boundary).
std::vector<double> box_average(const std::vector<double>& F, const Grid& grid);

// Normalized fixed-point iteration
//   V <- (1-delta) * T(V)/||T(V)||,  T(V) = A phi'(A V),
// seeded with a smoothed unit-box indicator. sigma emerges as
// ||T(V)||/(1-delta). Evenness, unimodality and monotone growth of the
// potential energy are monitored every iteration.
WaveSolution solve_wave(const PotentialParams& params, double delta,
                        const Grid& grid, double tol = 1e-13,
                        int max_iter = 400);

// Fourth-order centered derivatives of (R, V); the pair spans the
// translation mode of the linearized operator. One-sided stencils at the
// edges.
struct WaveDerivatives {
  std::vector<double> S1;  // dR/dx
  std::vector<double> W1;  // dV/dx
};

WaveDerivatives wave_derivatives(const WaveSolution& w);

// Exact on-grid difference form of dR/dx: V(x+1/2) - V(x-1/2).
std::vector<double> half_shift_difference(const std::vector<double>& V,
                                          const Grid& grid);

// One row of the delta-sweep diagnostics table.
struct SweepRow {
  double delta;
  double eps;
  double mu;
  double sigma;
  double p;
  double H;
  double err_R_inf;          // ||R - R_hat||_inf  against the matched profile
  double err_V_inf;          // ||V - V_hat||_inf
  double err_mu_scaled;      // eps^{-1} |mu - mu_hat|
  double err_sigma_scaled;   // eps^{m} |sigma - sigma_hat|
  double eps_over_delta;
};

SweepRow sweep_row(const WaveSolution& w, const LimitOde& ode);

// Central-difference non-degeneracy scalars d(sigma)/d(delta), dH/d(delta)
// at the interior points of a delta ladder. Each derivative uses a small
// local relative step; halving the step gives a Richardson error estimate.
struct NondegeneracyRow {
  double delta;
  double sigma;
  double H;
  double dsigma_ddelta;
  double dH_ddelta;
  double dsigma_err;  // |D_eta - D_{eta/2}| / 3 step-halving estimate
  double dH_err;
};

std::vector<NondegeneracyRow> nondegeneracy(const PotentialParams& params,
                                            const Grid& grid,
                                            const std::vector<double>& deltas);

}  // namespace fpuwave
