#pragma once

#include <vector>

#include "fpuwave/grid.hpp"
#include "fpuwave/wave.hpp"

namespace fpuwave {

// Critical exponential weight: the unique positive root of
//   sinh(a/2) / (a/2) = c,  c > 1.
// For 0 < a < a_crit(c) the half-shift difference stays invertible on the
// weighted space. Residual of the returned root is <= 1e-13.
// Throws std::domain_error for c <= 1 (no positive root).
double a_crit(double c);

// Fredholm margin b* = a - (2/c) sinh(a/2); positive for 0 < a < a_crit(c),
// zero exactly at the critical weight.
double spectral_margin(double c, double a);

// Sampled essential-spectrum curves  lambda = P±(ik - a)  with
//   P±(z) = z ± (2/c) sinh(z/2),
// for k in [-kmax, kmax] at nk equispaced samples (nk odd keeps k = 0 on
// the sample set). max_re is the maximum sampled real part over both
// branches; it equals -spectral_margin(c, a), attained at k = 0 on the
// minus branch.
struct EssentialSpectrum {
  std::vector<double> k;
  std::vector<double> re_plus, im_plus;
  std::vector<double> re_minus, im_minus;
  double max_re = 0.0;
};

EssentialSpectrum essential_spectrum(double c, double a, double kmax, int nk);

// First-order linearization applied to a profile pair (S, W):
//   row 1:  S' - [W(x+1/2) - W(x-1/2)]
//   row 2:  W' - (1/sigma) [ (Q S)(x+1/2) - (Q S)(x-1/2) ],   Q = phi''(R).
// Derivatives use fourth-order stencils (one-sided at the edges); the
// half-shifts are exact K-node offsets with zero extension.
// The derivative pair (dR/dx, dV/dx) of the wave itself lies in the kernel
// up to discretization error.
struct OperatorPair {
  std::vector<double> S;
  std::vector<double> W;
};

OperatorPair apply_linearization(const WaveSolution& w,
                                 const std::vector<double>& S,
                                 const std::vector<double>& W);

// Inverse of the half-shift difference on decaying data:
//   W(x) = -sum_{j>=0} F(x + 1/2 + j),   truncated at the grid edge,
// so that W(x+1/2) - W(x-1/2) = F(x) exactly on interior nodes.
// Requires a > 0 (the weighted space on which the inverse is bounded);
// warns if F has not decayed at the right boundary.
std::vector<double> invert_nabla(const std::vector<double>& F, double a,
                                 const Grid& grid);

}  // namespace fpuwave
