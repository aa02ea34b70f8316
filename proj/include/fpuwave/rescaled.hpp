#pragma once

#include <vector>

#include "fpuwave/grid.hpp"
#include "fpuwave/limit_ode.hpp"
#include "fpuwave/potential.hpp"
#include "fpuwave/scan.hpp"
#include "fpuwave/wave.hpp"

namespace fpuwave {

// Coefficient of the collapsed second-order problem, built from the limit
// table:  P(xt) = mu_bar^{-2} (1 + S(|xt|/mu_bar))^{-(m+2)}.
// Even, positive, decaying like |xt|^{-(m+2)}; P(0) = m(m+1)/4.
double limit_coefficient(const LimitOde& ode, double xt);

std::vector<double> build_limit_coefficient(const LimitOde& ode,
                                            const std::vector<double>& xt);

// The two-dimensional solution space of  T'' = -2 P T  with the far-field
// normalization  To -> 1  and  Te' -> 1  as xt -> +infinity.
//
//   To(xt) = sign(xt) S'(|xt|/mu_bar) / mu_bar   (odd, closed form),
//   Te     = even shot from (1, 0), rescaled by the measured limit slope.
//
// The construction ships its own certificates: a finite-difference check of
// To'' = -2 P To (anchoring the explicit coefficient to the equation), the
// drift of the Wronskian Te To' - Te' To, and the far-field envelope bounds.
struct CollapsePair {
  const LimitOde* ode = nullptr;
  double range = 400.0;  // xt extent of the even-branch table
  double step = 1e-3;
  std::vector<double> te;   // Te at nodes i*step
  std::vector<double> tep;  // Te' at the same nodes
  double te0 = 0.0;         // Te(0) after far-slope normalization (~ -2/m)
  double far_slope = 0.0;   // measured un-normalized limit slope of the shot
  double to_certificate = 0.0;   // sup |To'' + 2 P To| (centered differences)
  double wronskian_drift = 0.0;  // sup |W(xt) - W(0)|
  double bound_affine = 0.0;     // sup |Te' xt - Te|
  double bound_slope = 0.0;      // sup |(Te' - 1) xt^m|
  double bound_to = 0.0;         // sup |To' xt^m|

  double eval_te(double xt) const;        // even extension, Hermite table
  double eval_te_prime(double xt) const;  // odd extension of the slope
  double eval_to(double xt) const;
  double eval_to_prime(double xt) const;  // even; value m/2 at 0
};

// Throws std::runtime_error if the measured limit slope degenerates
// (|slope| < 1e-6) and std::domain_error for invalid range/step or a limit
// table too short for range/mu_bar.
CollapsePair solve_collapse_pair(const LimitOde& ode, double range = 400.0,
                                 double step = 1e-3);

// Anticausal kernel of (d/dxt - b)^{-2}:  -xt e^{b xt} for xt < 0, else 0.
double green_kernel(double b, double xt);

// Discrete convolution of the kernel against samples F on a uniform grid of
// spacing ht (trapezoid end weights). Output aligned with the input grid.
std::vector<double> green_convolve(const std::vector<double>& F, double b,
                                   double ht);

// Weighted shift Laplacian e^{-a} F(. + s) + e^{a} F(. - s) - 2 F with
// s = shift_nodes grid points; F is taken as zero beyond the edges.
std::vector<double> shift_laplacian(const std::vector<double>& F, double a,
                                    int shift_nodes);

// Empirical uniformity report for the smoothing bounds of the kernel:
//   lam^2 ||u||_2 + lam ||u'||_2 + ||u''||_2  <= C ||F||_2,
//   sqrt(lam)  ||u'||_inf                     <= C ||F||_2,
//              ||u'||_inf                     <= C ||F||_1,
// with u = kernel * F, over seeded random decaying test functions, one weight
// parameter per delta (lam = mu/mu_bar, b = lam a, a = half the critical
// weight). Also checks the aligned-grid commutation identity
// kernel*(shiftLap F) = (shiftLap kernel)*F.
struct GreenBoundsReport {
  std::vector<double> deltas;
  std::vector<double> c_smooth;    // max over trials, per delta
  std::vector<double> c_grad_l2;   // max over trials, per delta
  std::vector<double> c_grad_l1;   // max over trials, per delta
  double worst_ratio = 0.0;        // max across families of max/min over delta
  double commutation_sup = 0.0;    // worst aligned-grid commutation defect
};

GreenBoundsReport green_bounds(const PotentialParams& params, const Grid& grid,
                               const std::vector<double>& deltas, int trials,
                               unsigned seed);

// Tip-rescaled kernel vector and its collapse onto the (Te, To) pair.
//
// Unit: lambda = mu/mu_bar, xt = x/lambda (so the shift by one lattice site
// is exactly 2K nodes on the inherited grid). S = e^{-a x} v with v the
// scanned kernel vector, sign-fixed so S'(0) > 0, normalized by
//   |G(0)| + ||P G||_1 + ||P G||_2 = 1,   G = e^{a x} S.
// Fits c_e = S(0)/Te(0), c_o = S'(0)/To'(0) and reports the collapse
// sup-residual, the fixed-point defect of G = kernel*(shiftLap(Qt G)), the
// second-order replacement defects E0 = S'' + 2 P S and
// Ep = S''(. + 1/lambda) - P S with their weighted integrals, and the raw
// perturbation profile Zt = lambda^{-(m+2)} (Qt - P).
struct RescaledKernel {
  double delta = 0.0;
  double lambda = 0.0;  // tip length unit mu/mu_bar
  double a = 0.0;       // weight in the x variable
  double b = 0.0;       // weight in the xt variable, lambda*a
  int i0 = 0;           // index of xt = 0
  int shift_nodes = 0;  // 2K: one lattice site in grid nodes
  std::vector<double> xt;
  std::vector<double> St;
  std::vector<double> Gt;
  std::vector<double> Qt;
  std::vector<double> Pt;
  std::vector<double> Te;
  std::vector<double> To;
  std::vector<double> Zt;  // raw single-grid profile on the full grid
  double c_e = 0.0;
  double c_o = 0.0;
  double sup_residual = 0.0;  // sup over the tip window |St - ce Te - co To|
  double fp_residual = 0.0;   // sup over the tip window fixed-point defect
  double e0_sup = 0.0;
  double ep_sup = 0.0;
  double int0 = 0.0;  // integral of |E0|+|Ep| over the tip window
  double int1 = 0.0;  // same with weight |xt|
  double z_sup = 0.0;  // sup |Zt| on the tip window (raw grid)
  double norm_check = 0.0;  // normalization functional after scaling (== 1)
};

RescaledKernel rescale_and_fit(const WaveSolution& w,
                               const KernelScanReport& scan,
                               const LimitOde& ode, const CollapsePair& pair);

// Perturbation profile with the tip bias removed by step-halving
// extrapolation of the wave (requires fine.grid.K == 2 * coarse.grid.K).
struct PerturbationReport {
  double delta = 0.0;
  double sigma_refined = 0.0;
  double eps_refined = 0.0;
  double lambda_refined = 0.0;
  double z_sup = 0.0;  // sup |Zt| over the tip window
};

PerturbationReport perturbation_profile(const WaveSolution& coarse,
                                        const WaveSolution& fine,
                                        const LimitOde& ode);

}  // namespace fpuwave
