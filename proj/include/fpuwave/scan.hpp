#pragma once

#include <vector>

#include "fpuwave/wave.hpp"

namespace fpuwave {

// The weighted second-order reduction of the linearization,
//   M G = (d/dx - a)^2 G - (1/sigma) [ e^{-a} Q(x+1) G(x+1)
//                                     + e^{+a} Q(x-1) G(x-1) - 2 Q(x) G(x) ],
// discretized with fourth-order stencils on a uniform cyclic grid covering
// [-half_width, half_width). The wave's Q = phi''(R) is extended by its
// far-field value 1, and the +-1 shifts are exact 2K-node index offsets
// (cyclic). The periodic closure avoids boundary kernels of the truncated
// advance-delay operator; half_width > X of the wave grid gives the wrap
// rows constant coefficients.

// Nodes of the cyclic grid: x_i = -half_width + i h, i = 0..n-1, h = 1/(2K).
std::vector<double> cyclic_nodes(int K, double half_width);

// Apply M built from a converged wave at weight a.
// G must have size 2*half_width*2K.
std::vector<double> apply_second_order(const WaveSolution& w, double a,
                                       double half_width,
                                       const std::vector<double>& G);

// Constant-coefficient variant (Q and sigma fixed) for symbol checks.
std::vector<double> apply_second_order_constant(double Q, double sigma,
                                                double a, int K,
                                                double half_width,
                                                const std::vector<double>& G);

// Direct solve with the constant-coefficient operator (invertibility check).
std::vector<double> solve_second_order_constant(double Q, double sigma,
                                                double a, int K,
                                                double half_width,
                                                const std::vector<double>& rhs);

// Translation-mode surrogate on the cyclic grid: e^{a x} times the
// half-shift difference of V (zero-padded onto the extension), unnormalized.
// Its image under M vanishes as O(h^2).
std::vector<double> translation_seed(const WaveSolution& w, double a,
                                     double half_width);

struct ScanOptions {
  double half_width = 8.0;
  int block = 10;       // subspace dimension (>= 6 values reported)
  int iterations = 40;  // block inverse-iteration sweeps
  unsigned seed = 5;    // random block completion
  bool with_sectors = true;
};

// Result of the small-singular-value scan of M.
struct KernelScanReport {
  double a = 0.0;
  double a_c = 0.0;
  double half_width = 0.0;
  // Ascending Ritz singular values of the iterated subspace; the first is
  // refined by an extended-precision matrix-vector product.
  std::vector<double> singular_values;
  double translation_correlation = 0.0;  // |<v1, normalized seed>|
  int kernel_count = 0;          // leading run with sv[i] < 0.1 sv[i+1]
  bool zero_singular_value = false;  // sv[0] < 1e-4 median && < 0.1 sv[1]
  bool inconclusive = false;         // gap sv[1]/sv[0] below 10
  // Parity-sector minima (the kernel must live in the odd sector; the even
  // restriction must stay boundedly invertible). Zero when sectors skipped.
  double even_min_sv = 0.0;
  double even_second_sv = 0.0;
  double odd_first_sv = 0.0;
  double odd_second_sv = 0.0;
  std::vector<double> kernel_vector;  // minimal right-singular vector
  std::vector<double> nodes;
};

// Block inverse iteration on M^T M seeded with the translation surrogate,
// followed by a Ritz extraction in extended precision; optionally restricts
// to the exponential-weight-corrected even/odd sectors and reports their
// smallest singular values.
// Requires 0 < a < a_crit(sqrt(sigma)).
KernelScanReport kernel_scan(const WaveSolution& w, double a,
                             const ScanOptions& opts = {});

}  // namespace fpuwave
