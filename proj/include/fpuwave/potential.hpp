#pragma once

#include <stdexcept>

namespace fpuwave {

// Interaction potential with a hard singularity as r -> 1:
//   phi(r)   = ((1-r)^{-m} - m r - 1) / (m (m+1))
//   phi'(r)  = ((1-r)^{-m-1} - 1) / (m+1)
//   phi''(r) = (1-r)^{-m-2}
// normalized so that phi(0) = phi'(0) = 0 and phi''(0) = 1.
struct PotentialParams {
  double m;

  explicit PotentialParams(double exponent) : m(exponent) {
    if (!(m > 1.0)) {
      throw std::domain_error("PotentialParams: exponent m must be > 1");
    }
  }
};

// Evaluate the potential or one of its first two derivatives at r < 1.
// order: 0 -> phi, 1 -> phi', 2 -> phi''.
// Throws std::domain_error for r >= 1 (singularity barrier) or invalid order.
double eval_potential(const PotentialParams& params, double r, int order);

}  // namespace fpuwave
