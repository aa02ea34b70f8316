#include "fpuwave/potential.hpp"

#include <cmath>

namespace fpuwave {

namespace {

// (1-r)^{-p} computed via exp(-p*log1p(-r)): accurate both near r=0,
// where log1p avoids cancellation, and near r=1, where the pole is steep.
double inv_power(double r, double p) { return std::exp(-p * std::log1p(-r)); }

}  // namespace

double eval_potential(const PotentialParams& params, double r, int order) {
  if (r >= 1.0) {
    throw std::domain_error("eval_potential: r >= 1 (singularity reached)");
  }
  const double m = params.m;
  switch (order) {
    case 0:
      return (inv_power(r, m) - m * r - 1.0) / (m * (m + 1.0));
    case 1:
      return (inv_power(r, m + 1.0) - 1.0) / (m + 1.0);
    case 2:
      return inv_power(r, m + 2.0);
    default:
      throw std::domain_error("eval_potential: order must be 0, 1 or 2");
  }
}

}  // namespace fpuwave
