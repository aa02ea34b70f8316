#pragma once

#include <vector>

namespace fpuwave {

// Tabulated solution of the scalar limit problem
//   S''(x) = (2/(m+1)) (1+S(x))^{-(m+1)},  S(0) = S'(0) = 0,
// together with the derived constants
//   mu_bar    = 2/sqrt(m(m+1))          (far-field slope of S)
//   kappa_bar = int_0^inf x S''(x) dx    (first moment of the curvature).
//
// S grows asymptotically like mu_bar*x - kappa_bar; S' increases to mu_bar.
struct LimitOde {
  double m = 2.0;
  double xbar_max = 50.0;
  double step = 1e-3;
  std::vector<double> s;   // S at nodes i*step
  std::vector<double> sp;  // S' at the same nodes
  double mu_bar = 0.0;
  double kappa_bar = 0.0;        // quadrature + analytic tail route
  double kappa_bar_limit = 0.0;  // extrapolated S'(X)X - S(X) route
  double energy_residual = 0.0;  // max over samples of the first-integral defect

  // Curvature S'' from the ODE right-hand side.
  double curvature(double s_value) const;

  // Cubic-Hermite evaluation for arbitrary xbar in [0, xbar_max];
  // argument outside the table throws std::out_of_range.
  double eval_s(double xbar) const;
  double eval_sp(double xbar) const;

  // Even/odd extensions used by the profile formulas:
  //   S extended evenly, S' oddly.
  double s_even(double xbar) const;
  double sp_odd(double xbar) const;

  // Switch and corner profiles:
  //   W(x) = (sp_odd(x) + mu_bar)/2   rises from 0 to mu_bar,
  //   T(x) = (s_even(x) + mu_bar*x + kappa_bar)/2   rises from 0 to mu_bar*x.
  double w_profile(double xbar) const;
  double t_profile(double xbar) const;
};

// Fixed-step fourth-order integration of the limit problem. Throws
// std::runtime_error if the first-integral drift exceeds 1e-6 (step too
// large) and std::domain_error for invalid arguments.
LimitOde solve_limit_ode(double m, double xbar_max, double step);

// Compact piecewise approximations of the wave profiles built from the
// limit solution at tip amplitude eps:
//   R(x) = 1 - eps - eps*S(|x|/mu)    for |x| <  1/2
//        = eps*T((1-|x|)/mu)          for 1/2 <= |x| < 3/2
//        = 0                          else
//   V(x) = (eps/mu)*W((1/2-|x|)/mu)   for |x| < 1, else 0
// with mu = mu_bar*eps/(1 + eps*(kappa_bar-1)) and the matched speed
// parameter sigma = eps^{-m-2} mu^2.
struct AsymptoticProfiles {
  const LimitOde* ode;
  double eps;
  double mu_hat;
  double sigma_hat;

  double eval_R(double x) const;
  double eval_V(double x) const;
};

AsymptoticProfiles make_hat_profiles(const LimitOde& ode, double eps);

// Absolute branch mismatches of the piecewise formulas at |x| = 1/2,
// |x| = 3/2 (R branches) and |x| = 1 (V branches).
struct InterfaceJumps {
  double r_at_half;
  double r_at_three_half;
  double v_at_one;
};

InterfaceJumps interface_jump(const LimitOde& ode, double eps);

}  // namespace fpuwave
