#include "fpuwave/limit_ode.hpp"

#include <cmath>
#include <cstddef>
#include <stdexcept>

namespace fpuwave {

namespace {

double rhs(double m, double s_value) {
  return (2.0 / (m + 1.0)) * std::pow(1.0 + s_value, -(m + 1.0));
}

// Hermite cubic on one table cell: values y0,y1 and end-slopes d0,d1
// (slopes already scaled by the cell width).
double hermite(double t, double y0, double y1, double d0, double d1) {
  const double t2 = t * t;
  const double t3 = t2 * t;
  return (2.0 * t3 - 3.0 * t2 + 1.0) * y0 + (t3 - 2.0 * t2 + t) * d0 +
         (-2.0 * t3 + 3.0 * t2) * y1 + (t3 - t2) * d1;
}

}  // namespace

double LimitOde::curvature(double s_value) const { return rhs(m, s_value); }

double LimitOde::eval_s(double xbar) const {
  if (xbar < 0.0 || xbar > xbar_max * (1.0 + 1e-12)) {
    throw std::out_of_range("LimitOde::eval_s: xbar outside tabulated range");
  }
  const double pos = std::min(xbar / step, static_cast<double>(s.size() - 1));
  const auto i = static_cast<std::size_t>(pos);
  if (i + 1 >= s.size()) return s.back();
  const double t = pos - static_cast<double>(i);
  return hermite(t, s[i], s[i + 1], step * sp[i], step * sp[i + 1]);
}

double LimitOde::eval_sp(double xbar) const {
  if (xbar < 0.0 || xbar > xbar_max * (1.0 + 1e-12)) {
    throw std::out_of_range("LimitOde::eval_sp: xbar outside tabulated range");
  }
  const double pos = std::min(xbar / step, static_cast<double>(sp.size() - 1));
  const auto i = static_cast<std::size_t>(pos);
  if (i + 1 >= sp.size()) return sp.back();
  const double t = pos - static_cast<double>(i);
  return hermite(t, sp[i], sp[i + 1], step * rhs(m, s[i]), step * rhs(m, s[i + 1]));
}

double LimitOde::s_even(double xbar) const { return eval_s(std::abs(xbar)); }

double LimitOde::sp_odd(double xbar) const {
  const double value = eval_sp(std::abs(xbar));
  return xbar < 0.0 ? -value : value;
}

double LimitOde::w_profile(double xbar) const {
  return 0.5 * (sp_odd(xbar) + mu_bar);
}

double LimitOde::t_profile(double xbar) const {
  return 0.5 * (s_even(xbar) + mu_bar * xbar + kappa_bar);
}

LimitOde solve_limit_ode(double m, double xbar_max, double step) {
  if (!(m > 1.0)) throw std::domain_error("solve_limit_ode: m must be > 1");
  if (!(xbar_max > 0.0) || !(step > 0.0)) {
    throw std::domain_error("solve_limit_ode: xbar_max and step must be positive");
  }

  LimitOde ode;
  ode.m = m;
  ode.step = step;
  const auto n = static_cast<std::size_t>(std::llround(xbar_max / step));
  ode.xbar_max = static_cast<double>(n) * step;
  ode.s.resize(n + 1);
  ode.sp.resize(n + 1);
  ode.mu_bar = 2.0 / std::sqrt(m * (m + 1.0));

  double s_val = 0.0;
  double p_val = 0.0;
  ode.s[0] = 0.0;
  ode.sp[0] = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double k1s = p_val, k1p = rhs(m, s_val);
    const double k2s = p_val + 0.5 * step * k1p, k2p = rhs(m, s_val + 0.5 * step * k1s);
    const double k3s = p_val + 0.5 * step * k2p, k3p = rhs(m, s_val + 0.5 * step * k2s);
    const double k4s = p_val + step * k3p, k4p = rhs(m, s_val + step * k3s);
    s_val += step * (k1s + 2.0 * k2s + 2.0 * k3s + k4s) / 6.0;
    p_val += step * (k1p + 2.0 * k2p + 2.0 * k3p + k4p) / 6.0;
    ode.s[i + 1] = s_val;
    ode.sp[i + 1] = p_val;
  }

  // First integral: S'^2 = mu_bar^2 - (4/(m(m+1))) (1+S)^{-m}. Its drift is
  // the integrator's error monitor.
  const double coeff = 4.0 / (m * (m + 1.0));
  double max_resid = 0.0;
  for (std::size_t i = 0; i <= n; ++i) {
    const double resid = std::abs(ode.sp[i] * ode.sp[i] - ode.mu_bar * ode.mu_bar +
                                  coeff * std::pow(1.0 + ode.s[i], -m));
    max_resid = std::max(max_resid, resid);
  }
  ode.energy_residual = max_resid;
  if (max_resid > 1e-6) {
    throw std::runtime_error("solve_limit_ode: first-integral drift exceeds 1e-6 (step too large)");
  }

  // kappa, route 1: Simpson quadrature of x S''(x) over the table plus the
  // analytic tail with the affine closure S ~ mu_bar*x - kappa, iterated.
  const std::size_t n_simpson = (n % 2 == 0) ? n : n - 1;
  double quad = 0.0;
  {
    auto f = [&](std::size_t i) {
      return static_cast<double>(i) * step * rhs(m, ode.s[i]);
    };
    double sum = f(0) + f(n_simpson);
    for (std::size_t i = 1; i < n_simpson; i += 2) sum += 4.0 * f(i);
    for (std::size_t i = 2; i < n_simpson; i += 2) sum += 2.0 * f(i);
    quad = sum * step / 3.0;
    if (n_simpson != n) {
      // one trapezoid cell to reach the table end
      quad += 0.5 * step * (f(n - 1) + f(n));
    }
  }
  const double X = ode.xbar_max;
  const double mu = ode.mu_bar;
  double kappa = 0.0;
  for (int pass = 0; pass < 2; ++pass) {
    const double c = 1.0 - kappa;
    const double U = mu * X + c;
    const double tail = (2.0 / ((m + 1.0) * mu * mu)) *
                        (std::pow(U, 1.0 - m) / (m - 1.0) - c * std::pow(U, -m) / m);
    kappa = quad + tail;
  }
  ode.kappa_bar = kappa;

  // kappa, route 2: S'(X)X - S(X) increases to kappa with an O(1/X^{m-1})
  // gap; eliminate the leading term by extrapolating X/2 -> X.
  {
    auto lim_at = [&](double x_eval) {
      return ode.eval_sp(x_eval) * x_eval - ode.eval_s(x_eval);
    };
    const double lx = lim_at(X);
    const double lh = lim_at(0.5 * X);
    const double w = std::pow(0.5, m - 1.0);  // gap scales like X^{1-m}
    ode.kappa_bar_limit = (lx - w * lh) / (1.0 - w);
  }
  return ode;
}

double AsymptoticProfiles::eval_R(double x) const {
  const double ax = std::abs(x);
  if (ax < 0.5) {
    return 1.0 - eps - eps * ode->s_even(ax / mu_hat);
  }
  if (ax < 1.5) {
    return eps * ode->t_profile((1.0 - ax) / mu_hat);
  }
  return 0.0;
}

double AsymptoticProfiles::eval_V(double x) const {
  const double ax = std::abs(x);
  if (ax < 1.0) {
    return (eps / mu_hat) * ode->w_profile((0.5 - ax) / mu_hat);
  }
  return 0.0;
}

AsymptoticProfiles make_hat_profiles(const LimitOde& ode, double eps) {
  if (!(eps > 0.0 && eps < 1.0)) {
    throw std::domain_error("make_hat_profiles: eps must lie in (0,1)");
  }
  AsymptoticProfiles profiles{};
  profiles.ode = &ode;
  profiles.eps = eps;
  profiles.mu_hat = ode.mu_bar * eps / (1.0 + eps * (ode.kappa_bar - 1.0));
  profiles.sigma_hat = std::pow(eps, -ode.m - 2.0) * profiles.mu_hat * profiles.mu_hat;
  if (0.5 / profiles.mu_hat > ode.xbar_max) {
    throw std::out_of_range("make_hat_profiles: S table too short for this eps");
  }
  return profiles;
}

InterfaceJumps interface_jump(const LimitOde& ode, double eps) {
  const AsymptoticProfiles profiles = make_hat_profiles(ode, eps);
  const double mu = profiles.mu_hat;
  InterfaceJumps jumps{};
  jumps.r_at_half = std::abs((1.0 - eps - eps * ode.s_even(0.5 / mu)) -
                             eps * ode.t_profile(0.5 / mu));
  jumps.r_at_three_half = std::abs(eps * ode.t_profile(-0.5 / mu));
  jumps.v_at_one = std::abs((eps / mu) * ode.w_profile(-0.5 / mu));
  return jumps;
}

}  // namespace fpuwave
