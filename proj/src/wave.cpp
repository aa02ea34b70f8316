#include "fpuwave/wave.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <string>

namespace fpuwave {

namespace {

double l2_norm(const std::vector<double>& F, double h) {
  double sum = 0.0;
  for (double f : F) sum += f * f;
  return std::sqrt(sum * h);
}

double quadrature(const std::vector<double>& F, double h) {
  double sum = 0.0;
  for (double f : F) sum += f;
  return sum * h;
}

void check_even(const std::vector<double>& F, const char* what) {
  const int n = static_cast<int>(F.size());
  double max_abs = 0.0;
  for (double f : F) max_abs = std::max(max_abs, std::abs(f));
  for (int i = 0; i < n / 2; ++i) {
    if (std::abs(F[i] - F[n - 1 - i]) > 1e-11 * std::max(1.0, max_abs)) {
      throw std::runtime_error(std::string("solve_wave: evenness lost in ") + what);
    }
  }
}

void check_unimodal(const std::vector<double>& F, const char* what) {
  const int n = static_cast<int>(F.size());
  const int c = (n - 1) / 2;
  double max_abs = 0.0;
  for (double f : F) max_abs = std::max(max_abs, std::abs(f));
  for (int i = c; i + 1 < n; ++i) {
    if (F[i + 1] > F[i] + 1e-11 * std::max(1.0, max_abs)) {
      throw std::runtime_error(std::string("solve_wave: unimodality lost in ") + what);
    }
  }
}

}  // namespace

std::vector<double> box_average(const std::vector<double>& F, const Grid& grid) {
  const int n = static_cast<int>(F.size());
  const int K = grid.K;
  const double h = grid.h();
  // The sliding average treats F as zero beyond the grid, which is only
  // valid if F has decayed there. Warn once per process if it has not.
  static std::atomic<bool> warned{false};
  const double edge = std::max(std::abs(F.front()), std::abs(F.back()));
  if (edge > 1e-14 && !warned.exchange(true)) {
    std::fprintf(stderr,
                 "box_average: input magnitude %.3e at the grid boundary "
                 "exceeds the 1e-14 decay assumption\n",
                 edge);
  }
  // prefix[i] = integral of F from node 0 to node i (composite trapezoid)
  std::vector<double> prefix(n, 0.0);
  for (int i = 1; i < n; ++i) {
    prefix[i] = prefix[i - 1] + 0.5 * h * (F[i - 1] + F[i]);
  }
  std::vector<double> out(n);
  for (int i = 0; i < n; ++i) {
    const int lo = std::max(i - K, 0);
    const int hi = std::min(i + K, n - 1);
    out[i] = prefix[hi] - prefix[lo];
  }
  return out;
}

WaveSolution solve_wave(const PotentialParams& params, double delta,
                        const Grid& grid, double tol, int max_iter) {
  if (!(delta > 0.0 && delta < 0.5)) {
    throw std::domain_error("solve_wave: delta must lie in (0, 1/2)");
  }
  const int n = grid.size();
  const double h = grid.h();
  const double target = 1.0 - delta;

  // Seed: unit-box indicator with edges smoothed over 4h, normalized.
  std::vector<double> V(n);
  for (int i = 0; i < n; ++i) {
    const double x = grid.node(i);
    V[i] = std::clamp((0.5 + 2.0 * h - std::abs(x)) / (4.0 * h), 0.0, 1.0);
  }
  {
    const double nrm = l2_norm(V, h);
    for (double& v : V) v *= target / nrm;
  }

  // Relative fixed-point residual ||sigma V - A phi'(A V)||_2 / sigma
  // for the current iterate; also returns R = A V through the out-param.
  auto fixed_point_residual = [&](const std::vector<double>& Vc, double sig,
                                  std::vector<double>& R_out) {
    R_out = box_average(Vc, grid);
    std::vector<double> Wp(n);
    for (int i = 0; i < n; ++i) Wp[i] = eval_potential(params, R_out[i], 1);
    const std::vector<double> Tp = box_average(Wp, grid);
    double resid = 0.0;
    for (int i = 0; i < n; ++i) {
      const double d = sig * Vc[i] - Tp[i];
      resid += d * d;
    }
    return std::sqrt(resid * h) / sig;
  };

  std::vector<double> R, W, T;
  double sigma = 0.0;
  double residual = 0.0;
  double p_prev = -1.0;
  double p_now = 0.0;
  bool converged = false;
  int it = 0;
  for (; it < max_iter; ++it) {
    R = box_average(V, grid);
    if (R[grid.center()] >= 1.0) {
      throw std::runtime_error("solve_wave: iterate touched the singularity barrier");
    }
    p_now = 0.0;
    for (double r : R) p_now += eval_potential(params, r, 0);
    p_now *= h;
    // p grows along the iteration; tolerate rounding jitter in the h-weighted
    // sum, which scales with the magnitude of p itself near the fixed point
    if (p_prev >= 0.0 && p_now < p_prev - 1e-12 * std::max(1.0, p_prev)) {
      throw std::runtime_error("solve_wave: potential energy decreased along the iteration");
    }
    p_prev = p_now;

    W.resize(n);
    for (int i = 0; i < n; ++i) W[i] = eval_potential(params, R[i], 1);
    T = box_average(W, grid);
    const double nrm = l2_norm(T, h);
    if (!(nrm > 0.0) || !std::isfinite(nrm)) {
      throw std::runtime_error("solve_wave: degenerate iterate norm");
    }
    sigma = nrm / target;

    double iterate_dist = 0.0;
    for (int i = 0; i < n; ++i) {
      const double v_next = target * T[i] / nrm;
      iterate_dist += (v_next - V[i]) * (v_next - V[i]);
      V[i] = v_next;
    }
    iterate_dist = std::sqrt(iterate_dist * h);
    check_even(V, "V");
    check_unimodal(V, "V");
    if (iterate_dist < tol) {
      residual = fixed_point_residual(V, sigma, R);
      if (residual <= tol) {
        converged = true;
        ++it;
        break;
      }
    }
  }
  if (!converged) {
    throw std::runtime_error("solve_wave: max_iter exceeded before convergence");
  }

  WaveSolution w;
  w.grid = grid;
  w.m = params.m;
  w.delta = delta;
  w.V = V;
  w.R = R;
  w.sigma = sigma;
  w.residual = residual;
  w.iterations = it;

  w.eps = 1.0 - w.R[grid.center()];
  w.mu = std::sqrt(w.sigma * std::pow(w.eps, params.m + 2.0));
  {
    std::vector<double> phi_R(n);
    for (int i = 0; i < n; ++i) phi_R[i] = eval_potential(params, w.R[i], 0);
    w.p = quadrature(phi_R, h);
    std::vector<double> kinetic(n);
    for (int i = 0; i < n; ++i) kinetic[i] = 0.5 * V[i] * V[i];
    w.H = quadrature(kinetic, h) + w.p;
  }
  return w;
}

WaveDerivatives wave_derivatives(const WaveSolution& w) {
  const int n = static_cast<int>(w.R.size());
  const double h = w.grid.h();
  auto fourth_order = [&](const std::vector<double>& F) {
    std::vector<double> d(n);
    for (int i = 2; i + 2 < n; ++i) {
      d[i] = (F[i - 2] - 8.0 * F[i - 1] + 8.0 * F[i + 1] - F[i + 2]) / (12.0 * h);
    }
    // one-sided fourth-order stencils at the edges
    auto forward = [&](int i) {
      return (-25.0 * F[i] + 48.0 * F[i + 1] - 36.0 * F[i + 2] + 16.0 * F[i + 3] -
              3.0 * F[i + 4]) /
             (12.0 * h);
    };
    auto backward = [&](int i) {
      return (25.0 * F[i] - 48.0 * F[i - 1] + 36.0 * F[i - 2] - 16.0 * F[i - 3] +
              3.0 * F[i - 4]) /
             (12.0 * h);
    };
    d[0] = forward(0);
    d[1] = forward(1);
    d[n - 2] = backward(n - 2);
    d[n - 1] = backward(n - 1);
    return d;
  };
  return WaveDerivatives{fourth_order(w.R), fourth_order(w.V)};
}

std::vector<double> half_shift_difference(const std::vector<double>& V,
                                          const Grid& grid) {
  const int n = static_cast<int>(V.size());
  const int K = grid.K;
  std::vector<double> out(n);
  for (int i = 0; i < n; ++i) {
    const double plus = (i + K < n) ? V[i + K] : 0.0;
    const double minus = (i - K >= 0) ? V[i - K] : 0.0;
    out[i] = plus - minus;
  }
  return out;
}

SweepRow sweep_row(const WaveSolution& w, const LimitOde& ode) {
  const AsymptoticProfiles hat = make_hat_profiles(ode, w.eps);
  SweepRow row{};
  row.delta = w.delta;
  row.eps = w.eps;
  row.mu = w.mu;
  row.sigma = w.sigma;
  row.p = w.p;
  row.H = w.H;
  row.eps_over_delta = w.eps / w.delta;
  const int n = w.grid.size();
  double err_R = 0.0, err_V = 0.0;
  for (int i = 0; i < n; ++i) {
    const double x = w.grid.node(i);
    err_R = std::max(err_R, std::abs(w.R[i] - hat.eval_R(x)));
    err_V = std::max(err_V, std::abs(w.V[i] - hat.eval_V(x)));
  }
  row.err_R_inf = err_R;
  row.err_V_inf = err_V;
  row.err_mu_scaled = std::abs(w.mu - hat.mu_hat) / w.eps;
  row.err_sigma_scaled = std::pow(w.eps, w.m) * std::abs(w.sigma - hat.sigma_hat);
  return row;
}

std::vector<NondegeneracyRow> nondegeneracy(const PotentialParams& params,
                                            const Grid& grid,
                                            const std::vector<double>& deltas) {
  if (deltas.size() < 3) {
    throw std::domain_error("nondegeneracy: need at least 3 delta values");
  }
  std::vector<NondegeneracyRow> rows;
  // sigma must vary monotonically along the ladder or the solves are suspect
  std::vector<double> sigma_ladder;
  for (double d : deltas) {
    sigma_ladder.push_back(solve_wave(params, d, grid).sigma);
  }
  for (std::size_t i = 1; i + 1 < deltas.size(); ++i) {
    const bool inc = sigma_ladder[i - 1] < sigma_ladder[i] && sigma_ladder[i] < sigma_ladder[i + 1];
    const bool dec = sigma_ladder[i - 1] > sigma_ladder[i] && sigma_ladder[i] > sigma_ladder[i + 1];
    if (!inc && !dec) {
      throw std::runtime_error("nondegeneracy: sigma not monotone along the ladder");
    }
  }

  // Local centered differences with a small relative step eta, plus a
  // Richardson error estimate from the half step.
  for (std::size_t i = 1; i + 1 < deltas.size(); ++i) {
    const double d = deltas[i];
    const WaveSolution here = solve_wave(params, d, grid);
    auto central = [&](double eta, double& dsigma, double& dH) {
      const WaveSolution hi = solve_wave(params, d * (1.0 + eta), grid);
      const WaveSolution lo = solve_wave(params, d * (1.0 - eta), grid);
      dsigma = (hi.sigma - lo.sigma) / (2.0 * d * eta);
      dH = (hi.H - lo.H) / (2.0 * d * eta);
    };
    double ds1, dh1, ds2, dh2;
    central(0.04, ds1, dh1);
    central(0.02, ds2, dh2);
    NondegeneracyRow row{};
    row.delta = d;
    row.sigma = here.sigma;
    row.H = here.H;
    row.dsigma_ddelta = ds2;
    row.dH_ddelta = dh2;
    row.dsigma_err = std::abs(ds2 - ds1) / 3.0;
    row.dH_err = std::abs(dh2 - dh1) / 3.0;
    rows.push_back(row);
  }
  return rows;
}

}  // namespace fpuwave
