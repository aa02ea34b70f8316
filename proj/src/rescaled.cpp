#include "fpuwave/rescaled.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

#include "fpuwave/spectral.hpp"

namespace fpuwave {

namespace {

// Cubic Hermite evaluation on a uniform table (values f, derivatives fp).
double hermite(const std::vector<double>& f, const std::vector<double>& fp,
               double step, double t) {
  const double pos = t / step;
  const int i = std::min(static_cast<int>(pos),
                         static_cast<int>(f.size()) - 2);
  const double u = pos - i;
  const double f0 = f[i], f1 = f[i + 1];
  const double d0 = fp[i] * step, d1 = fp[i + 1] * step;
  const double u2 = u * u, u3 = u2 * u;
  return (2 * u3 - 3 * u2 + 1) * f0 + (u3 - 2 * u2 + u) * d0 +
         (-2 * u3 + 3 * u2) * f1 + (u3 - u2) * d1;
}

// 5-point interior second derivative; edges left untouched (quiet NaN).
std::vector<double> second_derivative(const std::vector<double>& F, double h) {
  const int n = static_cast<int>(F.size());
  std::vector<double> out(n, std::numeric_limits<double>::quiet_NaN());
  const double w = 1.0 / (12.0 * h * h);
  for (int i = 2; i + 2 < n; ++i) {
    out[i] =
        (-F[i - 2] + 16 * F[i - 1] - 30 * F[i] + 16 * F[i + 1] - F[i + 2]) * w;
  }
  return out;
}

std::vector<double> first_derivative(const std::vector<double>& F, double h) {
  const int n = static_cast<int>(F.size());
  std::vector<double> out(n, std::numeric_limits<double>::quiet_NaN());
  const double w = 1.0 / (12.0 * h);
  for (int i = 2; i + 2 < n; ++i) {
    out[i] = (F[i - 2] - 8 * F[i - 1] + 8 * F[i + 1] - F[i + 2]) * w;
  }
  return out;
}

double norm_l2(const std::vector<double>& F, double h) {
  double s = 0.0;
  for (double v : F) {
    if (std::isfinite(v)) s += v * v;
  }
  return std::sqrt(s * h);
}

double norm_l1(const std::vector<double>& F, double h) {
  double s = 0.0;
  for (double v : F) {
    if (std::isfinite(v)) s += std::abs(v);
  }
  return s * h;
}

double norm_sup(const std::vector<double>& F) {
  double s = 0.0;
  for (double v : F) {
    if (std::isfinite(v)) s = std::max(s, std::abs(v));
  }
  return s;
}

}  // namespace

double limit_coefficient(const LimitOde& ode, double xt) {
  const double mu = ode.mu_bar;
  const double s = ode.eval_s(std::abs(xt) / mu);
  return std::pow(1.0 + s, -(ode.m + 2.0)) / (mu * mu);
}

std::vector<double> build_limit_coefficient(const LimitOde& ode,
                                            const std::vector<double>& xt) {
  std::vector<double> out(xt.size());
  for (std::size_t i = 0; i < xt.size(); ++i) {
    out[i] = limit_coefficient(ode, xt[i]);
  }
  return out;
}

double CollapsePair::eval_te(double xt) const {
  const double t = std::abs(xt);
  if (t > range + 1e-12) {
    throw std::out_of_range("CollapsePair: argument beyond the even table");
  }
  return hermite(te, tep, step, std::min(t, range));
}

double CollapsePair::eval_te_prime(double xt) const {
  const double t = std::abs(xt);
  if (t > range + 1e-12) {
    throw std::out_of_range("CollapsePair: argument beyond the even table");
  }
  // derivative table for Te' is Te'' = -2 P Te, taken from the equation
  const double pos = std::min(t, range) / step;
  const int i =
      std::min(static_cast<int>(pos), static_cast<int>(te.size()) - 2);
  const double u = pos - i;
  const double f0 = tep[i], f1 = tep[i + 1];
  const double x0 = i * step, x1 = (i + 1) * step;
  const double d0 = -2.0 * limit_coefficient(*ode, x0) * te[i] * step;
  const double d1 = -2.0 * limit_coefficient(*ode, x1) * te[i + 1] * step;
  const double u2 = u * u, u3 = u2 * u;
  const double val = (2 * u3 - 3 * u2 + 1) * f0 + (u3 - 2 * u2 + u) * d0 +
                     (-2 * u3 + 3 * u2) * f1 + (u3 - u2) * d1;
  return (xt < 0.0) ? -val : val;
}

double CollapsePair::eval_to(double xt) const {
  const double mu = ode->mu_bar;
  const double v = ode->eval_sp(std::abs(xt) / mu) / mu;
  return (xt < 0.0) ? -v : v;
}

double CollapsePair::eval_to_prime(double xt) const {
  const double mu = ode->mu_bar;
  const double s = ode->eval_s(std::abs(xt) / mu);
  return ode->curvature(s) / (mu * mu);
}

CollapsePair solve_collapse_pair(const LimitOde& ode, double range,
                                 double step) {
  if (!(range > 10.0) || !(step > 0.0) || !(step < 0.1)) {
    throw std::domain_error("solve_collapse_pair: invalid range or step");
  }
  if (ode.xbar_max + 1e-9 < range / ode.mu_bar) {
    throw std::domain_error(
        "solve_collapse_pair: limit table too short for the requested range");
  }
  CollapsePair pair;
  pair.ode = &ode;
  pair.range = range;
  pair.step = step;
  const int n = static_cast<int>(std::lround(range / step));
  pair.range = n * step;
  pair.te.resize(n + 1);
  pair.tep.resize(n + 1);

  // forward shot of the even branch from (1, 0)
  auto rhs = [&ode](double x, double T, double Tp, double& dT, double& dTp) {
    dT = Tp;
    dTp = -2.0 * limit_coefficient(ode, x) * T;
  };
  double T = 1.0, Tp = 0.0;
  pair.te[0] = T;
  pair.tep[0] = Tp;
  for (int i = 0; i < n; ++i) {
    const double x = i * step;
    double k1T, k1P, k2T, k2P, k3T, k3P, k4T, k4P;
    rhs(x, T, Tp, k1T, k1P);
    rhs(x + 0.5 * step, T + 0.5 * step * k1T, Tp + 0.5 * step * k1P, k2T, k2P);
    rhs(x + 0.5 * step, T + 0.5 * step * k2T, Tp + 0.5 * step * k2P, k3T, k3P);
    rhs(x + step, T + step * k3T, Tp + step * k3P, k4T, k4P);
    T += (step / 6.0) * (k1T + 2 * k2T + 2 * k3T + k4T);
    Tp += (step / 6.0) * (k1P + 2 * k2P + 2 * k3P + k4P);
    pair.te[i + 1] = T;
    pair.tep[i + 1] = Tp;
  }
  pair.far_slope = Tp;
  if (std::abs(pair.far_slope) < 1e-6) {
    throw std::runtime_error(
        "solve_collapse_pair: degenerate far-field normalization");
  }
  for (double& v : pair.te) v /= pair.far_slope;
  for (double& v : pair.tep) v /= pair.far_slope;
  pair.te0 = pair.te[0];

  // certificate: the odd closed form satisfies the same equation
  const double cert_range = std::min(40.0, range - step);
  double cert = 0.0;
  for (double x = step; x <= cert_range; x += step) {
    const double d2 = (pair.eval_to(x + step) - 2.0 * pair.eval_to(x) +
                       pair.eval_to(x - step)) /
                      (step * step);
    cert = std::max(
        cert, std::abs(d2 + 2.0 * limit_coefficient(ode, x) * pair.eval_to(x)));
  }
  pair.to_certificate = cert;

  // Wronskian Te To' - Te' To, constant by the shared equation
  const double w0 = pair.te0 * pair.eval_to_prime(0.0);
  double drift = 0.0;
  const double wr = std::min(100.0, range);
  for (double x = 0.0; x <= wr; x += 0.01) {
    const double w = pair.eval_te(x) * pair.eval_to_prime(x) -
                     pair.eval_te_prime(x) * pair.eval_to(x);
    drift = std::max(drift, std::abs(w - w0));
  }
  pair.wronskian_drift = drift;

  // far-field envelopes
  double ba = 0.0, bs = 0.0, bt = 0.0;
  for (double x = 0.0; x <= range; x += 0.1) {
    const double tev = pair.eval_te(x), tepv = pair.eval_te_prime(x);
    const double xp = std::pow(x, ode.m);
    ba = std::max(ba, std::abs(tepv * x - tev));
    bs = std::max(bs, std::abs((tepv - 1.0) * xp));
    bt = std::max(bt, std::abs(pair.eval_to_prime(x) * xp));
  }
  pair.bound_affine = ba;
  pair.bound_slope = bs;
  pair.bound_to = bt;
  return pair;
}

double green_kernel(double b, double xt) {
  return (xt < 0.0) ? -xt * std::exp(b * xt) : 0.0;
}

std::vector<double> green_convolve(const std::vector<double>& F, double b,
                                   double ht) {
  if (!(b > 0.0) || !(ht > 0.0)) {
    throw std::domain_error("green_convolve: weight and spacing must be > 0");
  }
  const int n = static_cast<int>(F.size());
  std::vector<double> ker(n);
  for (int d = 0; d < n; ++d) ker[d] = green_kernel(b, -d * ht);
  std::vector<double> out(n, 0.0);
  for (int i = 0; i < n; ++i) {
    double acc = 0.0;
    for (int d = 1; d < n - i; ++d) {
      const double w = (i + d == n - 1) ? 0.5 : 1.0;
      acc += ker[d] * F[i + d] * w;
    }
    out[i] = acc * ht;
  }
  return out;
}

std::vector<double> shift_laplacian(const std::vector<double>& F, double a,
                                    int shift_nodes) {
  if (shift_nodes <= 0) {
    throw std::domain_error("shift_laplacian: shift must be positive");
  }
  const int n = static_cast<int>(F.size());
  const double ep = std::exp(a), em = std::exp(-a);
  std::vector<double> out(n);
  for (int i = 0; i < n; ++i) {
    const double right = (i + shift_nodes < n) ? F[i + shift_nodes] : 0.0;
    const double left = (i - shift_nodes >= 0) ? F[i - shift_nodes] : 0.0;
    out[i] = em * right + ep * left - 2.0 * F[i];
  }
  return out;
}

GreenBoundsReport green_bounds(const PotentialParams& params, const Grid& grid,
                               const std::vector<double>& deltas, int trials,
                               unsigned seed) {
  if (deltas.empty() || trials < 1) {
    throw std::domain_error("green_bounds: need deltas and trials >= 1");
  }
  const double mu_bar = 2.0 / std::sqrt(params.m * (params.m + 1.0));

  // trial parameters drawn once, shared across deltas
  struct Bump {
    double amp, width, center, freq, phase;
  };
  std::mt19937 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> uw(0.5, 2.0), uc(-8.0, 8.0),
      uf(0.0, 3.0), up(0.0, 6.28318530717958648);
  std::vector<std::vector<Bump>> trial_bumps(trials);
  for (int t = 0; t < trials; ++t) {
    for (int k = 0; k < 3; ++k) {
      trial_bumps[t].push_back(
          {gauss(rng), uw(rng), uc(rng), uf(rng), up(rng)});
    }
  }

  GreenBoundsReport rep;
  rep.deltas = deltas;
  rep.c_smooth.assign(deltas.size(), 0.0);
  rep.c_grad_l2.assign(deltas.size(), 0.0);
  rep.c_grad_l1.assign(deltas.size(), 0.0);
  double commutation = 0.0;

  for (std::size_t di = 0; di < deltas.size(); ++di) {
    const WaveSolution w = solve_wave(params, deltas[di], grid);
    const double a = 0.5 * a_crit(std::sqrt(w.sigma));
    const double lam = w.mu / mu_bar;
    const double b = lam * a;
    const int n = grid.size();
    const double ht = grid.h() / lam;
    std::vector<double> xt(n);
    for (int i = 0; i < n; ++i) xt[i] = grid.node(i) / lam;

    for (int t = 0; t < trials; ++t) {
      std::vector<double> F(n, 0.0);
      for (const Bump& bp : trial_bumps[t]) {
        for (int i = 0; i < n; ++i) {
          const double z = xt[i] - bp.center;
          F[i] += bp.amp * std::exp(-z * z / (2.0 * bp.width * bp.width)) *
                  std::cos(bp.freq * xt[i] + bp.phase);
        }
      }
      const double f2 = norm_l2(F, ht), f1 = norm_l1(F, ht);
      if (f2 == 0.0) continue;
      const std::vector<double> u = green_convolve(F, b, ht);
      const std::vector<double> up1 = first_derivative(u, ht);
      const std::vector<double> up2 = second_derivative(u, ht);
      const double c1 =
          (lam * lam * norm_l2(u, ht) + lam * norm_l2(up1, ht) +
           norm_l2(up2, ht)) /
          f2;
      const double c2 = std::sqrt(lam) * norm_sup(up1) / f2;
      const double c3 = norm_sup(up1) / f1;
      rep.c_smooth[di] = std::max(rep.c_smooth[di], c1);
      rep.c_grad_l2[di] = std::max(rep.c_grad_l2[di], c2);
      rep.c_grad_l1[di] = std::max(rep.c_grad_l1[di], c3);
    }

    // aligned-grid commutation: kernel*(shiftLap F) == (shiftLap kernel)*F
    // for compactly supported F (identical terms, reordered sum)
    const int s = 2 * grid.K;
    std::vector<double> Fc(n, 0.0);
    const double cutoff = 0.45 * xt[n - 1];
    for (int i = 0; i < n; ++i) {
      if (std::abs(xt[i]) <= cutoff) Fc[i] = std::exp(-0.05 * xt[i] * xt[i]);
    }
    const std::vector<double> order1 =
        green_convolve(shift_laplacian(Fc, a, s), b, ht);
    std::vector<double> ker(n + s);
    for (int d = 0; d < n + s; ++d) ker[d] = green_kernel(b, -d * ht);
    std::vector<double> order2(n, 0.0);
    const double ep = std::exp(a), em = std::exp(-a);
    for (int i = 0; i < n; ++i) {
      double acc = 0.0;
      for (int j = 0; j < n; ++j) {
        if (Fc[j] == 0.0) continue;
        const int d = j - i;
        const double k0 = (d >= 1 && d < n) ? ker[d] : 0.0;
        const double kp = (d - s >= 1) ? ker[d - s] : 0.0;
        const double km = (d + s >= 1 && d + s < n + s) ? ker[d + s] : 0.0;
        const double w = (j == n - 1) ? 0.5 : 1.0;
        acc += (em * kp + ep * km - 2.0 * k0) * Fc[j] * w;
      }
      order2[i] = acc * ht;
    }
    double sup = 0.0, scale = 1.0;
    for (int i = 0; i < n; ++i) {
      sup = std::max(sup, std::abs(order1[i] - order2[i]));
      scale = std::max(scale, std::abs(order1[i]));
    }
    commutation = std::max(commutation, sup / scale);
  }

  auto family_ratio = [](const std::vector<double>& c) {
    const double mx = *std::max_element(c.begin(), c.end());
    const double mn = *std::min_element(c.begin(), c.end());
    return (mn > 0.0) ? mx / mn : 0.0;
  };
  rep.worst_ratio = std::max({family_ratio(rep.c_smooth),
                              family_ratio(rep.c_grad_l2),
                              family_ratio(rep.c_grad_l1)});
  rep.commutation_sup = commutation;
  return rep;
}

RescaledKernel rescale_and_fit(const WaveSolution& w,
                               const KernelScanReport& scan,
                               const LimitOde& ode, const CollapsePair& pair) {
  const int n = static_cast<int>(scan.nodes.size());
  if (n < 16 || scan.kernel_vector.size() != scan.nodes.size()) {
    throw std::domain_error("rescale_and_fit: malformed scan report");
  }
  const double h = w.grid.h();
  if (std::abs((scan.nodes[1] - scan.nodes[0]) - h) > 1e-12) {
    throw std::domain_error("rescale_and_fit: scan and wave grids differ");
  }
  if (std::abs(ode.m - w.m) > 1e-12) {
    throw std::domain_error("rescale_and_fit: mismatched potential exponent");
  }

  RescaledKernel rk;
  rk.delta = w.delta;
  rk.a = scan.a;
  rk.lambda = w.mu / ode.mu_bar;
  rk.b = rk.lambda * rk.a;
  rk.shift_nodes = 2 * w.grid.K;
  const double ht = h / rk.lambda;
  const int i0 = static_cast<int>(std::lround((0.0 - scan.nodes[0]) / h));
  if (i0 < 2 || i0 >= n - 2 || std::abs(scan.nodes[i0]) > 1e-12) {
    throw std::domain_error("rescale_and_fit: origin not on the scan grid");
  }
  rk.i0 = i0;

  rk.xt.resize(n);
  for (int i = 0; i < n; ++i) rk.xt[i] = scan.nodes[i] / rk.lambda;
  rk.Pt = build_limit_coefficient(ode, rk.xt);

  // de-weighted profile, sign-fixed so the slope at the origin is positive
  std::vector<double> S(n), G = scan.kernel_vector;
  for (int i = 0; i < n; ++i) {
    S[i] = std::exp(-rk.a * scan.nodes[i]) * G[i];
  }
  const double sp0 =
      (S[i0 - 2] - 8 * S[i0 - 1] + 8 * S[i0 + 1] - S[i0 + 2]) / (12 * h);
  if (sp0 < 0.0) {
    for (int i = 0; i < n; ++i) {
      S[i] = -S[i];
      G[i] = -G[i];
    }
  }

  auto normalization = [&](const std::vector<double>& Gv) {
    double l1 = 0.0, l2 = 0.0;
    for (int i = 0; i < n; ++i) {
      const double pg = rk.Pt[i] * Gv[i];
      l1 += std::abs(pg);
      l2 += pg * pg;
    }
    return std::abs(Gv[i0]) + l1 * ht + std::sqrt(l2 * ht);
  };
  const double sc = normalization(G);
  if (!(sc > 0.0) || !std::isfinite(sc)) {
    throw std::runtime_error("rescale_and_fit: normalization failure");
  }
  for (int i = 0; i < n; ++i) {
    G[i] /= sc;
    S[i] /= sc;
  }
  rk.Gt = G;
  rk.St = S;
  rk.norm_check = normalization(G);

  // fits against the collapse pair
  const double st0 = S[i0];
  const double stp0 =
      (S[i0 - 2] - 8 * S[i0 - 1] + 8 * S[i0 + 1] - S[i0 + 2]) / (12 * ht);
  rk.c_e = st0 / pair.te0;
  rk.c_o = stp0 / (w.m / 2.0);

  rk.Te.resize(n);
  rk.To.resize(n);
  for (int i = 0; i < n; ++i) {
    rk.Te[i] = pair.eval_te(rk.xt[i]);
    rk.To[i] = pair.eval_to(rk.xt[i]);
  }

  // potential coupling on the scan nodes, asymptotic value 1 outside the wave
  const int N = w.grid.size();
  const int pad = static_cast<int>(std::lround((-scan.nodes[0] - w.grid.X) / h));
  if (pad < 0 || pad + N > n + 1) {
    throw std::domain_error("rescale_and_fit: scan nodes do not cover the wave");
  }
  const PotentialParams params(w.m);
  std::vector<double> Qt(n, rk.lambda * rk.lambda / w.sigma);
  for (int i = 0; i < N && pad + i < n; ++i) {
    Qt[pad + i] =
        (rk.lambda * rk.lambda / w.sigma) * eval_potential(params, w.R[i], 2);
  }
  rk.Qt = Qt;
  const double zscale = std::pow(rk.lambda, -(w.m + 2.0));
  rk.Zt.resize(n);
  for (int i = 0; i < n; ++i) rk.Zt[i] = zscale * (Qt[i] - rk.Pt[i]);

  // tip-window diagnostics
  const int half = w.grid.K;  // |x| <= 1/2 in grid nodes
  const std::vector<double> spp = second_derivative(S, ht);
  double sup_res = 0.0, e0s = 0.0, eps_ = 0.0, i0sum = 0.0, i1sum = 0.0,
         zsup = 0.0;
  for (int i = i0 - half; i <= i0 + half; ++i) {
    const double resid = S[i] - rk.c_e * rk.Te[i] - rk.c_o * rk.To[i];
    sup_res = std::max(sup_res, std::abs(resid));
    const double e0 = spp[i] + 2.0 * rk.Pt[i] * S[i];
    const double ep = spp[i + rk.shift_nodes] - rk.Pt[i] * S[i];
    e0s = std::max(e0s, std::abs(e0));
    eps_ = std::max(eps_, std::abs(ep));
    const double both = std::abs(e0) + std::abs(ep);
    i0sum += both;
    i1sum += std::abs(rk.xt[i]) * both;
    zsup = std::max(zsup, std::abs(rk.Zt[i]));
  }
  rk.sup_residual = sup_res;
  rk.e0_sup = e0s;
  rk.ep_sup = eps_;
  rk.int0 = i0sum * ht;
  rk.int1 = i1sum * ht;
  rk.z_sup = zsup;

  // fixed-point defect of the kernel equation in convolution form
  std::vector<double> QG(n);
  for (int i = 0; i < n; ++i) QG[i] = Qt[i] * G[i];
  const std::vector<double> u =
      green_convolve(shift_laplacian(QG, rk.a, rk.shift_nodes), rk.b, ht);
  double fp = 0.0;
  for (int i = i0 - half; i <= i0 + half; ++i) {
    fp = std::max(fp, std::abs(G[i] - u[i]));
  }
  rk.fp_residual = fp;
  return rk;
}

PerturbationReport perturbation_profile(const WaveSolution& coarse,
                                        const WaveSolution& fine,
                                        const LimitOde& ode) {
  if (fine.grid.K != 2 * coarse.grid.K ||
      std::abs(fine.grid.X - coarse.grid.X) > 1e-12) {
    throw std::domain_error(
        "perturbation_profile: fine grid must halve the coarse spacing");
  }
  if (std::abs(fine.delta - coarse.delta) > 1e-15 ||
      std::abs(fine.m - coarse.m) > 1e-15) {
    throw std::domain_error("perturbation_profile: mismatched waves");
  }
  const double m = coarse.m;
  const double mu_bar = ode.mu_bar;
  const int N = coarse.grid.size();
  std::vector<double> Rr(N);
  for (int i = 0; i < N; ++i) {
    Rr[i] = (4.0 * fine.R[2 * i] - coarse.R[i]) / 3.0;
  }
  const double sigma_r = (4.0 * fine.sigma - coarse.sigma) / 3.0;
  const double eps_r = 1.0 - Rr[coarse.grid.center()];
  const double mu_r = std::sqrt(sigma_r * std::pow(eps_r, m + 2.0));
  const double lam = mu_r / mu_bar;

  PerturbationReport rep;
  rep.delta = coarse.delta;
  rep.sigma_refined = sigma_r;
  rep.eps_refined = eps_r;
  rep.lambda_refined = lam;

  const PotentialParams params(m);
  const double zscale = std::pow(lam, -(m + 2.0));
  const int c = coarse.grid.center(), half = coarse.grid.K;
  double zsup = 0.0;
  for (int i = c - half; i <= c + half; ++i) {
    const double qt =
        (lam * lam / sigma_r) * eval_potential(params, Rr[i], 2);
    const double pt = limit_coefficient(ode, coarse.grid.node(i) / lam);
    zsup = std::max(zsup, std::abs(zscale * (qt - pt)));
  }
  rep.z_sup = zsup;
  return rep;
}

}  // namespace fpuwave
