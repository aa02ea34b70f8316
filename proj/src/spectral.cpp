#include "fpuwave/spectral.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "fpuwave/potential.hpp"

namespace fpuwave {

double a_crit(double c) {
  if (!(c > 1.0)) {
    throw std::domain_error("a_crit: requires wave speed c > 1");
  }
  auto f = [c](double a) { return std::sinh(0.5 * a) - c * 0.5 * a; };
  // f(0) = 0 with f'(0) < 0, and f is eventually positive: bracket the root
  double lo = 0.0, hi = 2.0;
  while (f(hi) < 0.0) {
    lo = hi;
    hi *= 2.0;
    if (hi > 1e4) throw std::runtime_error("a_crit: bracketing failed");
  }
  for (int i = 0; i < 80; ++i) {
    const double mid = 0.5 * (lo + hi);
    (f(mid) < 0.0 ? lo : hi) = mid;
  }
  // Newton polish on the residual sinh(a/2) - c a/2
  double a = 0.5 * (lo + hi);
  for (int i = 0; i < 8; ++i) {
    const double r = f(a);
    const double dr = 0.5 * std::cosh(0.5 * a) - 0.5 * c;
    a -= r / dr;
  }
  return a;
}

double spectral_margin(double c, double a) {
  return a - (2.0 / c) * std::sinh(0.5 * a);
}

EssentialSpectrum essential_spectrum(double c, double a, double kmax, int nk) {
  if (!(c > 1.0) || a < 0.0 || nk < 2) {
    throw std::domain_error("essential_spectrum: need c > 1, a >= 0, nk >= 2");
  }
  EssentialSpectrum es;
  es.k.resize(nk);
  es.re_plus.resize(nk);
  es.im_plus.resize(nk);
  es.re_minus.resize(nk);
  es.im_minus.resize(nk);
  es.max_re = -1e300;
  for (int i = 0; i < nk; ++i) {
    const double k = -kmax + 2.0 * kmax * i / (nk - 1);
    // sinh((ik - a)/2) = -sinh(a/2)cos(k/2) + i cosh(a/2)sin(k/2)
    const double re_s = -std::sinh(0.5 * a) * std::cos(0.5 * k);
    const double im_s = std::cosh(0.5 * a) * std::sin(0.5 * k);
    es.k[i] = k;
    es.re_plus[i] = -a + (2.0 / c) * re_s;
    es.im_plus[i] = k + (2.0 / c) * im_s;
    es.re_minus[i] = -a - (2.0 / c) * re_s;
    es.im_minus[i] = k - (2.0 / c) * im_s;
    es.max_re = std::max(es.max_re, std::max(es.re_plus[i], es.re_minus[i]));
  }
  return es;
}

namespace {

std::vector<double> fourth_order_derivative(const std::vector<double>& F,
                                            double h) {
  const int n = static_cast<int>(F.size());
  std::vector<double> d(n);
  for (int i = 2; i + 2 < n; ++i) {
    d[i] = (F[i - 2] - 8.0 * F[i - 1] + 8.0 * F[i + 1] - F[i + 2]) / (12.0 * h);
  }
  auto forward = [&](int i) {
    return (-25.0 * F[i] + 48.0 * F[i + 1] - 36.0 * F[i + 2] +
            16.0 * F[i + 3] - 3.0 * F[i + 4]) /
           (12.0 * h);
  };
  auto backward = [&](int i) {
    return (25.0 * F[i] - 48.0 * F[i - 1] + 36.0 * F[i - 2] -
            16.0 * F[i - 3] + 3.0 * F[i - 4]) /
           (12.0 * h);
  };
  d[0] = forward(0);
  d[1] = forward(1);
  d[n - 2] = backward(n - 2);
  d[n - 1] = backward(n - 1);
  return d;
}

}  // namespace

OperatorPair apply_linearization(const WaveSolution& w,
                                 const std::vector<double>& S,
                                 const std::vector<double>& W) {
  const int n = w.grid.size();
  if (static_cast<int>(S.size()) != n || static_cast<int>(W.size()) != n) {
    throw std::invalid_argument("apply_linearization: size mismatch with grid");
  }
  const double h = w.grid.h();
  const PotentialParams params(w.m);
  std::vector<double> QS(n);
  for (int i = 0; i < n; ++i) {
    QS[i] = eval_potential(params, w.R[i], 2) * S[i];
  }
  const std::vector<double> dS = fourth_order_derivative(S, h);
  const std::vector<double> dW = fourth_order_derivative(W, h);
  const std::vector<double> shift_W = half_shift_difference(W, w.grid);
  const std::vector<double> shift_QS = half_shift_difference(QS, w.grid);
  OperatorPair out;
  out.S.resize(n);
  out.W.resize(n);
  for (int i = 0; i < n; ++i) {
    out.S[i] = dS[i] - shift_W[i];
    out.W[i] = dW[i] - shift_QS[i] / w.sigma;
  }
  return out;
}

std::vector<double> invert_nabla(const std::vector<double>& F, double a,
                                 const Grid& grid) {
  if (!(a > 0.0)) {
    throw std::domain_error("invert_nabla: requires weight a > 0");
  }
  const int n = static_cast<int>(F.size());
  const int K = grid.K;
  static std::atomic<bool> warned{false};
  if (std::abs(F.back()) > 1e-14 && !warned.exchange(true)) {
    std::fprintf(stderr,
                 "invert_nabla: input magnitude %.3e at the right boundary; "
                 "the truncated tail sum is inexact\n",
                 std::abs(F.back()));
  }
  // W(x) = W(x+1) - F(x+1/2), summed from the right edge inward
  std::vector<double> W(n, 0.0);
  for (int i = n - 1; i >= 0; --i) {
    const double tail = (i + 2 * K < n) ? W[i + 2 * K] : 0.0;
    const double mid = (i + K < n) ? F[i + K] : 0.0;
    W[i] = tail - mid;
  }
  return W;
}

}  // namespace fpuwave
