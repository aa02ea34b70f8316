#include "fpuwave/scan.hpp"

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <Eigen/SparseLU>

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>
#include <tuple>
#include <vector>

#include "fpuwave/potential.hpp"
#include "fpuwave/spectral.hpp"

namespace fpuwave {

namespace {

using SpMat = Eigen::SparseMatrix<double>;
using Triplet = Eigen::Triplet<double>;

int cyclic_size(int K, double half_width) {
  const int n = static_cast<int>(std::lround(2.0 * half_width * 2 * K));
  if (n <= 8 * K) {
    throw std::domain_error("cyclic grid: half_width must exceed 2");
  }
  return n;
}

// Q extended by its far-field value 1 and the translation surrogate
// (half-shift difference of V, zero-padded) on the cyclic nodes.
struct Extended {
  std::vector<double> Q;
  std::vector<double> S1;
};

Extended extend_wave(const WaveSolution& w, double half_width) {
  const double h = w.grid.h();
  const int N = w.grid.size();
  const int pad = static_cast<int>(std::lround((half_width - w.grid.X) / h));
  if (pad < 0) {
    throw std::domain_error(
        "kernel scan: half_width must cover the wave grid");
  }
  const int n = N + 2 * pad - 1;  // drop the duplicate right endpoint
  const PotentialParams params(w.m);
  Extended ext;
  ext.Q.assign(n, 1.0);
  ext.S1.assign(n, 0.0);
  const std::vector<double> S1 = half_shift_difference(w.V, w.grid);
  for (int i = 0; i < N && pad + i < n; ++i) {
    ext.Q[pad + i] = eval_potential(params, w.R[i], 2);
    ext.S1[pad + i] = S1[i];
  }
  return ext;
}

SpMat assemble(const std::vector<double>& Q, double h, int K, double sigma,
               double a) {
  const int n = static_cast<int>(Q.size());
  const double c1[5] = {1.0 / (12 * h), -8.0 / (12 * h), 0.0, 8.0 / (12 * h),
                        -1.0 / (12 * h)};
  const double c2[5] = {-1.0 / (12 * h * h), 16.0 / (12 * h * h),
                        -30.0 / (12 * h * h), 16.0 / (12 * h * h),
                        -1.0 / (12 * h * h)};
  const double ea = std::exp(a), eam = std::exp(-a);
  std::vector<Triplet> trip;
  trip.reserve(static_cast<std::size_t>(n) * 8);
  auto wrap = [n](int i) { return ((i % n) + n) % n; };
  for (int i = 0; i < n; ++i) {
    for (int o = -2; o <= 2; ++o) {
      trip.emplace_back(i, wrap(i + o), c2[o + 2] - 2.0 * a * c1[o + 2]);
    }
    trip.emplace_back(i, i, a * a + 2.0 * Q[i] / sigma);
    const int ip = wrap(i + 2 * K);
    const int im = wrap(i - 2 * K);
    trip.emplace_back(i, ip, -eam * Q[ip] / sigma);
    trip.emplace_back(i, im, -ea * Q[im] / sigma);
  }
  SpMat M(n, n);
  M.setFromTriplets(trip.begin(), trip.end());
  return M;
}

std::vector<double> to_std(const Eigen::VectorXd& v) {
  return std::vector<double>(v.data(), v.data() + v.size());
}

Eigen::VectorXd to_eigen(const std::vector<double>& v) {
  return Eigen::Map<const Eigen::VectorXd>(v.data(),
                                           static_cast<Eigen::Index>(v.size()));
}

// ||M v|| accumulated in extended precision.
double matvec_norm_ld(const SpMat& M, const Eigen::VectorXd& v) {
  std::vector<long double> acc(M.rows(), 0.0L);
  for (int k = 0; k < M.outerSize(); ++k) {
    for (SpMat::InnerIterator it(M, k); it; ++it) {
      acc[it.row()] += static_cast<long double>(it.value()) *
                       static_cast<long double>(v[it.col()]);
    }
  }
  long double s = 0.0L;
  for (long double x : acc) s += x * x;
  return static_cast<double>(std::sqrt(s));
}

// Orthonormal embedding of the exponential-weight-corrected parity sector:
// a profile with S(-x) = +-S(x) has weighted transform G = e^{ax}S obeying
// G(-x) = +-e^{-2ax}G(x), so each |x| pairs into a fixed unit 2-vector.
// Columns ordered by increasing |x| keep the normal matrix narrowly banded.
SpMat sector_embedding(bool even, const std::vector<double>& x, double a) {
  const int n = static_cast<int>(x.size());
  std::vector<std::tuple<double, int, int, bool>> reps;  // |x|, j, jp, self
  for (int j = 0; j < n; ++j) {
    const int jp = (n - j) % n;
    if (jp == j) {
      if (even) reps.emplace_back(std::abs(x[j]), j, jp, true);
    } else if (x[j] > 0.0) {
      reps.emplace_back(x[j], j, jp, false);
    }
  }
  std::sort(reps.begin(), reps.end());
  std::vector<Triplet> trip;
  for (int c = 0; c < static_cast<int>(reps.size()); ++c) {
    const auto& [ax, j, jp, self] = reps[c];
    if (self) {
      trip.emplace_back(j, c, 1.0);
    } else {
      const double e4 = std::exp(-4.0 * a * ax);
      const double cp = 1.0 / std::sqrt(1.0 + e4);
      const double cm = std::exp(-2.0 * a * ax) / std::sqrt(1.0 + e4);
      trip.emplace_back(j, c, cp);
      trip.emplace_back(jp, c, even ? cm : -cm);
    }
  }
  SpMat E(n, static_cast<int>(reps.size()));
  E.setFromTriplets(trip.begin(), trip.end());
  return E;
}

// Smallest singular values of M restricted to the sector spanned by E,
// via inverse iteration on (ME)^T(ME) with Gram-Schmidt deflation.
std::vector<double> sector_minima(const SpMat& M, const SpMat& E,
                                  const Eigen::VectorXd* first_seed, int nvec,
                                  int iters, std::mt19937& rng) {
  const SpMat B = (M * E).pruned();
  const SpMat A = (SpMat(B.transpose()) * B).pruned();
  Eigen::SparseLU<SpMat> lu(A);
  if (lu.info() != Eigen::Success) {
    throw std::runtime_error("sector scan: normal-matrix factorization failed");
  }
  std::normal_distribution<double> dist;
  std::vector<Eigen::VectorXd> deflated;
  std::vector<double> svs;
  const int np = static_cast<int>(E.cols());
  for (int k = 0; k < nvec; ++k) {
    Eigen::VectorXd v(np);
    if (k == 0 && first_seed != nullptr) {
      v = E.transpose() * (*first_seed);
    } else {
      for (int i = 0; i < np; ++i) v[i] = dist(rng);
    }
    for (const auto& d : deflated) v -= d.dot(v) * d;
    v.normalize();
    for (int it = 0; it < iters; ++it) {
      Eigen::VectorXd z = lu.solve(v);
      for (const auto& d : deflated) z -= d.dot(z) * d;
      v = z / z.norm();
    }
    svs.push_back((B * v).norm());
    deflated.push_back(v);
  }
  return svs;
}

}  // namespace

std::vector<double> cyclic_nodes(int K, double half_width) {
  const int n = cyclic_size(K, half_width);
  const double h = 1.0 / (2 * K);
  std::vector<double> x(n);
  for (int i = 0; i < n; ++i) x[i] = -half_width + i * h;
  return x;
}

std::vector<double> apply_second_order(const WaveSolution& w, double a,
                                       double half_width,
                                       const std::vector<double>& G) {
  const Extended ext = extend_wave(w, half_width);
  if (G.size() != ext.Q.size()) {
    throw std::invalid_argument("apply_second_order: size mismatch");
  }
  const SpMat M = assemble(ext.Q, w.grid.h(), w.grid.K, w.sigma, a);
  return to_std(M * to_eigen(G));
}

std::vector<double> apply_second_order_constant(double Q, double sigma,
                                                double a, int K,
                                                double half_width,
                                                const std::vector<double>& G) {
  const int n = cyclic_size(K, half_width);
  if (static_cast<int>(G.size()) != n) {
    throw std::invalid_argument("apply_second_order_constant: size mismatch");
  }
  const std::vector<double> Qv(n, Q);
  const SpMat M = assemble(Qv, 1.0 / (2 * K), K, sigma, a);
  return to_std(M * to_eigen(G));
}

std::vector<double> solve_second_order_constant(double Q, double sigma,
                                                double a, int K,
                                                double half_width,
                                                const std::vector<double>& rhs) {
  const int n = cyclic_size(K, half_width);
  if (static_cast<int>(rhs.size()) != n) {
    throw std::invalid_argument("solve_second_order_constant: size mismatch");
  }
  const std::vector<double> Qv(n, Q);
  const SpMat M = assemble(Qv, 1.0 / (2 * K), K, sigma, a);
  Eigen::SparseLU<SpMat> lu(M);
  if (lu.info() != Eigen::Success) {
    throw std::runtime_error("solve_second_order_constant: singular operator");
  }
  return to_std(lu.solve(to_eigen(rhs)));
}

std::vector<double> translation_seed(const WaveSolution& w, double a,
                                     double half_width) {
  const Extended ext = extend_wave(w, half_width);
  const std::vector<double> x = cyclic_nodes(w.grid.K, half_width);
  std::vector<double> g(ext.S1.size());
  for (std::size_t i = 0; i < g.size(); ++i) {
    g[i] = std::exp(a * x[i]) * ext.S1[i];
  }
  return g;
}

KernelScanReport kernel_scan(const WaveSolution& w, double a,
                             const ScanOptions& opts) {
  const double c = std::sqrt(w.sigma);
  const double ac = a_crit(c);
  if (!(a > 0.0) || a >= ac) {
    throw std::domain_error(
        "kernel_scan: weight must satisfy 0 < a < a_crit(c)");
  }
  if (opts.block < 6 || opts.iterations < 1) {
    throw std::domain_error("kernel_scan: need block >= 6 and iterations >= 1");
  }
  const Extended ext = extend_wave(w, opts.half_width);
  const int n = static_cast<int>(ext.Q.size());
  const int B = opts.block;
  const SpMat M = assemble(ext.Q, w.grid.h(), w.grid.K, w.sigma, a);
  Eigen::SparseLU<SpMat> lu(M);
  if (lu.info() != Eigen::Success) {
    throw std::runtime_error("kernel_scan: operator factorization failed");
  }

  Eigen::VectorXd g1 = to_eigen(translation_seed(w, a, opts.half_width));
  g1.normalize();

  std::mt19937 rng(opts.seed);
  std::normal_distribution<double> dist;
  Eigen::MatrixXd Y(n, B);
  Y.col(0) = g1;
  for (int j = 1; j < B; ++j) {
    for (int i = 0; i < n; ++i) Y(i, j) = dist(rng);
  }
  auto thin_qr = [n, B](Eigen::MatrixXd& Z) {
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(Z);
    Z = qr.householderQ() * Eigen::MatrixXd::Identity(n, B);
  };
  thin_qr(Y);

  // inverse iteration on M^T M: Y <- (M^T M)^{-1} Y, re-orthonormalized
  for (int it = 0; it < opts.iterations; ++it) {
    Eigen::MatrixXd Z = lu.transpose().solve(Y);
    Z = lu.solve(Z);
    thin_qr(Z);
    Y = Z;
  }

  // Ritz singular values from the Gram matrix of MY in extended precision
  const Eigen::MatrixXd W = M * Y;
  Eigen::MatrixXd Gram(B, B);
  for (int p = 0; p < B; ++p) {
    for (int q = p; q < B; ++q) {
      long double s = 0.0L;
      for (int i = 0; i < n; ++i) {
        s += static_cast<long double>(W(i, p)) *
             static_cast<long double>(W(i, q));
      }
      Gram(p, q) = Gram(q, p) = static_cast<double>(s);
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(Gram);
  const Eigen::VectorXd ev = es.eigenvalues();  // ascending
  const Eigen::MatrixXd V = Y * es.eigenvectors();

  KernelScanReport rep;
  rep.a = a;
  rep.a_c = ac;
  rep.half_width = opts.half_width;
  rep.singular_values.resize(B);
  for (int j = 0; j < B; ++j) {
    rep.singular_values[j] = std::sqrt(std::max(ev[j], 0.0));
  }
  Eigen::VectorXd v1 = V.col(0);
  v1.normalize();
  if (v1.dot(g1) < 0.0) v1 = -v1;
  rep.singular_values[0] = matvec_norm_ld(M, v1);
  rep.translation_correlation = std::abs(v1.dot(g1));
  rep.kernel_vector = to_std(v1);
  rep.nodes = cyclic_nodes(w.grid.K, opts.half_width);

  const auto& sv = rep.singular_values;
  int count = 0;
  while (count + 1 < B && sv[count] < 0.1 * sv[count + 1]) ++count;
  rep.kernel_count = count;
  std::vector<double> tail(sv.begin() + 1,
                           sv.begin() + std::min<int>(7, B));
  std::nth_element(tail.begin(), tail.begin() + tail.size() / 2, tail.end());
  const double med = tail[tail.size() / 2];
  rep.zero_singular_value = sv[0] < 1e-4 * med && sv[0] < 0.1 * sv[1];
  rep.inconclusive = sv[1] < 10.0 * sv[0];

  if (opts.with_sectors) {
    std::mt19937 rng_sector(opts.seed + 2);
    const std::vector<double>& x = rep.nodes;
    const SpMat Ee = sector_embedding(true, x, a);
    const SpMat Eo = sector_embedding(false, x, a);
    const std::vector<double> sve =
        sector_minima(M, Ee, nullptr, 2, 80, rng_sector);
    const std::vector<double> svo =
        sector_minima(M, Eo, &v1, 3, 80, rng_sector);
    rep.even_min_sv = sve[0];
    rep.even_second_sv = sve[1];
    rep.odd_first_sv = svo[0];
    rep.odd_second_sv = svo[1];
  }
  return rep;
}

}  // namespace fpuwave
