#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

namespace fpuwave {

// Uniform symmetric grid on [-X, X] with spacing h = 1/(2K).
// The half-integer structure makes the shifts by 1/2 and 1 exact index
// offsets (K and 2K), which the box average and the difference operators
// rely on throughout.
struct Grid {
  double X;  // half-width, an integer multiple of 1/2
  int K;     // h = 1/(2K)

  double h() const { return 1.0 / (2.0 * K); }
  int size() const { return static_cast<int>(std::lround(2.0 * X * 2.0 * K)) + 1; }
  int center() const { return (size() - 1) / 2; }  // index of x = 0
  double node(int i) const { return -X + i * h(); }

  std::vector<double> nodes() const {
    std::vector<double> xs(size());
    for (int i = 0; i < size(); ++i) xs[i] = node(i);
    return xs;
  }
};

inline Grid make_grid(double X, int K) {
  if (K < 32) throw std::domain_error("make_grid: K must be >= 32");
  const double twoX = 2.0 * X;
  if (std::abs(twoX - std::lround(twoX)) > 1e-12 || X < 4.0) {
    throw std::domain_error("make_grid: X must be a multiple of 1/2 and >= 4");
  }
  return Grid{X, K};
}

}  // namespace fpuwave
