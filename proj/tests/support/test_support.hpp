#ifndef MEMIX_TEST_SUPPORT_HPP
#define MEMIX_TEST_SUPPORT_HPP

#include <random>

#include <Eigen/Dense>

#include "memix/linalg.hpp"

namespace memix::test {

using Eigen::MatrixXd;
using Eigen::RowVectorXd;
using Eigen::VectorXd;

// All randomized tests run on fixed seeds so failures reproduce exactly.
inline std::mt19937_64 rng(std::uint64_t seed) { return std::mt19937_64(seed); }

inline MatrixXd random_matrix(std::mt19937_64& g, int n,
                              double lo = -1.0, double hi = 1.0) {
  std::uniform_real_distribution<double> u(lo, hi);
  MatrixXd a(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a(i, j) = u(g);
  return a;
}

// Random matrix with all eigenvalue real parts pushed below -gap.
inline MatrixXd random_stable(std::mt19937_64& g, int n, double gap = 0.5) {
  MatrixXd a = random_matrix(g, n);
  const double shift = memix::lin::spectral_abscissa(a) + gap;
  return a - shift * MatrixXd::Identity(n, n);
}

// Random sub-intensity matrix: nonnegative off-diagonal rates, strictly
// positive exit rates, diagonal balancing the row sums.
inline MatrixXd random_subintensity(std::mt19937_64& g, int p) {
  std::uniform_real_distribution<double> u(0.1, 1.0);
  MatrixXd t = MatrixXd::Zero(p, p);
  for (int i = 0; i < p; ++i) {
    double row = u(g);  // exit rate
    for (int j = 0; j < p; ++j) {
      if (i == j) continue;
      t(i, j) = u(g);
      row += t(i, j);
    }
    t(i, i) = -row;
  }
  return t;
}

inline RowVectorXd random_simplex(std::mt19937_64& g, int p) {
  std::uniform_real_distribution<double> u(0.05, 1.0);
  RowVectorXd a(p);
  for (int i = 0; i < p; ++i) a[i] = u(g);
  return a / a.sum();
}

// The 3x3 triple whose density is (2/3) e^{-x} (1 + cos x): a matrix
// exponential law that is not phase-type.
struct Canonical {
  RowVectorXd alpha;
  MatrixXd T;
  VectorXd t;
  Canonical() {
    alpha.resize(3);
    alpha << 1.0, 0.0, 0.0;
    T.resize(3, 3);
    T << -1.0, -1.0, 2.0 / 3.0, 1.0, -1.0, -2.0 / 3.0, 0.0, 0.0, -1.0;
    t.resize(3);
    t << 4.0 / 3.0, 2.0 / 3.0, 1.0;
  }
  static double pdf(double x) {
    return (2.0 / 3.0) * std::exp(-x) * (1.0 + std::cos(x));
  }
};

}  // namespace memix::test

#endif  // MEMIX_TEST_SUPPORT_HPP
