#ifndef MEMIX_LINALG_HPP
#define MEMIX_LINALG_HPP

#include <cmath>
#include <complex>
#include <string>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "memix/errors.hpp"

namespace memix::lin {

using Eigen::MatrixXcd;
using Eigen::MatrixXd;
using Eigen::VectorXcd;
using Eigen::VectorXd;

template <typename Derived>
bool all_finite(const Eigen::MatrixBase<Derived>& m) {
  return m.allFinite();
}

namespace detail {

template <typename Matrix>
double one_norm(const Matrix& a) {
  if (a.cols() == 0) return 0.0;
  return a.cwiseAbs().colwise().sum().maxCoeff();
}

}  // namespace detail

// Matrix exponential by scaling-and-squaring with the degree-13 Pade
// approximant (Higham 2005).  Backward-stable for the norms met here; the
// scaling step brings ||A/2^s|| under the theta_13 radius.
template <typename Matrix>
Matrix expm(const Matrix& a) {
  require_input(a.rows() == a.cols(), "expm: matrix must be square");
  require_input(all_finite(a), "expm: matrix has non-finite entries");
  const auto n = a.rows();
  if (n == 0) return a;

  static const double b[14] = {64764752532480000.0, 32382376266240000.0,
                               7771770303897600.0,  1187353796428800.0,
                               129060195264000.0,   10559470521600.0,
                               670442572800.0,      33522128640.0,
                               1323241920.0,        40840800.0,
                               960960.0,            16380.0,
                               182.0,               1.0};
  const double theta13 = 5.371920351148152;

  const double norm = detail::one_norm(a);
  if (norm == 0.0) return Matrix::Identity(n, n);  // e^0 = I, exactly
  int squarings = 0;
  if (norm > theta13) {
    squarings = static_cast<int>(std::ceil(std::log2(norm / theta13)));
  }
  const Matrix as = a / std::pow(2.0, squarings);

  const Matrix ident = Matrix::Identity(n, n);
  const Matrix a2 = as * as;
  const Matrix a4 = a2 * a2;
  const Matrix a6 = a2 * a4;
  const Matrix u =
      as * (a6 * (b[13] * a6 + b[11] * a4 + b[9] * a2) + b[7] * a6 +
            b[5] * a4 + b[3] * a2 + b[1] * ident);
  const Matrix v = a6 * (b[12] * a6 + b[10] * a4 + b[8] * a2) + b[6] * a6 +
                   b[4] * a4 + b[2] * a2 + b[0] * ident;

  Matrix r = (v - u).partialPivLu().solve(v + u);
  for (int i = 0; i < squarings; ++i) r = r * r;
  if (!all_finite(r)) throw NumericError("expm: non-finite result");
  return r;
}

template <typename Matrix>
Matrix kron_prod(const Matrix& a, const Matrix& b) {
  require_input(a.size() > 0 && b.size() > 0, "kron_prod: empty factor");
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

// Kronecker sum A (+) B = A x I + I x B; exp(A (+) B) = exp(A) x exp(B).
template <typename Matrix>
Matrix kron_sum(const Matrix& a, const Matrix& b) {
  require_input(a.rows() == a.cols() && b.rows() == b.cols(),
                "kron_sum: factors must be square");
  return kron_prod(a, Matrix(Matrix::Identity(b.rows(), b.rows()))) +
         kron_prod(Matrix(Matrix::Identity(a.rows(), a.rows())), b);
}

// (-T)^{-r} with a single LU factorization reused across the r solves.
// r = 0 returns the identity.
inline MatrixXd neg_matrix_power(const MatrixXd& t, int r) {
  require_input(t.rows() == t.cols(), "neg_matrix_power: non-square matrix");
  require_input(r >= 0, "neg_matrix_power: negative power");
  MatrixXd x = MatrixXd::Identity(t.rows(), t.rows());
  if (r == 0) return x;
  Eigen::FullPivLU<MatrixXd> lu(-t);
  require_domain(lu.isInvertible(), "neg_matrix_power: -T is singular");
  for (int i = 0; i < r; ++i) x = lu.solve(x);
  return x;
}

inline VectorXcd eigenvalues(const MatrixXd& a) {
  require_input(a.rows() == a.cols() && a.rows() > 0,
                "eigenvalues: non-square or empty matrix");
  Eigen::EigenSolver<MatrixXd> es(a, /*computeEigenvectors=*/false);
  if (es.info() != Eigen::Success)
    throw NumericError("eigenvalues: eigensolver did not converge");
  return es.eigenvalues();
}

// Largest real part over the spectrum: the dominant decay rate of e^{Ax}.
inline double spectral_abscissa(const MatrixXd& a) {
  return eigenvalues(a).real().maxCoeff();
}

// Block upper-bidiagonal extension T^{[n,lambda]} of size (n+1)p: diagonal
// blocks T - lambda I, identity super-diagonal blocks.  Its exponential
// carries the monomial-times-exponential factors
//   corner block of exp(T^{[n,lambda]} x) = (x^n/n!) e^{-lambda x} e^{Tx},
// which is what the size-biased tilt and the coupled tail moments need.
inline MatrixXd extended_generator(const MatrixXd& t, int n, double lambda) {
  require_input(t.rows() == t.cols(), "extended_generator: non-square T");
  require_input(n >= 0, "extended_generator: negative order");
  const Eigen::Index p = t.rows();
  MatrixXd out = MatrixXd::Zero((n + 1) * p, (n + 1) * p);
  const MatrixXd diag = t - lambda * MatrixXd::Identity(p, p);
  for (int i = 0; i <= n; ++i) {
    out.block(i * p, i * p, p, p) = diag;
    if (i < n) out.block(i * p, (i + 1) * p, p, p).setIdentity();
  }
  return out;
}

// Closed form of the tail integral int_y^inf u^n e^{Bu} du for a stable B:
//   e^{By} sum_{k=0}^n (-B)^{-(n-k+1)} (n!/k!) y^k.
// At y = 0 this collapses to n! (-B)^{-(n+1)}.
inline MatrixXd tail_integral(const MatrixXd& b, int n, double y) {
  require_input(b.rows() == b.cols(), "tail_integral: non-square matrix");
  require_input(n >= 0 && y >= 0.0, "tail_integral: need n >= 0 and y >= 0");
  const Eigen::Index p = b.rows();
  Eigen::FullPivLU<MatrixXd> lu(MatrixXd(-b));
  require_domain(lu.isInvertible(), "tail_integral: -B is singular");

  // Walk k = n down to 0 so the power (-B)^{-(n-k+1)} grows one solve at a
  // time; fact tracks n!/k!.
  MatrixXd inv_pow = lu.solve(MatrixXd::Identity(p, p));
  MatrixXd sum = MatrixXd::Zero(p, p);
  double fact = 1.0;
  for (int k = n; k >= 0; --k) {
    sum += inv_pow * (fact * std::pow(y, k));
    if (k > 0) {
      inv_pow = lu.solve(inv_pow);
      fact *= k;
    }
  }
  return expm(MatrixXd(b * y)) * sum;
}

}  // namespace memix::lin

#endif  // MEMIX_LINALG_HPP
