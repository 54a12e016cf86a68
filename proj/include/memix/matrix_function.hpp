#ifndef MEMIX_MATRIX_FUNCTION_HPP
#define MEMIX_MATRIX_FUNCTION_HPP

#include <cmath>
#include <complex>
#include <functional>
#include <limits>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "memix/context.hpp"
#include "memix/errors.hpp"
#include "memix/linalg.hpp"

namespace memix::lin {

enum class MatFuncMethod { automatic, eigen, contour };

using ScalarFunc = std::function<std::complex<double>(std::complex<double>)>;

// Region on which the scalar function is holomorphic: the half-plane
// Re z > abscissa.  The default covers entire functions.
struct AnalyticDomain {
  double abscissa = -std::numeric_limits<double>::infinity();
};

namespace detail {

inline MatrixXd real_part_checked(const MatrixXcd& f, const char* where) {
  const double scale = std::max(1.0, f.real().norm());
  if (f.imag().norm() > 1e-7 * scale)
    throw NumericError(std::string(where) +
                       ": result has a non-negligible imaginary part");
  return f.real();
}

inline MatrixXd holo_eigen(const ScalarFunc& g, const MatrixXd& a,
                           const NumericContext& ctx) {
  Eigen::ComplexEigenSolver<MatrixXcd> es(a.cast<std::complex<double>>(),
                                          /*computeEigenvectors=*/true);
  if (es.info() != Eigen::Success)
    throw NumericError("holo_matrix_func: eigensolver did not converge");
  const MatrixXcd& v = es.eigenvectors();
  Eigen::JacobiSVD<MatrixXcd> svd(v);
  const double smin = svd.singularValues().minCoeff();
  const double smax = svd.singularValues().maxCoeff();
  if (!(smin > 0.0) || smax / smin > ctx.eigen_cond_limit)
    throw NumericError(
        "holo_matrix_func: ill-conditioned eigenbasis (fallback to contour)");
  VectorXcd gl(es.eigenvalues().size());
  for (Eigen::Index i = 0; i < gl.size(); ++i) gl[i] = g(es.eigenvalues()[i]);
  const MatrixXcd f = v * gl.asDiagonal() * v.partialPivLu().inverse();
  return real_part_checked(f, "holo_matrix_func(eigen)");
}

// Parametrized closed contour z(s) = cx + sx cos s + i sy sin s enclosing the
// spectrum; sx = sy gives the circle used whenever the analyticity region
// allows it.
struct Contour {
  double cx;
  double sx;
  double sy;
};

inline Contour choose_contour(const VectorXcd& lam,
                              const AnalyticDomain& dom) {
  const double min_re = lam.real().minCoeff();
  require_domain(min_re > dom.abscissa,
                 "holo_matrix_func: spectrum outside the analyticity region");
  const double center = lam.real().mean();
  double spread = 0.0;
  for (Eigen::Index i = 0; i < lam.size(); ++i)
    spread = std::max(spread, std::abs(lam[i] - std::complex<double>(center)));
  const double radius = 1.5 * spread + 1.0;
  if (center - radius > dom.abscissa) return {center, radius, radius};

  // The circle would cross the analyticity boundary; flatten it into an
  // ellipse whose left edge sits halfway between the boundary and the
  // leftmost eigenvalue.
  const double left = 0.5 * (dom.abscissa + min_re);
  const double right = center + radius;
  Contour c{0.5 * (left + right), 0.5 * (right - left), radius};
  for (Eigen::Index i = 0; i < lam.size(); ++i) {
    const double rx = (lam[i].real() - c.cx) / c.sx;
    const double ry = lam[i].imag() / c.sy;
    require_domain(rx * rx + ry * ry < 0.98,
                   "holo_matrix_func: cannot enclose the spectrum inside the "
                   "analyticity region");
  }
  return c;
}

inline MatrixXcd contour_pass(const ScalarFunc& g, const MatrixXcd& a,
                              const Contour& c, int nodes) {
  const Eigen::Index p = a.rows();
  const std::complex<double> im(0.0, 1.0);
  MatrixXcd acc = MatrixXcd::Zero(p, p);
  const MatrixXcd ident = MatrixXcd::Identity(p, p);
  for (int k = 0; k < nodes; ++k) {
    const double s = 2.0 * M_PI * (k + 0.5) / nodes;
    const std::complex<double> z(c.cx + c.sx * std::cos(s),
                                 c.sy * std::sin(s));
    const std::complex<double> dz(-c.sx * std::sin(s), c.sy * std::cos(s));
    acc += g(z) * dz * (z * ident - a).partialPivLu().inverse();
  }
  return acc / (im * static_cast<double>(nodes));
}

inline MatrixXd holo_contour(const ScalarFunc& g, const MatrixXd& a,
                             const AnalyticDomain& dom,
                             const NumericContext& ctx) {
  const Contour c = choose_contour(eigenvalues(a), dom);
  const MatrixXcd ac = a.cast<std::complex<double>>();
  MatrixXcd prev = contour_pass(g, ac, c, ctx.contour_min_nodes);
  for (int nodes = 2 * ctx.contour_min_nodes; nodes <= ctx.contour_max_nodes;
       nodes *= 2) {
    const MatrixXcd cur = contour_pass(g, ac, c, nodes);
    const double rel = (cur - prev).norm() / std::max(1.0, cur.norm());
    if (rel <= ctx.contour_tol)
      return real_part_checked(cur, "holo_matrix_func(contour)");
    prev = cur;
  }
  throw NumericError(
      "holo_matrix_func: contour quadrature did not converge at max nodes");
}

}  // namespace detail

// g(A) for a scalar function g holomorphic on a neighborhood of the spectrum
// of A.  The eigen method diagonalizes and applies g to the eigenvalues (fast
// path, requires a well-conditioned eigenbasis); the contour method applies
// the Cauchy integral g(A) = (2 pi i)^{-1} oint g(z)(zI - A)^{-1} dz with the
// trapezoid rule and node doubling, which also covers defective matrices.
inline MatrixXd holo_matrix_func(const ScalarFunc& g, const MatrixXd& a,
                                 MatFuncMethod method = MatFuncMethod::automatic,
                                 const AnalyticDomain& dom = {},
                                 const NumericContext& ctx = default_context()) {
  require_input(a.rows() == a.cols() && a.rows() > 0,
                "holo_matrix_func: matrix must be square and nonempty");
  require_input(all_finite(a), "holo_matrix_func: non-finite entries");
  {
    // Domain check applies to every method.
    const VectorXcd lam = eigenvalues(a);
    require_domain(lam.real().minCoeff() > dom.abscissa,
                   "holo_matrix_func: spectrum outside the analyticity region");
  }
  switch (method) {
    case MatFuncMethod::eigen:
      return detail::holo_eigen(g, a, ctx);
    case MatFuncMethod::contour:
      return detail::holo_contour(g, a, dom, ctx);
    case MatFuncMethod::automatic:
      break;
  }
  try {
    return detail::holo_eigen(g, a, ctx);
  } catch (const NumericError&) {
    return detail::holo_contour(g, a, dom, ctx);
  }
}

}  // namespace memix::lin

#endif  // MEMIX_MATRIX_FUNCTION_HPP
