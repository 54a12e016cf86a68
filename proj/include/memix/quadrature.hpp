#ifndef MEMIX_QUADRATURE_HPP
#define MEMIX_QUADRATURE_HPP

#include <cmath>
#include <functional>

#include <Eigen/Dense>

#include "memix/errors.hpp"

namespace memix::quad {

struct QuadResult {
  double value = 0.0;
  double error = 0.0;
  long evaluations = 0;
  bool converged = true;

  double value_or_throw() const {
    if (!converged)
      throw NumericError("quadrature did not reach the requested tolerance; "
                         "achieved error " + std::to_string(error));
    return value;
  }
};

namespace detail {

// Gauss(7)-Kronrod(15) nodes and weights on [-1, 1], positive half.
inline constexpr double kGk15Nodes[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144838258730, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.0};
inline constexpr double kGk15Weights[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr double kGauss7Weights[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct PanelEstimate {
  double kronrod;
  double error;
};

template <typename F>
PanelEstimate gk15(const F& f, double a, double b) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  double kronrod = 0.0;
  double gauss = 0.0;
  for (int i = 0; i < 7; ++i) {
    const double x = h * kGk15Nodes[i];
    const double fsum = f(c - x) + f(c + x);
    kronrod += kGk15Weights[i] * fsum;
    if (i % 2 == 1) gauss += kGauss7Weights[i / 2] * fsum;
  }
  const double fc = f(c);
  kronrod += kGk15Weights[7] * fc;
  gauss += kGauss7Weights[3] * fc;
  kronrod *= h;
  gauss *= h;
  // QUADPACK-style sharpened error estimate, capped by the raw difference.
  const double diff = std::abs(kronrod - gauss);
  const double err = diff > 0.0 ? std::min(std::pow(200.0 * diff, 1.5), diff)
                                : 0.0;
  return {kronrod, err};
}

template <typename F>
void adapt(const F& f, double a, double b, double tol, int depth,
           QuadResult& out) {
  PanelEstimate e = gk15(f, a, b);
  out.evaluations += 15;
  if (e.error <= tol || depth >= 48 || !(b - a > 1e-14 * (std::abs(a) + 1.0))) {
    out.value += e.kronrod;
    out.error += e.error;
    if (e.error > tol) out.converged = false;
    return;
  }
  const double c = 0.5 * (a + b);
  adapt(f, a, c, 0.5 * tol, depth + 1, out);
  adapt(f, c, b, 0.5 * tol, depth + 1, out);
}

}  // namespace detail

// Adaptive Gauss-Kronrod integral of f over the finite interval [a, b] to
// absolute tolerance abs_tol.
inline QuadResult integrate(const std::function<double(double)>& f, double a,
                            double b, double abs_tol = 1e-10) {
  require_input(b >= a, "integrate: upper limit below lower limit");
  QuadResult out;
  if (a == b) return out;
  detail::adapt(f, a, b, abs_tol, 0, out);
  return out;
}

// Integral of f over [a, infinity) for integrands with exponential decay rate
// |kappa| (kappa < 0): the tail is truncated at a + 60/|kappa|, where
// e^{-60} ~ 9e-27 leaves the truncation error far below any tolerance in use.
inline QuadResult integrate_tail(const std::function<double(double)>& f,
                                 double a, double kappa,
                                 double abs_tol = 1e-10) {
  require_input(kappa < 0.0, "integrate_tail: decay rate must be negative");
  return integrate(f, a, a + 60.0 / std::abs(kappa), abs_tol);
}

// Adaptive tensor quadrature over an axis-aligned box, up to dimension 3,
// realized as nested 1-D adaptive integrals (inner tolerances tightened one
// order per level).
inline QuadResult integrate_box(
    const std::function<double(const Eigen::VectorXd&)>& f,
    const Eigen::VectorXd& lo, const Eigen::VectorXd& hi,
    double abs_tol = 1e-8) {
  const int d = static_cast<int>(lo.size());
  require_input(hi.size() == lo.size(), "integrate_box: bound size mismatch");
  require_input(d >= 1 && d <= 3, "integrate_box: dimension must be 1..3");
  QuadResult out;
  long evals = 0;
  bool inner_ok = true;
  Eigen::VectorXd x = lo;
  std::function<double(int)> level = [&](int j) -> double {
    if (j == d) {
      ++evals;
      return f(x);
    }
    QuadResult r;
    detail::adapt([&](double v) { x[j] = v; return level(j + 1); },
                  lo[j], hi[j], abs_tol * std::pow(0.1, j), 0, r);
    if (!r.converged) inner_ok = false;
    if (j == 0) {
      out.error = r.error;
      out.converged = r.converged;
    }
    return r.value;
  };
  out.value = level(0);
  out.evaluations = evals;
  out.converged = out.converged && inner_ok;
  return out;
}

// Box integral over [lo, infinity)^d with all upper limits truncated at
// lo_j + 60/|kappa|.
inline QuadResult integrate_tail_box(
    const std::function<double(const Eigen::VectorXd&)>& f,
    const Eigen::VectorXd& lo, double kappa, double abs_tol = 1e-8) {
  require_input(kappa < 0.0, "integrate_tail_box: decay rate must be negative");
  Eigen::VectorXd hi =
      lo + Eigen::VectorXd::Constant(lo.size(), 60.0 / std::abs(kappa));
  return integrate_box(f, lo, hi, abs_tol);
}

}  // namespace memix::quad

#endif  // MEMIX_QUADRATURE_HPP
