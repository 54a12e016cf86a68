#ifndef MEMIX_BACKGROUND_HPP
#define MEMIX_BACKGROUND_HPP

#include <cmath>
#include <complex>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "memix/context.hpp"
#include "memix/errors.hpp"
#include "memix/linalg.hpp"
#include "memix/matrix_function.hpp"
#include "memix/me_distribution.hpp"
#include "memix/mmeam.hpp"
#include "memix/risk.hpp"

namespace memix {
namespace bg {

namespace detail {

inline std::string divergent_moment(int ell) {
  return "background moment E[B^" + std::to_string(ell) + "] diverges";
}

}  // namespace detail

// Strictly positive multiplicative factor B scaling every coordinate of a
// risk vector as X / B.  Each supported family exposes the weighted Laplace
// transform G_ell(z) = int r^ell e^{-zr} dG(r) for integer orders ell <= 0,
// which is all the scaled-model formulas consume.
class BackgroundRisk {
 public:
  enum class Kind { degenerate, gamma, discrete };

  static BackgroundRisk degenerate(double b) {
    require_input(std::isfinite(b) && b > 0.0,
                  "BackgroundRisk: scale must be positive");
    BackgroundRisk g;
    g.kind_ = Kind::degenerate;
    g.scale_ = b;
    return g;
  }

  static BackgroundRisk gamma(double shape, double rate) {
    require_input(std::isfinite(shape) && shape > 0.0 && std::isfinite(rate) &&
                      rate > 0.0,
                  "BackgroundRisk: gamma parameters must be positive");
    BackgroundRisk g;
    g.kind_ = Kind::gamma;
    g.shape_ = shape;
    g.rate_ = rate;
    return g;
  }

  static BackgroundRisk discrete(std::vector<double> points,
                                 std::vector<double> probs) {
    require_input(!points.empty() && points.size() == probs.size(),
                  "BackgroundRisk: need matching nonempty atoms and weights");
    double sum = 0.0;
    for (std::size_t i = 0; i < points.size(); ++i) {
      require_input(std::isfinite(points[i]) && points[i] > 0.0,
                    "BackgroundRisk: atoms must be positive");
      require_input(std::isfinite(probs[i]) && probs[i] >= 0.0,
                    "BackgroundRisk: atom weights must be nonnegative");
      sum += probs[i];
    }
    require_input(std::abs(sum - 1.0) <= 1e-12,
                  "BackgroundRisk: atom weights must sum to one");
    BackgroundRisk g;
    g.kind_ = Kind::discrete;
    g.points_ = std::move(points);
    g.probs_ = std::move(probs);
    return g;
  }

  Kind kind() const { return kind_; }
  double scale() const { return scale_; }
  double shape() const { return shape_; }
  double rate() const { return rate_; }
  const std::vector<double>& points() const { return points_; }
  const std::vector<double>& probs() const { return probs_; }

  // Whether E[B^ell] = G_ell(0) is finite.
  bool moment_finite(int ell) const {
    return kind_ != Kind::gamma || shape_ + ell > 0.0;
  }

  // G_ell is holomorphic on Re z > analytic_abscissa(); bounded support makes
  // the transform entire, the gamma family is analytic past -rate.
  double analytic_abscissa() const {
    return kind_ == Kind::gamma ? -rate_
                                : -std::numeric_limits<double>::infinity();
  }

  // G_ell(z) for complex z with Re z above the abscissa (any z for the
  // entire families).
  std::complex<double> transform(int ell, std::complex<double> z) const {
    require_input(ell <= 0, "BackgroundRisk: transform order must be <= 0");
    switch (kind_) {
      case Kind::degenerate:
        return std::pow(scale_, ell) * std::exp(-z * scale_);
      case Kind::gamma: {
        require_domain(moment_finite(ell), detail::divergent_moment(ell));
        // (beta^a / Gamma(a)) Gamma(a+ell) (z+beta)^{-(a+ell)}, assembled in
        // log space so large shapes cannot overflow.
        const std::complex<double> expo =
            std::lgamma(shape_ + ell) - std::lgamma(shape_) +
            shape_ * std::log(rate_) -
            (shape_ + ell) * std::log(z + rate_);
        return std::exp(expo);
      }
      case Kind::discrete: {
        std::complex<double> acc = 0.0;
        for (std::size_t i = 0; i < points_.size(); ++i)
          acc += probs_[i] * std::pow(points_[i], ell) *
                 std::exp(-z * points_[i]);
        return acc;
      }
    }
    throw InputError("BackgroundRisk: unknown kind");
  }

  // E[B^ell] for ell <= 0.
  double moment(int ell) const { return transform(ell, 0.0).real(); }

 private:
  BackgroundRisk() = default;

  Kind kind_ = Kind::degenerate;
  double scale_ = 1.0;
  double shape_ = 0.0;
  double rate_ = 0.0;
  std::vector<double> points_;
  std::vector<double> probs_;
};

// G_ell(A y) for a matrix A with spectrum in the open right half-plane.
// Point-mass families reduce to plain matrix exponentials; the gamma family
// goes through the holomorphic functional calculus (diagonalization with a
// Cauchy-integral fallback, or an explicitly requested method).
inline MatrixXd matrix_laplace(const BackgroundRisk& bg, int ell,
                               const MatrixXd& a, double y,
                               lin::MatFuncMethod method = lin::MatFuncMethod::automatic,
                               const NumericContext& ctx = default_context()) {
  require_input(a.rows() == a.cols() && a.rows() > 0,
                "matrix_laplace: matrix must be square and nonempty");
  require_input(ell <= 0, "matrix_laplace: transform order must be <= 0");
  require_domain(bg.moment_finite(ell), detail::divergent_moment(ell));
  require_domain(y >= 0.0, "matrix_laplace: negative scale");
  const Eigen::Index p = a.rows();
  if (y == 0.0) return bg.moment(ell) * MatrixXd::Identity(p, p);
  require_domain(lin::eigenvalues(a).real().minCoeff() > 0.0,
                 "matrix_laplace: spectrum must lie in the open right "
                 "half-plane");
  if (method == lin::MatFuncMethod::automatic) {
    switch (bg.kind()) {
      case BackgroundRisk::Kind::degenerate:
        return std::pow(bg.scale(), ell) *
               lin::expm(MatrixXd(-a * (y * bg.scale())));
      case BackgroundRisk::Kind::discrete: {
        MatrixXd acc = MatrixXd::Zero(p, p);
        for (std::size_t i = 0; i < bg.points().size(); ++i)
          acc += bg.probs()[i] * std::pow(bg.points()[i], ell) *
                 lin::expm(MatrixXd(-a * (y * bg.points()[i])));
        return acc;
      }
      case BackgroundRisk::Kind::gamma:
        break;
    }
  }
  const lin::ScalarFunc g = [&bg, ell](std::complex<double> z) {
    return bg.transform(ell, z);
  };
  return lin::holo_matrix_func(g, MatrixXd(a * y), method,
                               {bg.analytic_abscissa()}, ctx);
}

// Survival function of the scaled coordinate X_j / B:
//   sum_i w_i alpha_i G(-T_i x) l_i,
// the base mixture survival with e^{T x} replaced by its B-average.
inline double bg_marginal_sf(const MmeamModel& m, const BackgroundRisk& bg,
                             int j, double x,
                             const NumericContext& ctx = default_context()) {
  require_input(j >= 0 && j < m.dim(), "bg_marginal_sf: bad coordinate");
  require_domain(x >= 0.0, "bg_marginal_sf: negative argument");
  const Eigen::VectorXd w = m.weights().coordinate_marginal(j);
  double acc = 0.0;
  for (int i = 0; i < w.size(); ++i) {
    if (w[i] == 0.0) continue;
    const MeTriple& c = m.component(j, i);
    const double term =
        c.alpha() *
        matrix_laplace(bg, 0, MatrixXd(-c.T()), x,
                       lin::MatFuncMethod::automatic, ctx) *
        c.l();
    acc += w[i] * term;
  }
  return acc;
}

inline double bg_marginal_cdf(const MmeamModel& m, const BackgroundRisk& bg,
                              int j, double x,
                              const NumericContext& ctx = default_context()) {
  return 1.0 - bg_marginal_sf(m, bg, j, x, ctx);
}

// Law of the scaled aggregate S / B, carried as the base convolution triples
// plus the background factor; evaluation averages the matrix exponential
// over B via matrix_laplace.
class BgAggregate {
 public:
  BgAggregate(std::vector<double> weights, std::vector<MeTriple> comps,
              BackgroundRisk bg, const NumericContext& ctx)
      : w_(std::move(weights)),
        comp_(std::move(comps)),
        bg_(std::move(bg)),
        ctx_(ctx) {
    kappa_ = comp_[0].kappa();
    for (const auto& c : comp_) kappa_ = std::max(kappa_, c.kappa());
  }

  double sf(double x) const {
    require_domain(x >= 0.0, "BgAggregate::sf: negative argument");
    double acc = 0.0;
    for (std::size_t i = 0; i < comp_.size(); ++i) {
      const MeTriple& c = comp_[i];
      const double term =
          c.alpha() *
          matrix_laplace(bg_, 0, MatrixXd(-c.T()), x,
                         lin::MatFuncMethod::automatic, ctx_) *
          c.l();
      acc += w_[i] * term;
    }
    return acc;
  }

  double cdf(double x) const { return 1.0 - sf(x); }

  // Root of cdf = theta; the exponential seed fits the unscaled aggregate
  // and the doubling bracket absorbs any heavier scaled tail.
  double quantile(double theta) const {
    const double seed = theta > 0.0 && theta < 1.0
                            ? -std::log1p(-theta) / std::abs(kappa_)
                            : 1.0;
    return memix::detail::invert_cdf([this](double x) { return cdf(x); },
                                     seed, theta, ctx_);
  }

 private:
  std::vector<double> w_;
  std::vector<MeTriple> comp_;
  BackgroundRisk bg_;
  double kappa_;
  NumericContext ctx_;
};

inline BgAggregate bg_aggregate(const MmeamModel& m, const BackgroundRisk& bg,
                                const NumericContext& ctx = default_context()) {
  std::vector<double> w;
  std::vector<MeTriple> comps;
  for (const auto& [idx, p] : m.weights().entries()) {
    std::vector<MeTriple> parts;
    for (int j = 0; j < m.dim(); ++j) parts.push_back(m.component(j, idx[j]));
    w.push_back(p);
    comps.push_back(convolve(parts, ctx));
  }
  return BgAggregate(std::move(w), std::move(comps), bg, ctx);
}

// E[(X_j/B)^k (S/B)^h 1{S/B > y}]: the unscaled tail-moment sums with each
// matrix exponential replaced by the order-shifted background transform of
// the same matrix, one transform per power of y.
inline double bg_joint_tail_moment(const MmeamModel& m,
                                   const BackgroundRisk& bg, int j, int k,
                                   int h, double y,
                                   const NumericContext& ctx = default_context()) {
  require_input(j >= 0 && j < m.dim(), "bg_joint_tail_moment: bad coordinate");
  require_input(k >= 0 && h >= 0, "bg_joint_tail_moment: negative power");
  require_domain(y >= 0.0, "bg_joint_tail_moment: negative threshold");
  require_domain(bg.moment_finite(-(k + h)),
                 detail::divergent_moment(-(k + h)));
  if (k == 0) {
    double acc = 0.0;
    for (const auto& [idx, p] : m.weights().entries()) {
      std::vector<MeTriple> parts;
      for (int c = 0; c < m.dim(); ++c) parts.push_back(m.component(c, idx[c]));
      const MeTriple conv = convolve(parts, ctx);
      MatrixXd sum = MatrixXd::Zero(conv.dim(), conv.dim());
      double coef = 1.0;  // h!/ell! y^ell, built incrementally
      for (int i = 2; i <= h; ++i) coef *= i;
      for (int ell = 0; ell <= h; ++ell) {
        sum += lin::neg_matrix_power(conv.T(), h - ell + 1) *
               matrix_laplace(bg, ell - h, MatrixXd(-conv.T()), y,
                              lin::MatFuncMethod::automatic, ctx) *
               coef;
        coef *= y / (ell + 1);
      }
      const double val = conv.alpha() * sum * conv.t();
      acc += p * val;
    }
    return acc;
  }
  require_input(m.dim() >= 2,
                "bg_joint_tail_moment: k >= 1 needs at least two coordinates");
  double fact = 1.0;
  for (int i = 2; i <= k; ++i) fact *= i;
  double acc = 0.0;
  for (const auto& [idx, p] : m.weights().entries()) {
    const MeTriple& cj = m.component(j, idx[j]);
    std::vector<MeTriple> others;
    for (int c = 0; c < m.dim(); ++c)
      if (c != j) others.push_back(m.component(c, idx[c]));
    const MeTriple rest = convolve(others, ctx);
    const Eigen::Index pe = (k + 1) * cj.dim();
    const Eigen::Index pr = rest.dim();
    MatrixXd a = MatrixXd::Zero(pe + pr, pe + pr);
    a.topLeftCorner(pe, pe) = lin::extended_generator(cj.T(), k, 0.0);
    a.block(pe - cj.dim(), pe, cj.dim(), pr) = cj.t() * rest.alpha();
    a.bottomRightCorner(pr, pr) = rest.T();
    RowVectorXd row = RowVectorXd::Zero(pe + pr);
    row.head(cj.dim()) = cj.alpha();
    VectorXd col = VectorXd::Zero(pe + pr);
    col.tail(pr) = rest.t();
    MatrixXd sum = MatrixXd::Zero(pe + pr, pe + pr);
    double coef = 1.0;
    for (int i = 2; i <= h; ++i) coef *= i;
    for (int ell = 0; ell <= h; ++ell) {
      sum += lin::neg_matrix_power(a, h - ell + 1) *
             matrix_laplace(bg, ell - k - h, MatrixXd(-a), y,
                            lin::MatFuncMethod::automatic, ctx) *
             coef;
      coef *= y / (ell + 1);
    }
    const double val = row * sum * col;
    acc += p * fact * val;
  }
  return acc;
}

// Capital allocation for the scaled vector X / B.  The covariance rule mixes
// base cross moments with negative moments of B; the tail rules condition on
// the scaled aggregate exceeding its own value-at-risk.
inline risk::Allocation bg_allocate(const MmeamModel& m,
                                    const BackgroundRisk& bg,
                                    const risk::AllocationRequest& req,
                                    const NumericContext& ctx = default_context()) {
  require_input(req.beta >= 0.0, "allocate: negative loading");
  const int M = m.dim();
  require_domain(bg.moment_finite(-2), detail::divergent_moment(-2));
  const BgAggregate agg = bg_aggregate(m, bg, ctx);
  const double v = agg.quantile(req.theta);
  const double tail = 1.0 - req.theta;
  Eigen::VectorXd out(M);
  if (req.rule == risk::AllocationRequest::Rule::covariance) {
    const double eb1 = bg.moment(-1);
    const double eb2 = bg.moment(-2);
    const MeMixture base = risk::aggregate(m, ctx);
    const double es = base.mean();
    const double esd = es * eb1;
    const double var_sd = base.moment(2) * eb2 - esd * esd;
    require_domain(var_sd > 0.0, "allocate: degenerate aggregate variance");
    const double tvar = bg_joint_tail_moment(m, bg, 0, 0, 1, v, ctx) / tail;
    for (int j = 0; j < M; ++j) {
      double exjs = 0.0;  // E[X_j S] of the unscaled vector
      for (int c = 0; c < M; ++c) {
        std::vector<int> r(M, 0);
        r[j] += 1;
        r[c] += 1;
        exjs += m.cross_moment(r);
      }
      const double exj = m.marginal(j, ctx).mean();
      const double cov = exjs * eb2 - exj * es * eb1 * eb1;
      out[j] = exj * eb1 + cov / var_sd * (tvar - esd);
    }
    return {out, tvar};
  }
  const double es1 = bg_joint_tail_moment(m, bg, 0, 0, 1, v, ctx) / tail;
  const double es2 = bg_joint_tail_moment(m, bg, 0, 0, 2, v, ctx) / tail;
  const double var_c = es2 - es1 * es1;
  require_domain(var_c > 0.0, "allocate: degenerate conditional variance");
  for (int j = 0; j < M; ++j) {
    const double exj = bg_joint_tail_moment(m, bg, j, 1, 0, v, ctx) / tail;
    const double exjs = bg_joint_tail_moment(m, bg, j, 1, 1, v, ctx) / tail;
    const double cov = exjs - exj * es1;
    out[j] = req.rule == risk::AllocationRequest::Rule::tcovp
                 ? exj + req.beta * cov
                 : exj + req.beta * cov / std::sqrt(var_c);
  }
  const double total = req.rule == risk::AllocationRequest::Rule::tcovp
                           ? es1 + req.beta * var_c
                           : es1 + req.beta * std::sqrt(var_c);
  return {out, total};
}

}  // namespace bg
}  // namespace memix

#endif  // MEMIX_BACKGROUND_HPP
