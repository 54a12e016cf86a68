#ifndef MEMIX_RISK_HPP
#define MEMIX_RISK_HPP

#include <algorithm>
#include <cmath>
#include <map>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "memix/context.hpp"
#include "memix/errors.hpp"
#include "memix/linalg.hpp"
#include "memix/me_distribution.hpp"
#include "memix/mmeam.hpp"

namespace memix {
namespace risk {

// Tail conditional expectation E[Y | Y > V@R_theta(Y)], equal to the
// tail value-at-risk for these continuous laws.
inline double tail_expectation(const MeMixture& d, double theta,
                               const NumericContext& ctx = default_context()) {
  const double v = quantile(d, theta, ctx);
  return v + residual(d, v, ctx).mean();
}

// Multivariate tail conditional expectation: coordinate j of
// E[X | X > V@R_theta(X)] with componentwise marginal quantiles.
inline Eigen::VectorXd mtce(const MmeamModel& m, const Eigen::VectorXd& theta,
                            const NumericContext& ctx = default_context()) {
  require_input(theta.size() == m.dim(), "mtce: level arity mismatch");
  Eigen::VectorXd z(m.dim());
  for (int j = 0; j < m.dim(); ++j)
    z[j] = quantile(m.marginal(j, ctx), theta[j], ctx);
  const MmeamModel res = m.residual_lifetime(z, ctx);
  Eigen::VectorXd out(m.dim());
  for (int j = 0; j < m.dim(); ++j)
    out[j] = z[j] + res.marginal(j, ctx).mean();
  return out;
}

// Conditional covariance matrix of X given the joint exceedance of the
// componentwise V@R levels.
inline Eigen::MatrixXd mtcov(const MmeamModel& m, const Eigen::VectorXd& theta,
                             const NumericContext& ctx = default_context()) {
  require_input(theta.size() == m.dim(), "mtcov: level arity mismatch");
  Eigen::VectorXd z(m.dim());
  for (int j = 0; j < m.dim(); ++j)
    z[j] = quantile(m.marginal(j, ctx), theta[j], ctx);
  const MmeamModel res = m.residual_lifetime(z, ctx);
  Eigen::VectorXd ym(m.dim());
  for (int j = 0; j < m.dim(); ++j) ym[j] = res.marginal(j, ctx).mean();
  Eigen::MatrixXd out(m.dim(), m.dim());
  for (int j1 = 0; j1 < m.dim(); ++j1) {
    for (int j2 = j1; j2 < m.dim(); ++j2) {
      std::vector<int> r(m.dim(), 0);
      r[j1] += 1;
      r[j2] += 1;
      const double yy = res.cross_moment(r);
      // E[X_a X_b | X > z] with X = z + Y on the exceedance event.
      const double xx = z[j1] * z[j2] + z[j1] * ym[j2] + z[j2] * ym[j1] + yy;
      const double c = xx - (z[j1] + ym[j1]) * (z[j2] + ym[j2]);
      out(j1, j2) = c;
      out(j2, j1) = c;
    }
  }
  return out;
}

// Law of the aggregate S = X_1 + ... + X_M: one convolution triple per
// mixing-weight entry.
inline MeMixture aggregate(const MmeamModel& m,
                           const NumericContext& ctx = default_context()) {
  std::vector<double> w;
  std::vector<MeTriple> comps;
  for (const auto& [idx, p] : m.weights().entries()) {
    std::vector<MeTriple> parts;
    for (int j = 0; j < m.dim(); ++j) parts.push_back(m.component(j, idx[j]));
    w.push_back(p);
    comps.push_back(convolve(parts, ctx));
  }
  return MeMixture(std::move(w), std::move(comps), ctx);
}

struct StopLoss {
  double value = 0.0;
  bool extinct = false;  // survival underflowed at the deductible
};

// E[(S - d)_+^r] via the residual law of the aggregate.
inline StopLoss stop_loss_moment(const MmeamModel& m, double d, int r,
                                 const NumericContext& ctx = default_context()) {
  require_input(r >= 1, "stop_loss_moment: order must be >= 1");
  require_domain(d >= 0.0, "stop_loss_moment: negative deductible");
  const MeMixture agg = aggregate(m, ctx);
  const double sf = agg.sf(d);
  if (!(sf > ctx.survival_floor)) return {0.0, true};
  return {residual(agg, d, ctx).moment(r) * sf, false};
}

struct ExcessMoment {
  double conditional;    // E[prod (X_j - z_j)^{r_j} | X > z]
  double unconditional;  // E[prod (X_j - z_j)_+^{r_j}]
};

inline ExcessMoment excess_cross_moment(const MmeamModel& m,
                                        const Eigen::VectorXd& z,
                                        const std::vector<int>& r,
                                        const NumericContext& ctx = default_context()) {
  const double cond = m.residual_lifetime(z, ctx).cross_moment(r);
  return {cond, cond * m.joint_survival(z)};
}

// E[X_j^k S^h 1{S > y}].  The k = 0 branch integrates the aggregate density
// tail directly; k >= 1 couples the j-th component's extended generator to
// the convolution of the remaining coordinates through a block matrix whose
// corner exponential realizes the x^k-weighted convolution density.
inline double joint_tail_moment(const MmeamModel& m, int j, int k, int h,
                                double y,
                                const NumericContext& ctx = default_context()) {
  require_input(j >= 0 && j < m.dim(), "joint_tail_moment: bad coordinate");
  require_input(k >= 0 && h >= 0, "joint_tail_moment: negative power");
  require_domain(y >= 0.0, "joint_tail_moment: negative threshold");
  if (k == 0) {
    double acc = 0.0;
    for (const auto& [idx, p] : m.weights().entries()) {
      std::vector<MeTriple> parts;
      for (int c = 0; c < m.dim(); ++c) parts.push_back(m.component(c, idx[c]));
      const MeTriple conv = convolve(parts, ctx);
      const double val =
          conv.alpha() * lin::tail_integral(conv.T(), h, y) * conv.t();
      acc += p * val;
    }
    return acc;
  }
  require_input(m.dim() >= 2,
                "joint_tail_moment: k >= 1 needs at least two coordinates");
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
    const double val = row * lin::tail_integral(a, h, y) * col;
    acc += p * fact * val;
  }
  return acc;
}

// Treaty on one order statistic: the reinsurer pays g(x) with g drawn from
// the admissible family 0 <= g(x) <= x.
struct OrderStatTreaty {
  enum class Kind { none, full, proportional, excess };
  Kind kind = Kind::none;
  double share = 1.0;      // proportional coefficient in [0, 1]
  double threshold = 0.0;  // excess-of-loss attachment point
};

struct ReinsuranceSpec {
  enum class Treaty { lcr, ecomor, per_os };
  Treaty treaty = Treaty::lcr;
  int k = 1;
  std::vector<OrderStatTreaty> layers;

  static ReinsuranceSpec lcr(int k) {
    ReinsuranceSpec s;
    s.treaty = Treaty::lcr;
    s.k = k;
    return s;
  }
  static ReinsuranceSpec ecomor(int k) {
    ReinsuranceSpec s;
    s.treaty = Treaty::ecomor;
    s.k = k;
    return s;
  }
  static ReinsuranceSpec per_os(std::vector<OrderStatTreaty> layers) {
    ReinsuranceSpec s;
    s.treaty = Treaty::per_os;
    s.layers = std::move(layers);
    return s;
  }
};

// Expected reinsured amount E[R] = sum_j E[g_j(X_{j:M})] over order
// statistics.  LCR(k) covers the k largest losses in full; ECOMOR(k) covers
// the excesses over the k-th largest.
inline double reinsurance_premium(const MmeamModel& m,
                                  const ReinsuranceSpec& spec,
                                  const NumericContext& ctx = default_context()) {
  const int M = m.dim();
  switch (spec.treaty) {
    case ReinsuranceSpec::Treaty::lcr: {
      require_input(spec.k >= 1 && spec.k <= M, "reinsurance: LCR order out "
                    "of range");
      double acc = 0.0;
      for (int j = M - spec.k + 1; j <= M; ++j)
        acc += m.order_statistic(j, ctx).mean();
      return acc;
    }
    case ReinsuranceSpec::Treaty::ecomor: {
      require_input(spec.k >= 2 && spec.k <= M,
                    "reinsurance: ECOMOR order out of range");
      double acc = 0.0;
      for (int j = M - spec.k + 2; j <= M; ++j)
        acc += m.order_statistic(j, ctx).mean();
      acc -= (spec.k - 1) * m.order_statistic(M - spec.k + 1, ctx).mean();
      return acc;
    }
    case ReinsuranceSpec::Treaty::per_os: {
      require_input(static_cast<int>(spec.layers.size()) == M,
                    "reinsurance: need one treaty per order statistic");
      double acc = 0.0;
      for (int j = 1; j <= M; ++j) {
        const OrderStatTreaty& g = spec.layers[j - 1];
        if (g.kind == OrderStatTreaty::Kind::none) continue;
        const MeMixture os = m.order_statistic(j, ctx);
        switch (g.kind) {
          case OrderStatTreaty::Kind::full:
            acc += os.mean();
            break;
          case OrderStatTreaty::Kind::proportional:
            require_input(g.share >= 0.0 && g.share <= 1.0,
                          "reinsurance: proportional share outside [0, 1]");
            acc += g.share * os.mean();
            break;
          case OrderStatTreaty::Kind::excess:
            require_input(g.threshold >= 0.0,
                          "reinsurance: negative attachment point");
            acc += os.mean_excess(g.threshold);
            break;
          case OrderStatTreaty::Kind::none:
            break;
        }
      }
      return acc;
    }
  }
  throw InputError("reinsurance: unknown treaty");
}

enum class CovarMode { eq, gt, sum_given_x1 };

// Conditional value-at-risk of X_2 (or of the aggregate) given distress of
// X_1: eq conditions on X_1 = V@R, gt on X_1 > V@R; sum_given_x1 returns
// V@R_{theta2} of S given X_1 > V@R_{theta1}(X_1).
inline double covar(const MmeamModel& m, CovarMode mode, double theta1,
                    double theta2,
                    const NumericContext& ctx = default_context()) {
  require_input(m.dim() >= 2, "covar: need at least two coordinates");
  const double v1 = quantile(m.marginal(0, ctx), theta1, ctx);
  switch (mode) {
    case CovarMode::eq: {
      const MmeamModel cond = m.condition_on({{0, v1}}, ctx);
      return quantile(cond.marginal(0, ctx), theta2, ctx);
    }
    case CovarMode::gt: {
      Eigen::VectorXd z = Eigen::VectorXd::Zero(m.dim());
      z[0] = v1;
      const MmeamModel res = m.residual_lifetime(z, ctx);
      return quantile(res.marginal(1, ctx), theta2, ctx);
    }
    case CovarMode::sum_given_x1: {
      Eigen::VectorXd z = Eigen::VectorXd::Zero(m.dim());
      z[0] = v1;
      const MmeamModel res = m.residual_lifetime(z, ctx);
      return v1 + quantile(aggregate(res, ctx), theta2, ctx);
    }
  }
  throw InputError("covar: unknown mode");
}

// Premium under the weight x_1^{n_1} ... x_M^{n_M} e^{-<lambda, x>}: the
// mean of coordinate j after the size-biased tilt.
inline double weighted_premium(const MmeamModel& m, int j,
                               const std::vector<int>& n,
                               const Eigen::VectorXd& lambda,
                               const NumericContext& ctx = default_context()) {
  require_input(j >= 0 && j < m.dim(), "weighted_premium: bad coordinate");
  return m.esscher(n, lambda, ctx).model.marginal(j, ctx).mean();
}

struct AllocationRequest {
  enum class Rule { covariance, tcovp, tcpa };
  Rule rule = Rule::covariance;
  double theta = 0.0;
  double beta = 0.0;
};

struct Allocation {
  Eigen::VectorXd per_risk;
  double total;  // TV@R, TVP, or TSDP of S depending on the rule
};

// Capital allocation of the aggregate risk across coordinates.  The
// covariance rule spreads TV@R_theta(S) - E[S] by covariance shares; the
// TCovP/TCPA rules load conditional covariances given S > V@R_theta(S),
// normalized (for TCPA) by the conditional standard deviation.  The reported
// total is computed independently from the aggregate law; per-risk values
// sum to it.
inline Allocation allocate(const MmeamModel& m, const AllocationRequest& req,
                           const NumericContext& ctx = default_context()) {
  require_input(req.beta >= 0.0, "allocate: negative loading");
  const int M = m.dim();
  const MeMixture agg = aggregate(m, ctx);
  Eigen::VectorXd out(M);
  if (req.rule == AllocationRequest::Rule::covariance) {
    const double es = agg.mean();
    const double var_s = agg.moment(2) - es * es;
    require_domain(var_s > 0.0, "allocate: degenerate aggregate variance");
    const double tvar = tail_expectation(agg, req.theta, ctx);
    for (int j = 0; j < M; ++j) {
      double exjs = 0.0;  // E[X_j S]
      for (int c = 0; c < M; ++c) {
        std::vector<int> r(M, 0);
        r[j] += 1;
        r[c] += 1;
        exjs += m.cross_moment(r);
      }
      const double exj = m.marginal(j, ctx).mean();
      const double cov = exjs - exj * es;
      out[j] = exj + cov / var_s * (tvar - es);
    }
    return {out, tvar};
  }
  const double v = quantile(agg, req.theta, ctx);
  const double tail = 1.0 - req.theta;  // P(S > v) at root-finder accuracy
  const double es1 = joint_tail_moment(m, 0, 0, 1, v, ctx) / tail;
  const double es2 = joint_tail_moment(m, 0, 0, 2, v, ctx) / tail;
  const double var_c = es2 - es1 * es1;
  require_domain(var_c > 0.0, "allocate: degenerate conditional variance");
  for (int j = 0; j < M; ++j) {
    const double exj = joint_tail_moment(m, j, 1, 0, v, ctx) / tail;
    const double exjs = joint_tail_moment(m, j, 1, 1, v, ctx) / tail;
    const double cov = exjs - exj * es1;
    out[j] = req.rule == AllocationRequest::Rule::tcovp
                 ? exj + req.beta * cov
                 : exj + req.beta * cov / std::sqrt(var_c);
  }
  const double total = req.rule == AllocationRequest::Rule::tcovp
                           ? es1 + req.beta * var_c
                           : es1 + req.beta * std::sqrt(var_c);
  return {out, total};
}

}  // namespace risk
}  // namespace memix

#endif  // MEMIX_RISK_HPP
