#ifndef MEMIX_ME_DISTRIBUTION_HPP
#define MEMIX_ME_DISTRIBUTION_HPP

#include <cmath>
#include <complex>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "memix/context.hpp"
#include "memix/errors.hpp"
#include "memix/linalg.hpp"

namespace memix {

using Eigen::MatrixXd;
using Eigen::RowVectorXd;
using Eigen::VectorXd;

namespace detail {

// Spectral form of x -> row e^{Tx} col as a sum of complex exponentials.
// Usable only when T has a well-conditioned eigenbasis and the form agrees
// with the Pade exponential on spot checks; used for grid validation and
// sampling caches, never for the public single-point evaluators.
struct Modal {
  bool usable = false;
  Eigen::VectorXcd lam;
  Eigen::VectorXcd pdf_w;
  Eigen::VectorXcd sf_w;

  double pdf(double x) const {
    std::complex<double> acc = 0.0;
    for (Eigen::Index k = 0; k < lam.size(); ++k)
      acc += pdf_w[k] * std::exp(lam[k] * x);
    return acc.real();
  }
  double sf(double x) const {
    std::complex<double> acc = 0.0;
    for (Eigen::Index k = 0; k < lam.size(); ++k)
      acc += sf_w[k] * std::exp(lam[k] * x);
    return acc.real();
  }
};

}  // namespace detail

// Matrix-exponential distribution on [0, inf) given by the triple
// (alpha, T, t): density alpha e^{Tx} t, survival alpha e^{Tx} l with
// l = (-T)^{-1} t.  Instances are immutable and validated on construction:
// consistent dimensions, spectral abscissa strictly negative, unit total
// mass, and density nonnegativity on a log-spaced grid spanning
// [0, span/|kappa|] (nonnegativity of a matrix-exponential form has no
// finite exact test).
class MeTriple {
 public:
  MeTriple(RowVectorXd alpha, MatrixXd T, VectorXd t,
           const NumericContext& ctx = default_context())
      : alpha_(std::move(alpha)), T_(std::move(T)), t_(std::move(t)) {
    validate_shape();
    kappa_ = lin::spectral_abscissa(T_);
    require_input(kappa_ < ctx.kappa_ceiling,
                  "MeTriple: spectral abscissa must be strictly negative, got " +
                      std::to_string(kappa_));
    Eigen::FullPivLU<MatrixXd> lu(-T_);
    require_input(lu.isInvertible(), "MeTriple: -T is singular");
    l_ = lu.solve(t_);
    l2_ = lu.solve(l_);
    const double mass = alpha_ * l_;
    require_input(std::abs(mass - 1.0) <= ctx.normalization_tol,
                  "MeTriple: density mass is " + std::to_string(mass) +
                      ", not 1");
    build_modal(ctx);
    if (ctx.validate_density) check_density_grid(ctx);
  }

  int dim() const { return static_cast<int>(T_.rows()); }
  const RowVectorXd& alpha() const { return alpha_; }
  const MatrixXd& T() const { return T_; }
  const VectorXd& t() const { return t_; }
  const VectorXd& l() const { return l_; }
  double kappa() const { return kappa_; }

  // Exact single-point evaluators (Pade matrix exponential).
  double pdf(double x) const {
    require_domain(x >= 0.0, "MeTriple::pdf: negative argument");
    return alpha_ * lin::expm(MatrixXd(T_ * x)) * t_;
  }
  double cdf(double x) const { return 1.0 - sf(x); }
  double sf(double x) const {
    require_domain(x >= 0.0, "MeTriple::sf: negative argument");
    return alpha_ * lin::expm(MatrixXd(T_ * x)) * l_;
  }

  // Fast evaluators: spectral form when available, otherwise the exact path.
  // Agree with pdf/sf to ~1e-10; used for grids and sampling caches.
  double pdf_fast(double x) const {
    return modal_.usable ? modal_.pdf(x) : pdf(x);
  }
  double sf_fast(double x) const { return modal_.usable ? modal_.sf(x) : sf(x); }

  // r-th raw moment r! alpha (-T)^{-(r+1)} t; r = 0 gives 1.
  double moment(int r) const {
    require_input(r >= 0, "MeTriple::moment: negative order");
    double fact = 1.0;
    for (int i = 2; i <= r; ++i) fact *= i;
    const double base = alpha_ * lin::neg_matrix_power(T_, r + 1) * t_;
    return fact * base;
  }
  double mean() const { return alpha_ * l2_; }

  // Laplace transform alpha (sI - T)^{-1} t, defined wherever sI - T is
  // nonsingular.
  double laplace(double s) const {
    Eigen::FullPivLU<MatrixXd> lu(
        MatrixXd(s * MatrixXd::Identity(dim(), dim()) - T_));
    require_domain(lu.isInvertible(), "MeTriple::laplace: sI - T is singular");
    return alpha_ * lu.solve(t_);
  }

  // Mean excess over z without conditioning: E[(X - z)+] = alpha e^{Tz} l2.
  double mean_excess(double z) const {
    require_domain(z >= 0.0, "MeTriple::mean_excess: negative threshold");
    return alpha_ * lin::expm(MatrixXd(T_ * z)) * l2_;
  }

  friend bool operator==(const MeTriple& a, const MeTriple& b) {
    return a.alpha_ == b.alpha_ && a.T_ == b.T_ && a.t_ == b.t_;
  }

 private:
  void validate_shape() {
    require_input(T_.rows() == T_.cols() && T_.rows() > 0,
                  "MeTriple: T must be square and nonempty");
    require_input(alpha_.size() == T_.rows() && t_.size() == T_.rows(),
                  "MeTriple: alpha/t dimensions do not match T");
    require_input(lin::all_finite(alpha_) && lin::all_finite(T_) &&
                      lin::all_finite(t_),
                  "MeTriple: non-finite entries");
  }

  void build_modal(const NumericContext& ctx) {
    Eigen::EigenSolver<MatrixXd> es(T_, /*computeEigenvectors=*/true);
    if (es.info() != Eigen::Success) return;
    const Eigen::MatrixXcd v = es.eigenvectors();
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(v);
    const double smin = svd.singularValues().minCoeff();
    if (!(smin > 0.0) ||
        svd.singularValues().maxCoeff() / smin > ctx.eigen_cond_limit)
      return;
    Eigen::PartialPivLU<Eigen::MatrixXcd> lu(v);
    const Eigen::RowVectorXcd row =
        alpha_.cast<std::complex<double>>() * v;
    const Eigen::VectorXcd yt = lu.solve(t_.cast<std::complex<double>>());
    const Eigen::VectorXcd yl = lu.solve(l_.cast<std::complex<double>>());
    modal_.lam = es.eigenvalues();
    modal_.pdf_w = row.transpose().cwiseProduct(yt);
    modal_.sf_w = row.transpose().cwiseProduct(yl);
    modal_.usable = true;
    // Spot check against the exact evaluator before trusting the form.
    for (double x : {0.0, 1.0 / std::abs(kappa_), 10.0 / std::abs(kappa_)}) {
      const double exact = alpha_ * lin::expm(MatrixXd(T_ * x)) * t_;
      if (std::abs(modal_.pdf(x) - exact) > 1e-10 * (1.0 + std::abs(exact))) {
        modal_.usable = false;
        return;
      }
    }
  }

  void check_density_grid(const NumericContext& ctx) const {
    const int n = modal_.usable ? ctx.density_grid_points
                                : std::min(ctx.density_grid_points, 128);
    const double xmax = ctx.density_span / std::abs(kappa_);
    const double xmin = xmax * 1e-6;
    const double ratio = std::pow(xmax / xmin, 1.0 / (n - 1));
    std::vector<double> vals;
    vals.reserve(n + 1);
    vals.push_back(alpha_ * t_);  // x = 0
    double x = xmin;
    for (int i = 0; i < n; ++i, x *= ratio) vals.push_back(pdf_fast(x));
    double peak = 0.0;
    for (double v : vals) peak = std::max(peak, std::abs(v));
    const double floor = ctx.density_floor * std::max(1.0, peak);
    for (double v : vals)
      require_input(v >= floor,
                    "MeTriple: density negative on the validation grid (" +
                        std::to_string(v) + ")");
  }

  RowVectorXd alpha_;
  MatrixXd T_;
  VectorXd t_;
  VectorXd l_;   // (-T)^{-1} t
  VectorXd l2_;  // (-T)^{-2} t
  double kappa_ = 0.0;
  detail::Modal modal_;
};

// Affine mixture of matrix-exponential laws: real weights summing to 1
// (individual weights may be negative), total density nonnegative.
class MeMixture {
 public:
  MeMixture(std::vector<double> weights, std::vector<MeTriple> components,
            const NumericContext& ctx = default_context())
      : w_(std::move(weights)), comp_(std::move(components)) {
    require_input(!comp_.empty(), "MeMixture: no components");
    require_input(w_.size() == comp_.size(),
                  "MeMixture: weight/component count mismatch");
    double sum = 0.0;
    for (double w : w_) sum += w;
    require_input(std::abs(sum - 1.0) <= ctx.weight_sum_tol,
                  "MeMixture: weights sum to " + std::to_string(sum) +
                      ", not 1");
    bool signed_weights = false;
    for (double w : w_) signed_weights = signed_weights || w < 0.0;
    if (ctx.validate_density && signed_weights) check_density_grid(ctx);
  }

  MeMixture(const MeTriple& tr) : w_{1.0}, comp_{tr} {}  // NOLINT: deliberate

  int size() const { return static_cast<int>(comp_.size()); }
  double weight(int i) const { return w_[i]; }
  const MeTriple& component(int i) const { return comp_[i]; }
  const std::vector<double>& weights() const { return w_; }
  const std::vector<MeTriple>& components() const { return comp_; }

  // Slowest component decay rate; governs bracketing and grid spans.
  double kappa() const {
    double k = comp_[0].kappa();
    for (const auto& c : comp_) k = std::max(k, c.kappa());
    return k;
  }

  double pdf(double x) const {
    double acc = 0.0;
    for (int i = 0; i < size(); ++i) acc += w_[i] * comp_[i].pdf(x);
    return acc;
  }
  double cdf(double x) const { return 1.0 - sf(x); }
  double sf(double x) const {
    double acc = 0.0;
    for (int i = 0; i < size(); ++i) acc += w_[i] * comp_[i].sf(x);
    return acc;
  }
  double pdf_fast(double x) const {
    double acc = 0.0;
    for (int i = 0; i < size(); ++i) acc += w_[i] * comp_[i].pdf_fast(x);
    return acc;
  }
  double sf_fast(double x) const {
    double acc = 0.0;
    for (int i = 0; i < size(); ++i) acc += w_[i] * comp_[i].sf_fast(x);
    return acc;
  }

  double moment(int r) const {
    double acc = 0.0;
    for (int i = 0; i < size(); ++i) acc += w_[i] * comp_[i].moment(r);
    return acc;
  }
  double mean() const { return moment(1); }
  double mean_excess(double z) const {
    double acc = 0.0;
    for (int i = 0; i < size(); ++i) acc += w_[i] * comp_[i].mean_excess(z);
    return acc;
  }

 private:
  void check_density_grid(const NumericContext& ctx) const {
    const int n = ctx.density_grid_points;
    const double xmax = ctx.density_span / std::abs(kappa());
    const double xmin = xmax * 1e-6;
    const double ratio = std::pow(xmax / xmin, 1.0 / (n - 1));
    std::vector<double> vals;
    vals.reserve(n + 1);
    vals.push_back(pdf_fast(0.0));
    double x = xmin;
    for (int i = 0; i < n; ++i, x *= ratio) vals.push_back(pdf_fast(x));
    double peak = 0.0;
    for (double v : vals) peak = std::max(peak, std::abs(v));
    const double floor = ctx.density_floor * std::max(1.0, peak);
    for (double v : vals)
      require_input(v >= floor,
                    "MeMixture: density negative on the validation grid (" +
                        std::to_string(v) + ")");
  }

  std::vector<double> w_;
  std::vector<MeTriple> comp_;
};

// Convolution closure: block upper-bidiagonal generator whose off-diagonal
// blocks t_j alpha_{j+1} hand over from one summand to the next.
inline MeTriple convolve(const std::vector<MeTriple>& parts,
                         const NumericContext& ctx = default_context()) {
  require_input(!parts.empty(), "convolve: empty list");
  if (parts.size() == 1) return parts.front();
  Eigen::Index total = 0;
  for (const auto& p : parts) total += p.dim();
  RowVectorXd alpha = RowVectorXd::Zero(total);
  MatrixXd T = MatrixXd::Zero(total, total);
  VectorXd t = VectorXd::Zero(total);
  Eigen::Index off = 0;
  for (std::size_t j = 0; j < parts.size(); ++j) {
    const auto& p = parts[j];
    T.block(off, off, p.dim(), p.dim()) = p.T();
    if (j + 1 < parts.size()) {
      const auto& q = parts[j + 1];
      T.block(off, off + p.dim(), p.dim(), q.dim()) = p.t() * q.alpha();
    }
    off += p.dim();
  }
  alpha.head(parts.front().dim()) = parts.front().alpha();
  t.tail(parts.back().dim()) = parts.back().t();
  return MeTriple(std::move(alpha), std::move(T), std::move(t), ctx);
}

// Single-triple form of an affine mixture: block-diagonal generator with the
// weights folded into the initial vector.
inline MeTriple mixture_to_triple(const MeMixture& mix,
                                  const NumericContext& ctx = default_context()) {
  Eigen::Index total = 0;
  for (const auto& c : mix.components()) total += c.dim();
  RowVectorXd alpha = RowVectorXd::Zero(total);
  MatrixXd T = MatrixXd::Zero(total, total);
  VectorXd t = VectorXd::Zero(total);
  Eigen::Index off = 0;
  for (int i = 0; i < mix.size(); ++i) {
    const auto& c = mix.component(i);
    alpha.segment(off, c.dim()) = mix.weight(i) * c.alpha();
    T.block(off, off, c.dim(), c.dim()) = c.T();
    t.segment(off, c.dim()) = c.t();
    off += c.dim();
  }
  return MeTriple(std::move(alpha), std::move(T), std::move(t), ctx);
}

namespace detail {

// Normalized law of f_d * prod_{s in survivors} SF_s as a Kronecker triple,
// together with its raw mass.
struct WeightedTriple {
  double weight;
  MeTriple triple;
};

inline WeightedTriple density_survival_product(
    const std::vector<MeTriple>& laws, int density_index,
    const std::vector<int>& survivors, double sign,
    const NumericContext& ctx) {
  RowVectorXd alpha = laws[density_index].alpha();
  MatrixXd T = laws[density_index].T();
  VectorXd t = laws[density_index].t();
  for (int s : survivors) {
    alpha = lin::kron_prod(MatrixXd(alpha), MatrixXd(laws[s].alpha()));
    T = lin::kron_sum(T, laws[s].T());
    t = lin::kron_prod(MatrixXd(t), MatrixXd(laws[s].l()));
  }
  Eigen::FullPivLU<MatrixXd> lu(-T);
  require_domain(lu.isInvertible(), "order statistic: singular Kronecker sum");
  const double mass = alpha * lu.solve(t);
  if (!(mass > 0.0))
    throw NumericError("order statistic: nonpositive component mass");
  return {sign * mass, MeTriple(RowVectorXd(alpha / mass), std::move(T),
                                std::move(t), ctx)};
}

}  // namespace detail

// Law of the k-th smallest of independent draws X_1 ~ laws[0], ...,
// X_n ~ laws[n-1], as an affine mixture (weights of both signs).  Identical
// inputs use the binomial expansion of F^{k-1} f SF^{n-k}; the general case
// enumerates, for each density coordinate, the subsets realizing k-1 values
// below x, expanding each CDF factor as 1 - SF.
inline MeMixture order_stat_indep(const std::vector<MeTriple>& laws, int k,
                                  const NumericContext& ctx = default_context()) {
  const int n = static_cast<int>(laws.size());
  require_input(n >= 1, "order_stat_indep: empty list");
  require_input(k >= 1 && k <= n, "order_stat_indep: k out of range");
  if (n == 1) return MeMixture(laws[0]);

  std::vector<double> weights;
  std::vector<MeTriple> comps;

  bool iid = true;
  for (const auto& l : laws) iid = iid && (l == laws.front());

  if (iid) {
    const auto& f = laws.front();
    double big_k = 1.0;  // n! / ((k-1)! (n-k)!)
    for (int i = 2; i <= n; ++i) big_k *= i;
    for (int i = 2; i <= k - 1; ++i) big_k /= i;
    for (int i = 2; i <= n - k; ++i) big_k /= i;
    double binom = 1.0;  // C(k-1, m)
    for (int m = 0; m < k; ++m) {
      const int blocks = n - k + m + 1;  // f SF^{blocks-1}
      RowVectorXd alpha = f.alpha();
      MatrixXd T = f.T();
      VectorXd t = f.t();
      for (int b = 1; b < blocks; ++b) {
        alpha = lin::kron_prod(MatrixXd(alpha), MatrixXd(f.alpha()));
        T = lin::kron_sum(T, f.T());
        t = lin::kron_prod(MatrixXd(t), MatrixXd(f.l()));
      }
      const double sign = (m % 2 == 0) ? 1.0 : -1.0;
      weights.push_back(big_k * binom * sign / blocks);
      comps.emplace_back(RowVectorXd(alpha * blocks), std::move(T),
                         std::move(t), ctx);
      binom *= static_cast<double>(k - 1 - m) / (m + 1);
    }
    return MeMixture(std::move(weights), std::move(comps), ctx);
  }

  // General independent case.  For each choice of the coordinate realizing
  // the k-th value, each (k-1)-subset A of the others lies below x; expand
  // prod_{a in A} F_a into survival products over subsets S of A.
  for (int d = 0; d < n; ++d) {
    std::vector<int> rest;
    for (int j = 0; j < n; ++j)
      if (j != d) rest.push_back(j);
    const int r = n - 1;
    for (unsigned mask = 0; mask < (1u << r); ++mask) {
      if (__builtin_popcount(mask) != k - 1) continue;
      std::vector<int> below, above;
      for (int b = 0; b < r; ++b)
        (mask & (1u << b) ? below : above).push_back(rest[b]);
      for (unsigned s = 0; s < (1u << (k - 1)); ++s) {
        std::vector<int> survivors = above;
        int sign_flips = 0;
        for (int b = 0; b < k - 1; ++b)
          if (s & (1u << b)) {
            survivors.push_back(below[b]);
            ++sign_flips;
          }
        auto wt = detail::density_survival_product(
            laws, d, survivors, (sign_flips % 2 == 0) ? 1.0 : -1.0, ctx);
        weights.push_back(wt.weight);
        comps.push_back(std::move(wt.triple));
      }
    }
  }
  return MeMixture(std::move(weights), std::move(comps), ctx);
}

// Law of X - z given X > z: the initial vector advances to
// alpha e^{Tz} / (alpha e^{Tz} l).
inline MeTriple residual(const MeTriple& tr, double z,
                         const NumericContext& ctx = default_context()) {
  require_domain(z >= 0.0, "residual: negative threshold");
  if (z == 0.0) return tr;
  const RowVectorXd row = tr.alpha() * lin::expm(MatrixXd(tr.T() * z));
  const double surv = row * tr.l();
  if (!(surv > ctx.survival_floor))
    throw NumericError("residual: survival underflow at z = " +
                       std::to_string(z));
  return MeTriple(RowVectorXd(row / surv), tr.T(), tr.t(), ctx);
}

inline MeMixture residual(const MeMixture& mix, double z,
                          const NumericContext& ctx = default_context()) {
  require_domain(z >= 0.0, "residual: negative threshold");
  if (z == 0.0) return mix;
  std::vector<double> weights;
  std::vector<MeTriple> comps;
  double total = 0.0;
  for (int i = 0; i < mix.size(); ++i) {
    const double s = mix.component(i).sf_fast(z);
    if (!(s > ctx.survival_floor)) continue;  // weightless extinct component
    total += mix.weight(i) * s;
    weights.push_back(mix.weight(i) * s);
    comps.push_back(residual(mix.component(i), z, ctx));
  }
  if (comps.empty() || !(std::abs(total) > ctx.survival_floor))
    throw NumericError("residual: mixture survival underflow at z = " +
                       std::to_string(z));
  for (double& w : weights) w /= total;
  return MeMixture(std::move(weights), std::move(comps), ctx);
}

// r-th equilibrium (integrated-tail) law.  One step maps the density
// a e^{Tx} c to its normalized survival a e^{Tx} c' / (a (-T)^{-1} c') with
// c' = (-T)^{-1} c; applied r times.
inline MeTriple equilibrium(const MeTriple& tr, int r,
                            const NumericContext& ctx = default_context()) {
  require_input(r >= 1, "equilibrium: order must be >= 1");
  Eigen::FullPivLU<MatrixXd> lu(MatrixXd(-tr.T()));
  RowVectorXd a = tr.alpha();
  VectorXd c = tr.t();
  for (int step = 0; step < r; ++step) {
    c = lu.solve(c);
    const double mass = a * lu.solve(c);
    a /= mass;
  }
  return MeTriple(std::move(a), tr.T(), std::move(c), ctx);
}

namespace detail {

// Root of cdf(x) = theta on [0, inf) for a nondecreasing cdf: double the
// seeded bracket until it straddles the level, then safeguarded
// bisection/secant to |cdf(x) - theta| <= ctx.quantile_tol.
template <class Cdf>
double invert_cdf(const Cdf& cdf, double seed, double theta,
                  const NumericContext& ctx) {
  require_domain(theta >= 0.0 && theta < 1.0,
                 "quantile: level must lie in [0, 1)");
  if (theta == 0.0) return 0.0;
  double lo = 0.0, f_lo = cdf(0.0);
  if (f_lo >= theta) return 0.0;
  double hi = seed;
  double f_hi = cdf(hi);
  int iter = 0;
  while (f_hi < theta) {
    lo = hi;
    f_lo = f_hi;
    hi *= 2.0;
    f_hi = cdf(hi);
    if (++iter > 80)
      throw NumericError("quantile: failed to bracket the level");
  }
  double x = hi, fx = f_hi;
  for (iter = 0; iter < ctx.quantile_max_iter; ++iter) {
    if (std::abs(fx - theta) <= ctx.quantile_tol) return x;
    // Secant step, clipped into the bracket; bisection when degenerate.
    double cand = (f_hi != f_lo)
                      ? lo + (theta - f_lo) * (hi - lo) / (f_hi - f_lo)
                      : 0.5 * (lo + hi);
    if (!(cand > lo) || !(cand < hi)) cand = 0.5 * (lo + hi);
    x = cand;
    fx = cdf(x);
    if (fx < theta) {
      lo = x;
      f_lo = fx;
    } else {
      hi = x;
      f_hi = fx;
    }
  }
  throw NumericError("quantile: no convergence after " +
                     std::to_string(ctx.quantile_max_iter) + " iterations");
}

}  // namespace detail

// Quantile (value-at-risk) of a nonnegative law: the root of CDF(x) = theta.
inline double quantile(const MeMixture& d, double theta,
                       const NumericContext& ctx = default_context()) {
  const double seed =
      theta > 0.0 && theta < 1.0
          ? -std::log1p(-theta) / std::abs(d.kappa())
          : 1.0;
  return detail::invert_cdf([&](double x) { return 1.0 - d.sf(x); }, seed,
                            theta, ctx);
}

struct EsscherParams {
  int n = 0;
  double lambda = 0.0;
};

struct SizeBiased {
  MeTriple triple;
  double norm;  // C = n! alpha (lambda I - T)^{-(n+1)} t
};

// Size-biased exponential tilt: density x^n e^{-lambda x} f(x) / C.  The
// result lives on the (n+1)p-dimensional extended generator; requires
// lambda > kappa so the tilt integrates.
inline SizeBiased esscher_size_biased(const MeTriple& tr, EsscherParams ep,
                                      const NumericContext& ctx = default_context()) {
  require_input(ep.n >= 0, "esscher_size_biased: negative power");
  require_domain(ep.lambda > tr.kappa(),
                 "esscher_size_biased: lambda must exceed the spectral "
                 "abscissa " + std::to_string(tr.kappa()));
  const int p = tr.dim();
  Eigen::FullPivLU<MatrixXd> lu(MatrixXd(
      ep.lambda * MatrixXd::Identity(p, p) - tr.T()));
  require_domain(lu.isInvertible(), "esscher_size_biased: singular tilt");
  VectorXd v = tr.t();
  for (int i = 0; i <= ep.n; ++i) v = lu.solve(v);
  double fact = 1.0;
  for (int i = 2; i <= ep.n; ++i) fact *= i;
  const double dot = tr.alpha() * v;
  const double norm = fact * dot;
  if (!(norm > 0.0))
    throw NumericError("esscher_size_biased: nonpositive normalization");

  RowVectorXd alpha = RowVectorXd::Zero((ep.n + 1) * p);
  alpha.head(p) = (fact / norm) * tr.alpha();
  VectorXd t = VectorXd::Zero((ep.n + 1) * p);
  t.tail(p) = tr.t();
  NumericContext wide = ctx;
  if (ep.lambda < 0.0) wide.density_span *= 2.0;  // slower-decaying tilt
  return {MeTriple(std::move(alpha),
                   lin::extended_generator(tr.T(), ep.n, ep.lambda),
                   std::move(t), wide),
          norm};
}

}  // namespace memix

#endif  // MEMIX_ME_DISTRIBUTION_HPP
