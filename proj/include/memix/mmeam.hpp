#ifndef MEMIX_MMEAM_HPP
#define MEMIX_MMEAM_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "memix/context.hpp"
#include "memix/errors.hpp"
#include "memix/linalg.hpp"
#include "memix/me_distribution.hpp"

namespace memix {

// Mixing weights of a multivariate affine mixture: a real-valued tensor over
// multi-indices (i_1..i_M), i_j in [0, L_j), stored sparsely as sorted
// (index, weight) pairs with zeros dropped and duplicates merged.  Weights
// may be negative; they must sum to 1.
class WeightTensor {
 public:
  using Index = std::vector<int>;
  using Entry = std::pair<Index, double>;

  static constexpr std::int64_t kDenseCap = std::int64_t(1) << 24;

  WeightTensor(std::vector<int> shape, const std::vector<Entry>& entries,
               const NumericContext& ctx = default_context())
      : shape_(std::move(shape)) {
    require_input(!shape_.empty(), "WeightTensor: empty shape");
    for (int L : shape_)
      require_input(L >= 1, "WeightTensor: nonpositive pool size");
    std::map<Index, double> acc;
    for (const auto& [idx, w] : entries) {
      require_input(static_cast<int>(idx.size()) == dims(),
                    "WeightTensor: index arity mismatch");
      for (int j = 0; j < dims(); ++j)
        require_input(idx[j] >= 0 && idx[j] < shape_[j],
                      "WeightTensor: index out of range");
      acc[idx] += w;
    }
    double sum = 0.0;
    for (const auto& [idx, w] : acc) {
      if (w == 0.0) continue;
      entries_.emplace_back(idx, w);
      sum += w;
    }
    require_input(std::abs(sum - 1.0) <= ctx.weight_sum_tol,
                  "WeightTensor: weights sum to " + std::to_string(sum) +
                      ", not 1");
  }

  // Independence weights: p_i = prod_j factors[j][i_j].
  static WeightTensor product(const std::vector<std::vector<double>>& factors,
                              const NumericContext& ctx = default_context()) {
    require_input(!factors.empty(), "WeightTensor::product: no factors");
    std::vector<int> shape;
    std::int64_t cells = 1;
    for (const auto& f : factors) {
      require_input(!f.empty(), "WeightTensor::product: empty factor");
      shape.push_back(static_cast<int>(f.size()));
      cells *= static_cast<std::int64_t>(f.size());
      require_input(cells <= kDenseCap,
                    "WeightTensor::product: enumeration exceeds capacity");
    }
    std::vector<Entry> entries;
    Index idx(shape.size(), 0);
    for (std::int64_t c = 0; c < cells; ++c) {
      double w = 1.0;
      for (std::size_t j = 0; j < shape.size(); ++j) w *= factors[j][idx[j]];
      entries.emplace_back(idx, w);
      for (int j = static_cast<int>(shape.size()) - 1; j >= 0; --j) {
        if (++idx[j] < shape[j]) break;
        idx[j] = 0;
      }
    }
    return WeightTensor(std::move(shape), entries, ctx);
  }

  // Dense row-major values (last coordinate fastest).
  static WeightTensor dense(std::vector<int> shape,
                            const std::vector<double>& values,
                            const NumericContext& ctx = default_context()) {
    std::int64_t cells = 1;
    for (int L : shape) {
      require_input(L >= 1, "WeightTensor::dense: nonpositive pool size");
      cells *= L;
      require_input(cells <= kDenseCap,
                    "WeightTensor::dense: enumeration exceeds capacity");
    }
    require_input(static_cast<std::int64_t>(values.size()) == cells,
                  "WeightTensor::dense: value count mismatch");
    std::vector<Entry> entries;
    Index idx(shape.size(), 0);
    for (std::int64_t c = 0; c < cells; ++c) {
      entries.emplace_back(idx, values[c]);
      for (int j = static_cast<int>(shape.size()) - 1; j >= 0; --j) {
        if (++idx[j] < shape[j]) break;
        idx[j] = 0;
      }
    }
    return WeightTensor(std::move(shape), entries, ctx);
  }

  int dims() const { return static_cast<int>(shape_.size()); }
  const std::vector<int>& shape() const { return shape_; }
  int nnz() const { return static_cast<int>(entries_.size()); }
  const std::vector<Entry>& entries() const { return entries_; }

  double weight_at(const Index& idx) const {
    auto it = std::lower_bound(
        entries_.begin(), entries_.end(), idx,
        [](const Entry& e, const Index& i) { return e.first < i; });
    return (it != entries_.end() && it->first == idx) ? it->second : 0.0;
  }

  bool nonnegative() const {
    for (const auto& [idx, w] : entries_)
      if (w < 0.0) return false;
    return true;
  }

  Eigen::VectorXd coordinate_marginal(int j) const {
    require_input(j >= 0 && j < dims(),
                  "WeightTensor::coordinate_marginal: bad coordinate");
    Eigen::VectorXd m = Eigen::VectorXd::Zero(shape_[j]);
    for (const auto& [idx, w] : entries_) m[idx[j]] += w;
    return m;
  }

  Eigen::MatrixXd pair_marginal(int j1, int j2) const {
    require_input(j1 >= 0 && j1 < dims() && j2 >= 0 && j2 < dims() && j1 != j2,
                  "WeightTensor::pair_marginal: bad coordinate pair");
    Eigen::MatrixXd q = Eigen::MatrixXd::Zero(shape_[j1], shape_[j2]);
    for (const auto& [idx, w] : entries_) q(idx[j1], idx[j2]) += w;
    return q;
  }

  // Weights summed over the dropped coordinates; keep must be a strictly
  // increasing list of retained coordinates.
  WeightTensor marginalize(const std::vector<int>& keep,
                           const NumericContext& ctx = default_context()) const {
    require_input(!keep.empty(), "WeightTensor::marginalize: empty subset");
    std::vector<int> sub_shape;
    for (std::size_t k = 0; k < keep.size(); ++k) {
      require_input(keep[k] >= 0 && keep[k] < dims(),
                    "WeightTensor::marginalize: coordinate out of range");
      require_input(k == 0 || keep[k] > keep[k - 1],
                    "WeightTensor::marginalize: coordinates must increase");
      sub_shape.push_back(shape_[keep[k]]);
    }
    std::vector<Entry> sub;
    sub.reserve(entries_.size());
    for (const auto& [idx, w] : entries_) {
      Index s(keep.size());
      for (std::size_t k = 0; k < keep.size(); ++k) s[k] = idx[keep[k]];
      sub.emplace_back(std::move(s), w);
    }
    return WeightTensor(std::move(sub_shape), sub, ctx);
  }

 private:
  std::vector<int> shape_;
  std::vector<Entry> entries_;
};

enum class RankKind { kendall, spearman, pearson };

// Multivariate matrix-exponential affine mixture: coordinate j draws its
// component from pools[j] according to the mixing tensor, and coordinates are
// conditionally independent given the multi-index.  The shared-pool case is
// the special case of identical pools.  Immutable; all operations are pure.
class MmeamModel {
 public:
  MmeamModel(std::vector<std::vector<MeTriple>> pools, WeightTensor weights,
             const NumericContext& ctx = default_context())
      : pools_(std::move(pools)), weights_(std::move(weights)) {
    require_input(static_cast<int>(pools_.size()) == weights_.dims(),
                  "MmeamModel: pool count does not match weight arity");
    for (int j = 0; j < dim(); ++j)
      require_input(static_cast<int>(pools_[j].size()) ==
                        weights_.shape()[j],
                    "MmeamModel: pool size does not match weight shape");
    if (ctx.validate_density && !weights_.nonnegative())
      check_density_grid(ctx);
  }

  // Shared pool across all M coordinates.
  MmeamModel(const std::vector<MeTriple>& pool, int m, WeightTensor weights,
             const NumericContext& ctx = default_context())
      : MmeamModel(std::vector<std::vector<MeTriple>>(m, pool),
                   std::move(weights), ctx) {}

  int dim() const { return static_cast<int>(pools_.size()); }
  const WeightTensor& weights() const { return weights_; }
  const std::vector<MeTriple>& pool(int j) const { return pools_[j]; }
  const MeTriple& component(int j, int i) const { return pools_[j][i]; }

  double joint_density(const Eigen::VectorXd& x) const {
    check_point(x, "joint_density");
    return contract(pointwise_table(x, /*survival=*/false, /*fast=*/false));
  }
  double joint_survival(const Eigen::VectorXd& z) const {
    check_point(z, "joint_survival");
    return contract(pointwise_table(z, /*survival=*/true, /*fast=*/false));
  }

  // Coordinate marginal as an affine mixture over pool j.
  MeMixture marginal(int j, const NumericContext& ctx = default_context()) const {
    require_input(j >= 0 && j < dim(), "MmeamModel::marginal: bad coordinate");
    const Eigen::VectorXd m = weights_.coordinate_marginal(j);
    std::vector<double> w(m.data(), m.data() + m.size());
    return MeMixture(std::move(w), pools_[j], ctx);
  }

  // Sub-model on a strictly increasing coordinate subset.
  MmeamModel marginalize(const std::vector<int>& keep,
                         const NumericContext& ctx = default_context()) const {
    WeightTensor sub = weights_.marginalize(keep, ctx);
    std::vector<std::vector<MeTriple>> pools;
    for (int j : keep) pools.push_back(pools_[j]);
    return MmeamModel(std::move(pools), std::move(sub), ctx);
  }

  // Conditional law of the unobserved coordinates given exact values for the
  // observed ones.  The result's coordinates are the unobserved coordinates
  // of this model in ascending order.
  MmeamModel condition_on(const std::map<int, double>& observed,
                          const NumericContext& ctx = default_context()) const {
    if (observed.empty()) return *this;
    std::vector<int> keep;
    for (int j = 0; j < dim(); ++j)
      if (!observed.count(j)) keep.push_back(j);
    require_input(!keep.empty(),
                  "MmeamModel::condition_on: no coordinate left unobserved");
    for (const auto& [j, x] : observed) {
      require_input(j >= 0 && j < dim(),
                    "MmeamModel::condition_on: bad coordinate");
      require_domain(x >= 0.0,
                     "MmeamModel::condition_on: negative observed value");
    }
    // Likelihood of the observed block per component, then collapse.
    std::map<WeightTensor::Index, double> acc;
    double denom = 0.0;
    std::vector<std::vector<double>> lik(dim());
    for (const auto& [j, x] : observed) {
      lik[j].resize(pools_[j].size());
      for (std::size_t i = 0; i < pools_[j].size(); ++i)
        lik[j][i] = pools_[j][i].pdf(x);
    }
    for (const auto& [idx, w] : weights_.entries()) {
      double f = w;
      for (const auto& [j, x] : observed) f *= lik[j][idx[j]];
      WeightTensor::Index sub(keep.size());
      for (std::size_t k = 0; k < keep.size(); ++k) sub[k] = idx[keep[k]];
      acc[sub] += f;
      denom += f;
    }
    if (!(denom > 0.0))
      throw DomainError(
          "MmeamModel::condition_on: conditioning density vanishes");
    std::vector<int> sub_shape;
    std::vector<std::vector<MeTriple>> pools;
    for (int j : keep) {
      sub_shape.push_back(static_cast<int>(pools_[j].size()));
      pools.push_back(pools_[j]);
    }
    std::vector<WeightTensor::Entry> entries;
    for (auto& [idx, w] : acc) entries.emplace_back(idx, w / denom);
    return MmeamModel(std::move(pools),
                      WeightTensor(std::move(sub_shape), entries, ctx), ctx);
  }

  // E[X_1^{r_1} ... X_M^{r_M}].
  double cross_moment(const std::vector<int>& r) const {
    require_input(static_cast<int>(r.size()) == dim(),
                  "MmeamModel::cross_moment: order arity mismatch");
    std::vector<std::vector<double>> mom(dim());
    for (int j = 0; j < dim(); ++j) {
      require_input(r[j] >= 0, "MmeamModel::cross_moment: negative order");
      mom[j].resize(pools_[j].size());
      for (std::size_t i = 0; i < pools_[j].size(); ++i)
        mom[j][i] = pools_[j][i].moment(r[j]);
    }
    return contract(mom);
  }

  // Law of X - z given X > z componentwise.
  MmeamModel residual_lifetime(const Eigen::VectorXd& z,
                               const NumericContext& ctx = default_context()) const {
    check_point(z, "residual_lifetime");
    if (z.isZero(0.0)) return *this;
    std::vector<std::vector<double>> surv(dim());
    std::vector<std::vector<MeTriple>> pools(dim());
    for (int j = 0; j < dim(); ++j) {
      surv[j].resize(pools_[j].size());
      for (std::size_t i = 0; i < pools_[j].size(); ++i) {
        const double s = pools_[j][i].sf_fast(z[j]);
        surv[j][i] = s;
        // Extinct components keep their slot but are never referenced by a
        // surviving weight entry.
        pools[j].push_back(s > ctx.survival_floor
                               ? residual(pools_[j][i], z[j], ctx)
                               : pools_[j][i]);
      }
    }
    std::vector<WeightTensor::Entry> entries;
    double total = 0.0;
    for (const auto& [idx, w] : weights_.entries()) {
      double f = w;
      bool extinct = false;
      for (int j = 0; j < dim(); ++j) {
        if (!(surv[j][idx[j]] > ctx.survival_floor)) extinct = true;
        f *= surv[j][idx[j]];
      }
      if (extinct) continue;
      entries.emplace_back(idx, f);
      total += f;
    }
    if (entries.empty() || !(std::abs(total) > ctx.survival_floor))
      throw NumericError(
          "MmeamModel::residual_lifetime: joint survival underflow");
    for (auto& [idx, w] : entries) w /= total;
    return MmeamModel(std::move(pools),
                      WeightTensor(weights_.shape(), entries, ctx), ctx);
  }

  struct TiltedModel;

  // Multivariate size-biased exponential tilt with per-coordinate powers and
  // rates; requires lambda_j above every pool-j spectral abscissa.
  TiltedModel esscher(const std::vector<int>& n, const Eigen::VectorXd& lambda,
                      const NumericContext& ctx = default_context()) const;

  // r-th multivariate equilibrium law: each step replaces every component
  // density by its normalized survival and reweights by the products of the
  // pre-step component means.
  MmeamModel equilibrium(int r, const NumericContext& ctx = default_context()) const {
    require_input(r >= 1, "MmeamModel::equilibrium: order must be >= 1");
    // Per-component recursion, recording the normalizer of every step.
    std::vector<std::vector<MeTriple>> pools(dim());
    std::vector<std::vector<std::vector<double>>> step_mean(dim());
    for (int j = 0; j < dim(); ++j) {
      step_mean[j].resize(pools_[j].size());
      for (std::size_t i = 0; i < pools_[j].size(); ++i) {
        const MeTriple& c = pools_[j][i];
        Eigen::FullPivLU<MatrixXd> lu(MatrixXd(-c.T()));
        RowVectorXd a = c.alpha();
        VectorXd v = c.t();
        for (int step = 0; step < r; ++step) {
          v = lu.solve(v);
          const double mass = a * lu.solve(v);
          step_mean[j][i].push_back(mass);
          a /= mass;
        }
        pools[j].emplace_back(std::move(a), c.T(), std::move(v), ctx);
      }
    }
    // Weight recursion; the per-step global normalizer divides all weights
    // equally, so a single final normalization is exact.
    std::vector<WeightTensor::Entry> entries;
    double total = 0.0;
    for (const auto& [idx, w] : weights_.entries()) {
      double f = w;
      for (int step = 0; step < r; ++step)
        for (int j = 0; j < dim(); ++j) f *= step_mean[j][idx[j]][step];
      entries.emplace_back(idx, f);
      total += f;
    }
    if (!(std::abs(total) > 0.0))
      throw NumericError("MmeamModel::equilibrium: vanishing normalization");
    for (auto& [idx, w] : entries) w /= total;
    return MmeamModel(std::move(pools),
                      WeightTensor(weights_.shape(), entries, ctx), ctx);
  }

  // Law of the k-th smallest coordinate (k is 1-based), as an affine mixture
  // pooling the independent-case order statistics of every weight entry.
  MeMixture order_statistic(int k, const NumericContext& ctx = default_context()) const {
    require_input(k >= 1 && k <= dim(),
                  "MmeamModel::order_statistic: rank out of range");
    std::vector<double> w;
    std::vector<MeTriple> comps;
    for (const auto& [idx, p] : weights_.entries()) {
      std::vector<MeTriple> laws;
      for (int j = 0; j < dim(); ++j) laws.push_back(pools_[j][idx[j]]);
      MeMixture os = order_stat_indep(laws, k, ctx);
      for (int c = 0; c < os.size(); ++c) {
        w.push_back(p * os.weight(c));
        comps.push_back(os.component(c));
      }
    }
    return MeMixture(std::move(w), std::move(comps), ctx);
  }

  // Kendall's tau, Spearman's rho, or Pearson correlation between two
  // coordinates; j1 == j2 returns 1 by convention.
  double rank_corr(int j1, int j2, RankKind kind) const {
    require_input(j1 >= 0 && j1 < dim() && j2 >= 0 && j2 < dim(),
                  "MmeamModel::rank_corr: bad coordinate");
    if (j1 == j2) return 1.0;
    if (kind == RankKind::pearson) {
      std::vector<int> r(dim(), 0);
      r[j1] = 1;
      r[j2] = 1;
      const double exy = cross_moment(r);
      const MeMixture m1 = marginal(j1), m2 = marginal(j2);
      const double v1 = m1.moment(2) - m1.mean() * m1.mean();
      const double v2 = m2.moment(2) - m2.mean() * m2.mean();
      require_domain(v1 > 0.0 && v2 > 0.0,
                     "MmeamModel::rank_corr: degenerate marginal variance");
      return (exy - m1.mean() * m2.mean()) / std::sqrt(v1 * v2);
    }
    const Eigen::MatrixXd c1 = below_table(j1);
    const Eigen::MatrixXd c2 = below_table(j2);
    const Eigen::MatrixXd q = weights_.pair_marginal(j1, j2);
    if (kind == RankKind::kendall) {
      const Eigen::MatrixXd inner = c1 * q * c2.transpose();
      return 4.0 * q.cwiseProduct(inner).sum() - 1.0;
    }
    const Eigen::VectorXd u = c1 * weights_.coordinate_marginal(j1);
    const Eigen::VectorXd v = c2 * weights_.coordinate_marginal(j2);
    return 12.0 * u.dot(q * v) - 3.0;
  }

 private:
  void check_point(const Eigen::VectorXd& x, const char* who) const {
    require_input(x.size() == dim(),
                  std::string("MmeamModel::") + who + ": point arity mismatch");
    for (int j = 0; j < dim(); ++j)
      require_domain(x[j] >= 0.0,
                     std::string("MmeamModel::") + who +
                         ": negative coordinate");
  }

  std::vector<std::vector<double>> pointwise_table(const Eigen::VectorXd& x,
                                                   bool survival,
                                                   bool fast) const {
    std::vector<std::vector<double>> tab(dim());
    for (int j = 0; j < dim(); ++j) {
      tab[j].resize(pools_[j].size());
      for (std::size_t i = 0; i < pools_[j].size(); ++i) {
        const MeTriple& c = pools_[j][i];
        tab[j][i] = survival ? (fast ? c.sf_fast(x[j]) : c.sf(x[j]))
                             : (fast ? c.pdf_fast(x[j]) : c.pdf(x[j]));
      }
    }
    return tab;
  }

  double contract(const std::vector<std::vector<double>>& tab) const {
    double acc = 0.0;
    for (const auto& [idx, w] : weights_.entries()) {
      double f = w;
      for (int j = 0; j < dim(); ++j) f *= tab[j][idx[j]];
      acc += f;
    }
    return acc;
  }

  // Table of integral F_a(x) f_a'(x) dx over pool j, via the Kronecker-sum
  // resolvent identity int SF_a f_a' = (alpha_a (x) alpha_a')
  // (-(T_a (+) T_a'))^{-1} (l_a (x) t_a').
  Eigen::MatrixXd below_table(int j) const {
    const auto& pool = pools_[j];
    const int L = static_cast<int>(pool.size());
    require_input(L <= 256,
                  "MmeamModel::rank_corr: pool too large for the exact "
                  "contraction; use the Monte Carlo estimator");
    Eigen::MatrixXd c(L, L);
    for (int a = 0; a < L; ++a) {
      for (int b = 0; b < L; ++b) {
        const RowVectorXd alpha = lin::kron_prod(MatrixXd(pool[a].alpha()),
                                                 MatrixXd(pool[b].alpha()));
        const MatrixXd ts = lin::kron_sum(pool[a].T(), pool[b].T());
        const VectorXd rhs =
            lin::kron_prod(MatrixXd(pool[a].l()), MatrixXd(pool[b].t()));
        const double surv_int =
            alpha * MatrixXd(-ts).partialPivLu().solve(rhs);
        c(a, b) = 1.0 - surv_int;
      }
    }
    return c;
  }

  void check_density_grid(const NumericContext& ctx) const {
    // Log-spaced per-axis grids; resolution shrinks with dimension to keep
    // the tensor grid affordable.
    const int per_axis = dim() == 1 ? ctx.density_grid_points
                         : dim() == 2 ? 40
                         : dim() == 3 ? 14
                                      : 6;
    std::vector<std::vector<double>> axes(dim());
    for (int j = 0; j < dim(); ++j) {
      double kap = pools_[j][0].kappa();
      for (const auto& c : pools_[j]) kap = std::max(kap, c.kappa());
      const double xmax = ctx.density_span / std::abs(kap);
      const double xmin = xmax * 1e-5;
      const double ratio = std::pow(xmax / xmin, 1.0 / (per_axis - 1));
      axes[j].push_back(0.0);
      double x = xmin;
      for (int i = 0; i < per_axis; ++i, x *= ratio) axes[j].push_back(x);
    }
    // Per-axis density tables, then one pass over the tensor grid.
    std::vector<std::vector<std::vector<double>>> tab(dim());
    for (int j = 0; j < dim(); ++j) {
      tab[j].resize(axes[j].size());
      for (std::size_t g = 0; g < axes[j].size(); ++g) {
        tab[j][g].resize(pools_[j].size());
        for (std::size_t i = 0; i < pools_[j].size(); ++i)
          tab[j][g][i] = pools_[j][i].pdf_fast(axes[j][g]);
      }
    }
    std::vector<std::size_t> g(dim(), 0);
    std::vector<double> vals;
    for (;;) {
      double acc = 0.0;
      for (const auto& [idx, w] : weights_.entries()) {
        double f = w;
        for (int j = 0; j < dim(); ++j) f *= tab[j][g[j]][idx[j]];
        acc += f;
      }
      vals.push_back(acc);
      int j = dim() - 1;
      for (; j >= 0; --j) {
        if (++g[j] < axes[j].size()) break;
        g[j] = 0;
      }
      if (j < 0) break;
    }
    double peak = 0.0;
    for (double v : vals) peak = std::max(peak, std::abs(v));
    const double floor = ctx.density_floor * std::max(1.0, peak);
    for (double v : vals)
      require_input(v >= floor,
                    "MmeamModel: joint density negative on the validation "
                    "grid (" + std::to_string(v) + ")");
  }

  std::vector<std::vector<MeTriple>> pools_;
  WeightTensor weights_;
};

struct MmeamModel::TiltedModel {
  MmeamModel model;
  double norm;  // E[prod_j X_j^{n_j} e^{-lambda_j X_j}]
};

inline MmeamModel::TiltedModel MmeamModel::esscher(
    const std::vector<int>& n, const Eigen::VectorXd& lambda,
    const NumericContext& ctx) const {
  require_input(static_cast<int>(n.size()) == dim() && lambda.size() == dim(),
                "MmeamModel::esscher: parameter arity mismatch");
  std::vector<std::vector<MeTriple>> pools(dim());
  std::vector<std::vector<double>> norm(dim());
  for (int j = 0; j < dim(); ++j) {
    norm[j].resize(pools_[j].size());
    for (std::size_t i = 0; i < pools_[j].size(); ++i) {
      auto sb = esscher_size_biased(pools_[j][i], {n[j], lambda[j]}, ctx);
      pools[j].push_back(std::move(sb.triple));
      norm[j][i] = sb.norm;
    }
  }
  std::vector<WeightTensor::Entry> entries;
  double total = 0.0;
  for (const auto& [idx, w] : weights_.entries()) {
    double f = w;
    for (int j = 0; j < dim(); ++j) f *= norm[j][idx[j]];
    entries.emplace_back(idx, f);
    total += f;
  }
  if (!(total > 0.0))
    throw NumericError("MmeamModel::esscher: nonpositive normalization");
  for (auto& [idx, w] : entries) w /= total;
  return {MmeamModel(std::move(pools),
                     WeightTensor(weights_.shape(), entries, ctx), ctx),
          total};
}

}  // namespace memix

#endif  // MEMIX_MMEAM_HPP
