#ifndef MEMIX_SIMULATE_HPP
#define MEMIX_SIMULATE_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <thread>
#include <vector>

#include <Eigen/Dense>

#include "memix/context.hpp"
#include "memix/errors.hpp"
#include "memix/me_distribution.hpp"
#include "memix/mmeam.hpp"

namespace memix {
namespace mc {

struct SimConfig {
  std::int64_t sample_count = 0;
  std::uint64_t seed = 0;
  int parallel_streams = 1;
};

namespace detail {

inline std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Counter-based uniform deviate: a pure function of (seed, sample, purpose),
// so the sample matrix is independent of thread partitioning.
inline double uniform01(std::uint64_t seed, std::uint64_t sample,
                        std::uint64_t purpose) {
  const std::uint64_t h = mix64(mix64(mix64(seed) + sample) + purpose);
  return static_cast<double>(h >> 11) * 0x1.0p-53;
}

// Inverse-CDF sampler for one component: 1024 quantile knots on a uniform
// u-grid (built once by a marching root-finder), linear interpolation in
// between, per-draw root-finding in the extreme upper tail.
class InverseCdf {
 public:
  explicit InverseCdf(const MeTriple& tr,
                      const NumericContext& ctx = default_context())
      : tr_(tr), tol_(ctx.quantile_tol) {
    q_.resize(kKnots);
    q_[0] = 0.0;
    for (int k = 1; k < kKnots; ++k) {
      const double u = static_cast<double>(k) / kKnots;
      q_[k] = invert(u, q_[k - 1]);
    }
  }

  double operator()(double u) const {
    const double pos = u * kKnots;
    const int k = static_cast<int>(pos);
    if (k >= kKnots - 1) return invert(u, q_.back());
    return q_[k] + (pos - k) * (q_[k + 1] - q_[k]);
  }

 private:
  static constexpr int kKnots = 1024;

  double invert(double u, double lo) const {
    double f_lo = 1.0 - tr_.sf_fast(lo);
    double hi = lo + 1.0 / std::abs(tr_.kappa());
    double f_hi = 1.0 - tr_.sf_fast(hi);
    int guard = 0;
    while (f_hi < u) {
      lo = hi;
      f_lo = f_hi;
      hi = 2.0 * hi + 1.0 / std::abs(tr_.kappa());
      f_hi = 1.0 - tr_.sf_fast(hi);
      if (++guard > 80) throw NumericError("sampler: bracketing failed");
    }
    double x = 0.5 * (lo + hi);
    for (int it = 0; it < 200; ++it) {
      double cand = (f_hi != f_lo)
                        ? lo + (u - f_lo) * (hi - lo) / (f_hi - f_lo)
                        : 0.5 * (lo + hi);
      if (!(cand > lo) || !(cand < hi)) cand = 0.5 * (lo + hi);
      x = cand;
      const double fx = 1.0 - tr_.sf_fast(x);
      if (std::abs(fx - u) <= tol_) return x;
      if (fx < u) {
        lo = x;
        f_lo = fx;
      } else {
        hi = x;
        f_hi = fx;
      }
    }
    return x;  // bracket exhausted to machine width
  }

  const MeTriple& tr_;
  double tol_;
  std::vector<double> q_;
};

}  // namespace detail

// Draw sample_count vectors from a nonnegative-weight model: a categorical
// multi-index from the mixing weights, then each coordinate from its
// component law.  Output is a pure function of (model, sample_count, seed);
// parallel_streams only controls the worker count.
inline Eigen::MatrixXd simulate(const MmeamModel& m, const SimConfig& cfg,
                                const NumericContext& ctx = default_context()) {
  require_input(cfg.sample_count >= 1, "simulate: sample_count must be >= 1");
  require_input(cfg.parallel_streams >= 1,
                "simulate: parallel_streams must be >= 1");
  require_input(m.weights().nonnegative(),
                "simulate: signed mixing weights have no sampling "
                "representation; only nonnegative weights are supported");

  const auto& entries = m.weights().entries();
  std::vector<double> cum(entries.size());
  double acc = 0.0;
  for (std::size_t e = 0; e < entries.size(); ++e)
    cum[e] = (acc += entries[e].second);
  cum.back() = 1.0;  // guard against roundoff in the final bin

  // One inverse-CDF cache per pool component.
  std::vector<std::vector<detail::InverseCdf>> inv(m.dim());
  for (int j = 0; j < m.dim(); ++j) {
    inv[j].reserve(m.pool(j).size());
    for (const auto& c : m.pool(j)) inv[j].emplace_back(c, ctx);
  }

  Eigen::MatrixXd out(cfg.sample_count, m.dim());
  auto worker = [&](std::int64_t s0, std::int64_t s1) {
    for (std::int64_t s = s0; s < s1; ++s) {
      const double uw = detail::uniform01(cfg.seed, s, 0);
      const std::size_t e =
          std::upper_bound(cum.begin(), cum.end(), uw) - cum.begin();
      const auto& idx = entries[std::min(e, entries.size() - 1)].first;
      for (int j = 0; j < m.dim(); ++j) {
        const double u = detail::uniform01(cfg.seed, s, 1 + j);
        out(s, j) = inv[j][idx[j]](u);
      }
    }
  };
  const int workers = static_cast<int>(std::min<std::int64_t>(
      cfg.parallel_streams, cfg.sample_count));
  if (workers == 1) {
    worker(0, cfg.sample_count);
  } else {
    std::vector<std::thread> pool;
    const std::int64_t chunk = (cfg.sample_count + workers - 1) / workers;
    for (int w = 0; w < workers; ++w) {
      const std::int64_t s0 = w * chunk;
      const std::int64_t s1 = std::min<std::int64_t>(s0 + chunk,
                                                     cfg.sample_count);
      if (s0 < s1) pool.emplace_back(worker, s0, s1);
    }
    for (auto& th : pool) th.join();
  }
  return out;
}

struct Estimate {
  double value = 0.0;
  double std_error = 0.0;
  std::int64_t n = 0;
  bool wide_ci = false;  // conditioning event had fewer than 100 samples
};

namespace detail {

inline Estimate mean_se(const std::vector<double>& v) {
  const std::int64_t n = static_cast<std::int64_t>(v.size());
  if (n == 0) throw NumericError("mc: empty sample set");
  double mean = 0.0;
  for (double x : v) mean += x;
  mean /= n;
  double ss = 0.0;
  for (double x : v) ss += (x - mean) * (x - mean);
  const double sd = n > 1 ? std::sqrt(ss / (n - 1)) : 0.0;
  return {mean, sd / std::sqrt(static_cast<double>(n)), n, n < 100};
}

}  // namespace detail

inline Estimate mc_mean(const Eigen::MatrixXd& samples, int j) {
  require_input(j >= 0 && j < samples.cols(), "mc_mean: bad coordinate");
  std::vector<double> v(samples.rows());
  for (Eigen::Index s = 0; s < samples.rows(); ++s) v[s] = samples(s, j);
  return detail::mean_se(v);
}

inline Estimate mc_cross_moment(const Eigen::MatrixXd& samples,
                                const std::vector<int>& r) {
  require_input(static_cast<Eigen::Index>(r.size()) == samples.cols(),
                "mc_cross_moment: order arity mismatch");
  std::vector<double> v(samples.rows());
  for (Eigen::Index s = 0; s < samples.rows(); ++s) {
    double g = 1.0;
    for (Eigen::Index j = 0; j < samples.cols(); ++j)
      for (int e = 0; e < r[j]; ++e) g *= samples(s, j);
    v[s] = g;
  }
  return detail::mean_se(v);
}

// E[X_j^k S^h 1{S > y}] with S the row sum.
inline Estimate mc_tail_moment(const Eigen::MatrixXd& samples, int j, int k,
                               int h, double y) {
  require_input(j >= 0 && j < samples.cols(), "mc_tail_moment: bad coordinate");
  std::vector<double> v(samples.rows());
  for (Eigen::Index s = 0; s < samples.rows(); ++s) {
    const double total = samples.row(s).sum();
    double g = total > y ? 1.0 : 0.0;
    if (g != 0.0) {
      for (int e = 0; e < k; ++e) g *= samples(s, j);
      for (int e = 0; e < h; ++e) g *= total;
    }
    v[s] = g;
  }
  return detail::mean_se(v);
}

// Mean of prod_j X_j^{r_j} over the samples exceeding z in every coordinate.
inline Estimate mc_conditional_moment(const Eigen::MatrixXd& samples,
                                      const std::vector<int>& r,
                                      const Eigen::VectorXd& z) {
  require_input(static_cast<Eigen::Index>(r.size()) == samples.cols() &&
                    z.size() == samples.cols(),
                "mc_conditional_moment: arity mismatch");
  std::vector<double> v;
  for (Eigen::Index s = 0; s < samples.rows(); ++s) {
    bool in = true;
    for (Eigen::Index j = 0; j < samples.cols(); ++j)
      in = in && samples(s, j) > z[j];
    if (!in) continue;
    double g = 1.0;
    for (Eigen::Index j = 0; j < samples.cols(); ++j)
      for (int e = 0; e < r[j]; ++e) g *= samples(s, j);
    v.push_back(g);
  }
  if (v.empty())
    throw NumericError("mc_conditional_moment: empty conditioning event");
  return detail::mean_se(v);
}

inline Estimate mc_conditional_mean(const Eigen::MatrixXd& samples, int j,
                                    const Eigen::VectorXd& z) {
  std::vector<int> r(samples.cols(), 0);
  require_input(j >= 0 && j < samples.cols(),
                "mc_conditional_mean: bad coordinate");
  r[j] = 1;
  return mc_conditional_moment(samples, r, z);
}

// Empirical quantile with a delta-method standard error: the density at the
// quantile is estimated by a Gaussian kernel with Silverman's bandwidth.
inline Estimate mc_quantile(std::vector<double> values, double theta) {
  require_domain(theta >= 0.0 && theta < 1.0, "mc_quantile: bad level");
  const std::int64_t n = static_cast<std::int64_t>(values.size());
  if (n == 0) throw NumericError("mc_quantile: empty sample set");
  std::sort(values.begin(), values.end());
  const std::int64_t pos = std::min<std::int64_t>(
      n - 1, static_cast<std::int64_t>(std::ceil(theta * n)));
  const double q = values[pos];
  double mean = 0.0, ss = 0.0;
  for (double x : values) mean += x;
  mean /= n;
  for (double x : values) ss += (x - mean) * (x - mean);
  const double sd = std::sqrt(ss / std::max<std::int64_t>(1, n - 1));
  const double bw = 1.06 * sd * std::pow(static_cast<double>(n), -0.2);
  double dens = 0.0;
  for (double x : values) {
    const double u = (x - q) / bw;
    dens += std::exp(-0.5 * u * u);
  }
  dens /= n * bw * std::sqrt(2.0 * M_PI);
  const double se =
      dens > 0.0 ? std::sqrt(theta * (1.0 - theta) / n) / dens : 0.0;
  return {q, se, n, n < 100};
}

// Kendall's tau from consecutive disjoint sample pairs: the mean concordance
// sign is an unbiased estimator with an exact per-pair standard error.
inline Estimate mc_kendall(const Eigen::MatrixXd& samples, int j1, int j2) {
  require_input(samples.cols() >= 2 && j1 != j2, "mc_kendall: need two coords");
  std::vector<double> v;
  for (Eigen::Index s = 0; s + 1 < samples.rows(); s += 2) {
    const double d1 = samples(s, j1) - samples(s + 1, j1);
    const double d2 = samples(s, j2) - samples(s + 1, j2);
    v.push_back(d1 * d2 > 0.0 ? 1.0 : (d1 * d2 < 0.0 ? -1.0 : 0.0));
  }
  return detail::mean_se(v);
}

// Spearman's rho from disjoint sample triples: 12 P(A_1 > B_1, A_2 > C_2) - 3
// for independent rows A, B, C.
inline Estimate mc_spearman(const Eigen::MatrixXd& samples, int j1, int j2) {
  require_input(samples.cols() >= 2 && j1 != j2,
                "mc_spearman: need two coords");
  std::vector<double> v;
  for (Eigen::Index s = 0; s + 2 < samples.rows(); s += 3) {
    const bool hit = samples(s, j1) > samples(s + 1, j1) &&
                     samples(s, j2) > samples(s + 2, j2);
    v.push_back(hit ? 1.0 : 0.0);
  }
  Estimate e = detail::mean_se(v);
  e.value = 12.0 * e.value - 3.0;
  e.std_error *= 12.0;
  return e;
}

// Kolmogorov-Smirnov distance between a sample and a reference CDF.
inline double ks_statistic(std::vector<double> values,
                           const std::function<double(double)>& cdf) {
  const std::int64_t n = static_cast<std::int64_t>(values.size());
  require_input(n >= 1, "ks_statistic: empty sample set");
  std::sort(values.begin(), values.end());
  double d = 0.0;
  for (std::int64_t i = 0; i < n; ++i) {
    const double f = cdf(values[i]);
    d = std::max(d, std::abs(f - static_cast<double>(i) / n));
    d = std::max(d, std::abs(f - static_cast<double>(i + 1) / n));
  }
  return d;
}

}  // namespace mc
}  // namespace memix

#endif  // MEMIX_SIMULATE_HPP
