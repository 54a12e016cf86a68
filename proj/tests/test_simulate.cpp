#include "memix/simulate.hpp"

#include <cmath>
#include <vector>

#include <catch2/catch_amalgamated.hpp>

#include "support/test_support.hpp"

using namespace memix;
using Catch::Approx;

namespace {

MeTriple exp_law(double rate) {
  RowVectorXd a(1);
  a << 1.0;
  MatrixXd T(1, 1);
  T << -rate;
  VectorXd t(1);
  t << rate;
  return MeTriple(a, T, t);
}

MeTriple random_ph(std::mt19937_64& g, int p) {
  const MatrixXd T = memix::test::random_subintensity(g, p);
  const VectorXd t = -T.rowwise().sum();
  return MeTriple(memix::test::random_simplex(g, p), T, t);
}

MmeamModel independent_exp(int m) {
  std::vector<std::vector<MeTriple>> pools(m, {exp_law(1.0)});
  return MmeamModel(std::move(pools),
                    WeightTensor::product(std::vector<std::vector<double>>(
                        m, std::vector<double>{1.0})));
}

MmeamModel dependent_bivariate(std::mt19937_64& g) {
  std::vector<std::vector<MeTriple>> pools(2);
  for (int j = 0; j < 2; ++j)
    for (int i = 0; i < 2; ++i) pools[j].push_back(random_ph(g, 2));
  // Concentrated diagonal weights induce positive dependence.
  using E = WeightTensor::Entry;
  return MmeamModel(std::move(pools),
                    WeightTensor({2, 2}, {E{{0, 0}, 0.45}, E{{1, 1}, 0.45},
                                          E{{0, 1}, 0.05}, E{{1, 0}, 0.05}}));
}

}  // namespace

TEST_CASE("fixed seed reproduces the sample matrix exactly") {
  const auto m = independent_exp(2);
  const mc::SimConfig cfg{5000, 987654321u, 1};
  const Eigen::MatrixXd a = mc::simulate(m, cfg);
  const Eigen::MatrixXd b = mc::simulate(m, cfg);
  REQUIRE(a.rows() == 5000);
  CHECK(a == b);  // bitwise

  // Thread count must not change a single bit.
  for (int streams : {2, 3, 7}) {
    mc::SimConfig multi = cfg;
    multi.parallel_streams = streams;
    CHECK(mc::simulate(m, multi) == a);
  }

  // Different seeds decorrelate.
  mc::SimConfig other = cfg;
  other.seed = 13;
  CHECK(mc::simulate(m, other) != a);
}

TEST_CASE("sample moments match the exponential law") {
  const auto m = independent_exp(2);
  const Eigen::MatrixXd s = mc::simulate(m, {200000, 2024u, 4});
  for (int j = 0; j < 2; ++j) {
    const auto est = mc::mc_mean(s, j);
    CHECK(std::abs(est.value - 1.0) < 3.0 * est.std_error);
    CHECK(est.std_error < 3.2e-3);
  }
  const auto xm = mc::mc_cross_moment(s, {1, 1});
  CHECK(std::abs(xm.value - 1.0) < 3.0 * xm.std_error);

  std::vector<double> col(s.rows());
  for (Eigen::Index i = 0; i < s.rows(); ++i) col[i] = s(i, 0);
  const auto med = mc::mc_quantile(col, 0.5);
  CHECK(std::abs(med.value - std::log(2.0)) < 3.0 * med.std_error);

  const double ks = mc::ks_statistic(
      col, [](double x) { return 1.0 - std::exp(-x); });
  CHECK(ks < 1.95 / std::sqrt(static_cast<double>(s.rows())));
}

TEST_CASE("sampler reproduces a dependent model") {
  auto g = memix::test::rng(163);
  const auto m = dependent_bivariate(g);
  const Eigen::MatrixXd s = mc::simulate(m, {200000, 77u, 4});

  const auto tau_hat = mc::mc_kendall(s, 0, 1);
  const double tau = m.rank_corr(0, 1, RankKind::kendall);
  CHECK(std::abs(tau_hat.value - tau) < 3.0 * tau_hat.std_error);

  const auto rho_hat = mc::mc_spearman(s, 0, 1);
  const double rho = m.rank_corr(0, 1, RankKind::spearman);
  CHECK(std::abs(rho_hat.value - rho) < 3.0 * rho_hat.std_error);

  const auto xm = mc::mc_cross_moment(s, {1, 1});
  CHECK(std::abs(xm.value - m.cross_moment({1, 1})) < 3.0 * xm.std_error);

  // Marginal distribution via Kolmogorov-Smirnov.
  std::vector<double> col(s.rows());
  for (Eigen::Index i = 0; i < s.rows(); ++i) col[i] = s(i, 1);
  const auto marg = m.marginal(1);
  const double ks = mc::ks_statistic(
      col, [&](double x) { return marg.cdf(x); });
  CHECK(ks < 1.95 / std::sqrt(static_cast<double>(s.rows())));

  // Conditional mean given a joint exceedance box.
  Eigen::VectorXd z(2);
  z << 0.4, 0.2;
  const auto cm = mc::mc_conditional_mean(s, 0, z);
  const auto res = m.residual_lifetime(z);
  const double ref = z[0] + res.marginal(0).mean();
  CHECK(std::abs(cm.value - ref) < 3.0 * cm.std_error);
  CHECK_FALSE(cm.wide_ci);
}

TEST_CASE("simulation input validation") {
  const auto m = independent_exp(2);
  CHECK_THROWS_AS(mc::simulate(m, {0, 1u, 1}), InputError);
  CHECK_THROWS_AS(mc::simulate(m, {10, 1u, 0}), InputError);

  std::vector<std::vector<MeTriple>> pools(2, {exp_law(1.0), exp_law(2.0)});
  const MmeamModel signed_m(
      pools, WeightTensor::product({{2.0, -1.0}, {2.0, -1.0}}));
  CHECK_THROWS_AS(mc::simulate(signed_m, {10, 1u, 1}), InputError);

  Eigen::MatrixXd s = mc::simulate(m, {50, 5u, 1});
  Eigen::VectorXd far = Eigen::VectorXd::Constant(2, 50.0);
  CHECK_THROWS_AS(mc::mc_conditional_mean(s, 0, far), NumericError);
}

TEST_CASE("standard errors shrink like the square root of the sample count") {
  const auto m = independent_exp(1);
  const Eigen::MatrixXd s1 = mc::simulate(m, {40000, 31u, 2});
  const Eigen::MatrixXd s2 = mc::simulate(m, {160000, 31u, 2});
  const double r = mc::mc_mean(s1, 0).std_error / mc::mc_mean(s2, 0).std_error;
  CHECK(r == Approx(2.0).epsilon(0.2));
}
