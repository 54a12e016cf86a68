#include "memix/calibration.hpp"

#include <cmath>
#include <random>
#include <sstream>
#include <vector>

#include <catch2/catch_amalgamated.hpp>

#include "memix/mmeam.hpp"
#include "memix/quadrature.hpp"
#include "support/test_support.hpp"

using namespace memix;
using calib::BernsteinPhi;
using calib::BernsteinWeights;
using calib::Dataset;
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

MeTriple erlang2(double rate) {
  RowVectorXd a(2);
  a << 1.0, 0.0;
  MatrixXd T(2, 2);
  T << -rate, rate, 0.0, -rate;
  VectorXd t(2);
  t << 0.0, rate;
  return MeTriple(a, T, t);
}

// Losses whose Exp(1) CDF levels are the requested values.
Eigen::MatrixXd from_levels(const std::vector<std::vector<double>>& levels) {
  Eigen::MatrixXd x(static_cast<Eigen::Index>(levels.size()),
                    static_cast<Eigen::Index>(levels[0].size()));
  for (std::size_t r = 0; r < levels.size(); ++r)
    for (std::size_t c = 0; c < levels[r].size(); ++c)
      x(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
          -std::log1p(-levels[r][c]);
  return x;
}

Dataset random_exp_dataset(std::mt19937_64& g, int n, int m) {
  std::exponential_distribution<double> e(1.0);
  Eigen::MatrixXd x(n, m);
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < m; ++c) x(r, c) = e(g);
  return Dataset(std::move(x));
}

}  // namespace

TEST_CASE("csv ingestion") {
  {
    std::istringstream in("a,b\n1.0,2.0\n3.0,4.0\n");
    const Dataset d = calib::ingest_csv(in);
    CHECK(d.n() == 2);
    CHECK(d.dim() == 2);
    CHECK(d.values()(0, 1) == 2.0);
    CHECK(d.values()(1, 0) == 3.0);
  }
  {
    // Carriage returns and a missing final newline are tolerated.
    std::istringstream in("x,y\r\n0.5,1.5e-1\r\n2,3");
    const Dataset d = calib::ingest_csv(in);
    CHECK(d.n() == 2);
    CHECK(d.values()(0, 1) == Approx(0.15));
  }
  {
    // Comment lines (seed echoes in sample files) are skipped anywhere.
    std::istringstream in("# seed=42\nx,y\n1.0,2.0\n# note\n3.0,4.0\n");
    const Dataset d = calib::ingest_csv(in);
    CHECK(d.n() == 2);
    CHECK(d.values()(1, 1) == 4.0);
  }
  {
    std::istringstream in("only_header\n");
    CHECK_THROWS_WITH(calib::ingest_csv(in),
                      Catch::Matchers::ContainsSubstring("no data rows"));
  }
  {
    std::istringstream in("");
    CHECK_THROWS_AS(calib::ingest_csv(in), InputError);
  }
  {
    std::istringstream in("a,b\n1.0,-2.0\n");
    CHECK_THROWS_WITH(calib::ingest_csv(in),
                      Catch::Matchers::ContainsSubstring("row 2, column 2"));
  }
  {
    std::istringstream in("a,b\n1.0\n");
    CHECK_THROWS_WITH(calib::ingest_csv(in),
                      Catch::Matchers::ContainsSubstring("expected 2 fields"));
  }
  {
    std::istringstream in("a,b\n1.0,oops\n");
    CHECK_THROWS_WITH(calib::ingest_csv(in),
                      Catch::Matchers::ContainsSubstring("not a number"));
  }
  {
    std::istringstream in("a,b\n\n1.0,2.0\n");
    CHECK_THROWS_WITH(calib::ingest_csv(in),
                      Catch::Matchers::ContainsSubstring("empty row"));
  }
  CHECK_THROWS_AS(calib::ingest_csv_file("/nonexistent/losses.csv"),
                  InputError);
}

TEST_CASE("empirical grid weights") {
  const std::vector<MeTriple> marg = {exp_law(1.0), exp_law(1.0)};

  // Two observations with CDF levels (0.2, 0.3) and (0.7, 0.8).
  const Dataset d(from_levels({{0.2, 0.3}, {0.7, 0.8}}));
  const BernsteinWeights w = calib::empirical_zeta(d, marg, 2);
  CHECK(w.zeta({1, 1}) == 0.5);
  CHECK(w.zeta({2, 2}) == 1.0);
  CHECK(w.zeta({1, 2}) == 0.5);
  CHECK(w.zeta({2, 1}) == 0.5);
  CHECK(w.zeta({0, 2}) == 0.0);
  CHECK(w.zeta({2, 0}) == 0.0);

  const BernsteinWeights w1 = calib::empirical_zeta(d, marg, 1);
  CHECK(w1.zeta({0, 0}) == 0.0);
  CHECK(w1.zeta({0, 1}) == 0.0);
  CHECK(w1.zeta({1, 0}) == 0.0);
  CHECK(w1.zeta({1, 1}) == 1.0);

  // Naive counting oracle on a random dataset, all grid nodes.
  auto g = memix::test::rng(401);
  const Dataset rd = random_exp_dataset(g, 400, 2);
  const int A = 3;
  const BernsteinWeights rw = calib::empirical_zeta(rd, marg, A);
  for (int h1 = 0; h1 <= A; ++h1) {
    for (int h2 = 0; h2 <= A; ++h2) {
      std::int64_t count = 0;
      for (int k = 0; k < rd.n(); ++k) {
        const double f1 = marg[0].cdf(rd.values()(k, 0));
        const double f2 = marg[1].cdf(rd.values()(k, 1));
        if (f1 <= static_cast<double>(h1) / A &&
            f2 <= static_cast<double>(h2) / A)
          ++count;
      }
      CHECK(rw.count_at({h1, h2}) == count);
    }
  }

  // Monotone in each index.
  for (int h1 = 0; h1 <= A; ++h1)
    for (int h2 = 1; h2 <= A; ++h2)
      CHECK(rw.count_at({h1, h2}) >= rw.count_at({h1, h2 - 1}));

  CHECK_THROWS_AS(calib::empirical_zeta(d, marg, 0), InputError);
  CHECK_THROWS_AS(calib::empirical_zeta(d, {exp_law(1.0)}, 2), InputError);
}

TEST_CASE("grid cell masses") {
  const std::vector<MeTriple> marg = {exp_law(1.0), exp_law(1.0)};
  const Dataset d(from_levels({{0.2, 0.3}, {0.7, 0.8}}));

  // Order one collapses to the single unit mass.
  const BernsteinPhi p1 = calib::bernstein_phi(calib::empirical_zeta(d, marg, 1));
  REQUIRE(p1.values.size() == 1);
  CHECK(p1.values[0] == 1.0);

  // Hand-differenced grid: one observation per diagonal cell.
  const BernsteinPhi p2 = calib::bernstein_phi(calib::empirical_zeta(d, marg, 2));
  REQUIRE(p2.values.size() == 4);
  CHECK(p2.values[0] == 0.5);  // cell (0,0)
  CHECK(p2.values[1] == 0.0);
  CHECK(p2.values[2] == 0.0);
  CHECK(p2.values[3] == 0.5);  // cell (1,1)

  // Cell masses equal a direct histogram of level cells.
  auto g = memix::test::rng(409);
  const Dataset rd = random_exp_dataset(g, 500, 2);
  const int A = 4;
  const BernsteinPhi rp = calib::bernstein_phi(calib::empirical_zeta(rd, marg, A));
  std::vector<double> hist(16, 0.0);
  for (int k = 0; k < rd.n(); ++k) {
    const int g1 = static_cast<int>(
        std::ceil(marg[0].cdf(rd.values()(k, 0)) * A));
    const int g2 = static_cast<int>(
        std::ceil(marg[1].cdf(rd.values()(k, 1)) * A));
    hist[static_cast<std::size_t>((g1 - 1) * A + (g2 - 1))] += 1.0 / rd.n();
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < rp.values.size(); ++i) {
    CHECK(rp.values[i] == Approx(hist[i]).margin(1e-15));
    CHECK(rp.values[i] >= 0.0);
    sum += rp.values[i];
  }
  CHECK(sum == Approx(1.0).margin(1e-14));

  // Independent uniform levels spread mass evenly across cells.
  const Dataset big = random_exp_dataset(g, 100000, 2);
  const BernsteinPhi bp = calib::bernstein_phi(calib::empirical_zeta(big, marg, 2));
  for (double v : bp.values) CHECK(std::abs(v - 0.25) < 0.0125);
}

TEST_CASE("model assembly") {
  const std::vector<MeTriple> marg = {exp_law(1.0), erlang2(1.5)};

  // Order one yields the independence product of the marginals.
  BernsteinPhi unit{1, 2, {1.0}};
  const MmeamModel indep = calib::assemble_mmeam(marg, unit);
  for (double x1 : {0.3, 1.2}) {
    for (double x2 : {0.5, 2.0}) {
      Eigen::VectorXd x(2);
      x << x1, x2;
      CHECK(indep.joint_density(x) ==
            Approx(marg[0].pdf(x1) * marg[1].pdf(x2)).margin(1e-10));
    }
  }

  // Order two on two unit exponentials: pools are the min and max laws.
  const std::vector<MeTriple> ee = {exp_law(1.0), exp_law(1.0)};
  const Dataset d(from_levels({{0.2, 0.3}, {0.7, 0.8}}));
  const MmeamModel fit = calib::calibrate(d, ee, 2);
  const MeTriple& lo = fit.pool(0)[0];
  const MeTriple& hi = fit.pool(0)[1];
  for (double x : {0.2, 1.0, 2.4}) {
    CHECK(lo.pdf(x) == Approx(2.0 * std::exp(-2.0 * x)).margin(1e-12));
    CHECK(hi.pdf(x) ==
          Approx(2.0 * std::exp(-x) - 2.0 * std::exp(-2.0 * x)).margin(1e-12));
  }

  // The assembled joint density integrates to one.
  Eigen::VectorXd zero = Eigen::VectorXd::Zero(2);
  const double mass =
      quad::integrate_tail_box(
          [&](const Eigen::VectorXd& x) { return fit.joint_density(x); }, zero,
          -1.0, 1e-9)
          .value_or_throw();
  CHECK(mass == Approx(1.0).margin(1e-7));

  // Large independent sample: near-zero fitted rank correlation and a
  // faithful marginal density.
  auto g = memix::test::rng(419);
  const Dataset big = random_exp_dataset(g, 100000, 2);
  const MmeamModel m3 = calib::calibrate(big, ee, 3);
  CHECK(std::abs(m3.rank_corr(0, 1, RankKind::kendall)) < 0.03);
  const MeMixture marg0 = m3.marginal(0);
  for (double x = 0.0; x <= 5.0; x += 0.25) {
    CHECK(std::abs(marg0.pdf(x) - std::exp(-x)) < 0.05);
  }

  CHECK_THROWS_AS(calib::assemble_mmeam({exp_law(1.0)}, unit), InputError);
}

TEST_CASE("moment-matched marginal helper") {
  const MeTriple e = calib::erlang_moment_fit(3.0, 9.0);
  CHECK(e.dim() == 1);
  for (double x : {0.4, 2.0}) {
    CHECK(e.pdf(x) == Approx(std::exp(-x / 3.0) / 3.0).epsilon(1e-12));
  }
  const MeTriple er = calib::erlang_moment_fit(2.0, 2.0);
  CHECK(er.dim() == 2);
  for (double x : {0.4, 2.0}) {
    CHECK(er.pdf(x) == Approx(x * std::exp(-x)).epsilon(1e-12));
  }
  CHECK_THROWS_AS(calib::erlang_moment_fit(-1.0, 1.0), InputError);
  CHECK_THROWS_AS(calib::erlang_moment_fit(1.0, 0.0), InputError);

  auto g = memix::test::rng(421);
  const Dataset d = random_exp_dataset(g, 5000, 2);
  const auto fits = calib::fit_marginal_erlangs(d);
  REQUIRE(fits.size() == 2);
  for (int j = 0; j < 2; ++j) {
    CHECK(fits[j].mean() == Approx(d.values().col(j).mean()).epsilon(1e-9));
  }
}
