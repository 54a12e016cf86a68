#include <cmath>

#include <catch2/catch_amalgamated.hpp>

#include "memix/quadrature.hpp"

using memix::quad::integrate;
using memix::quad::integrate_box;
using memix::quad::integrate_tail;
using memix::quad::integrate_tail_box;

TEST_CASE("polynomial on a finite interval") {
  auto r = integrate([](double x) { return x * x; }, 0.0, 1.0);
  REQUIRE(r.converged);
  CHECK_THAT(r.value, Catch::Matchers::WithinAbs(1.0 / 3.0, 1e-12));
}

TEST_CASE("exponential tail integral") {
  auto r = integrate_tail([](double x) { return std::exp(-x); }, 0.0, -1.0);
  REQUIRE(r.converged);
  CHECK_THAT(r.value, Catch::Matchers::WithinAbs(1.0, 1e-8));
}

TEST_CASE("damped oscillation") {
  const double upper = 20.0;
  auto r = integrate([](double x) { return std::exp(-x) * std::cos(x); }, 0.0,
                     upper);
  const double exact =
      0.5 * (1.0 + std::exp(-upper) * (std::sin(upper) - std::cos(upper)));
  REQUIRE(r.converged);
  CHECK_THAT(r.value, Catch::Matchers::WithinAbs(exact, 1e-10));
}

TEST_CASE("empty and invalid intervals") {
  CHECK(integrate([](double) { return 1.0; }, 2.0, 2.0).value == 0.0);
  CHECK_THROWS_AS(integrate([](double) { return 1.0; }, 1.0, 0.0),
                  memix::InputError);
  CHECK_THROWS_AS(
      integrate_tail([](double) { return 1.0; }, 0.0, /*kappa=*/1.0),
      memix::InputError);
}

TEST_CASE("product integrand over a 2-D box") {
  Eigen::VectorXd lo(2), hi(2);
  lo << 0.0, 0.0;
  hi << 1.0, 1.0;
  auto r = integrate_box([](const Eigen::VectorXd& x) { return x[0] * x[1]; },
                         lo, hi, 1e-10);
  REQUIRE(r.converged);
  CHECK_THAT(r.value, Catch::Matchers::WithinAbs(0.25, 1e-9));
}

TEST_CASE("exponential mass over a 2-D tail box") {
  Eigen::VectorXd lo(2);
  lo << 1.0, 1.0;
  auto r = integrate_tail_box(
      [](const Eigen::VectorXd& x) { return std::exp(-x.sum()); }, lo, -1.0,
      1e-9);
  REQUIRE(r.converged);
  CHECK_THAT(r.value, Catch::Matchers::WithinAbs(std::exp(-2.0), 1e-7));
}

TEST_CASE("3-D box integral") {
  Eigen::VectorXd lo = Eigen::VectorXd::Zero(3);
  Eigen::VectorXd hi = Eigen::VectorXd::Ones(3);
  auto r = integrate_box(
      [](const Eigen::VectorXd& x) { return x.prod(); }, lo, hi, 1e-8);
  REQUIRE(r.converged);
  CHECK_THAT(r.value, Catch::Matchers::WithinAbs(0.125, 1e-7));
}

TEST_CASE("dimension cap") {
  Eigen::VectorXd lo = Eigen::VectorXd::Zero(4);
  Eigen::VectorXd hi = Eigen::VectorXd::Ones(4);
  CHECK_THROWS_AS(
      integrate_box([](const Eigen::VectorXd&) { return 1.0; }, lo, hi),
      memix::InputError);
}
