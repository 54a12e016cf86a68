#include <cmath>
#include <complex>

#include <catch2/catch_amalgamated.hpp>

#include "memix/matrix_function.hpp"
#include "support/test_support.hpp"

using Eigen::MatrixXd;
using namespace memix::lin;
namespace mt = memix::test;

namespace {
const ScalarFunc kExp = [](std::complex<double> z) { return std::exp(z); };

double max_abs_diff(const MatrixXd& a, const MatrixXd& b) {
  return (a - b).cwiseAbs().maxCoeff();
}
}  // namespace

TEST_CASE("exp via both methods matches expm") {
  auto g = mt::rng(21);
  for (int rep = 0; rep < 5; ++rep) {
    MatrixXd a = mt::random_stable(g, 3);
    MatrixXd ref = expm(a);
    CHECK(max_abs_diff(holo_matrix_func(kExp, a, MatFuncMethod::eigen), ref) <
          1e-10);
    CHECK(max_abs_diff(holo_matrix_func(kExp, a, MatFuncMethod::contour), ref) <
          1e-8);
  }
}

TEST_CASE("reciprocal on a diagonal matrix") {
  MatrixXd a = MatrixXd::Zero(2, 2);
  a(0, 0) = 2.0;
  a(1, 1) = 4.0;
  MatrixXd r = holo_matrix_func([](std::complex<double> z) { return 1.0 / z; },
                                a, MatFuncMethod::eigen);
  CHECK_THAT(r(0, 0), Catch::Matchers::WithinAbs(0.5, 1e-12));
  CHECK_THAT(r(1, 1), Catch::Matchers::WithinAbs(0.25, 1e-12));
}

TEST_CASE("point-mass scaling transform equals a rescaled exponential") {
  // g(z) = e^{-zb} applied to -T x equals e^{T x b}.
  mt::Canonical c;
  const double x = 0.8, b = 2.0;
  MatrixXd a = -c.T * x;
  auto g = [b](std::complex<double> z) { return std::exp(-z * b); };
  CHECK(max_abs_diff(holo_matrix_func(g, a), expm(MatrixXd(c.T * (x * b)))) <
        1e-10);
}

TEST_CASE("contour agrees with eigen on well-separated spectra") {
  auto g = mt::rng(22);
  // 1/z^2 is analytic only on Re z > 0; declaring the region keeps the
  // contour away from the pole at the origin.
  AnalyticDomain dom{0.0};
  const ScalarFunc inv_sq = [](std::complex<double> z) {
    return 1.0 / (z * z);
  };
  for (int rep = 0; rep < 20; ++rep) {
    // -random_stable has spectrum in the right half-plane.
    MatrixXd a = -mt::random_stable(g, 3, /*gap=*/1.0);
    MatrixXd fe = holo_matrix_func(inv_sq, a, MatFuncMethod::eigen, dom);
    MatrixXd fc = holo_matrix_func(inv_sq, a, MatFuncMethod::contour, dom);
    CHECK(max_abs_diff(fe, fc) < 1e-8);
  }
}

TEST_CASE("defective matrix falls back to the contour") {
  MatrixXd a(2, 2);
  a << 2.0, 1.0, 0.0, 2.0;  // Jordan block: no eigenbasis
  CHECK_THROWS_AS(holo_matrix_func(kExp, a, MatFuncMethod::eigen),
                  memix::NumericError);
  MatrixXd ref = expm(a);
  CHECK(max_abs_diff(holo_matrix_func(kExp, a, MatFuncMethod::contour), ref) <
        1e-8);
  CHECK(max_abs_diff(holo_matrix_func(kExp, a), ref) < 1e-8);
}

TEST_CASE("analyticity region clamps the contour") {
  // g analytic only for Re z > -1; a wide positive spectrum forces the
  // default circle to cross the boundary, so the ellipse must kick in.
  AnalyticDomain dom{-1.0};
  const ScalarFunc g = [](std::complex<double> z) {
    return 1.0 / ((z + 1.0) * (z + 1.0) * (z + 1.0));
  };
  MatrixXd a = MatrixXd::Zero(2, 2);
  a(0, 0) = 0.5;
  a(1, 1) = 6.0;
  MatrixXd r = holo_matrix_func(g, a, MatFuncMethod::contour, dom);
  CHECK_THAT(r(0, 0),
             Catch::Matchers::WithinAbs(std::pow(1.5, -3.0), 1e-8));
  CHECK_THAT(r(1, 1),
             Catch::Matchers::WithinAbs(std::pow(7.0, -3.0), 1e-8));

  MatrixXd bad = MatrixXd::Zero(2, 2);
  bad(0, 0) = -2.0;  // outside the analyticity region
  bad(1, 1) = 1.0;
  CHECK_THROWS_AS(holo_matrix_func(g, bad, MatFuncMethod::contour, dom),
                  memix::DomainError);
}

TEST_CASE("input validation") {
  CHECK_THROWS_AS(holo_matrix_func(kExp, MatrixXd::Zero(2, 3)),
                  memix::InputError);
}
