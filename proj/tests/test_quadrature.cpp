#include <cmath>
#include <numbers>

#include "doctest.h"
#include "oracles.hpp"
#include "qfluct/kernels.hpp"
#include "qfluct/quadrature.hpp"

using namespace qfluct;

TEST_CASE("single Kronrod panel is exact for low-degree polynomials") {
  // K15 integrates degree <= 22 exactly; G7 embedded is exact to degree 13.
  const auto r = quad::gauss_kronrod15([](double x) { return std::pow(x, 20) - 3 * x * x + 1; }, -1.0, 2.0);
  const double exact = (std::pow(2.0, 21) + 1.0) / 21.0 - (8.0 + 1.0) + 3.0;
  CHECK(r.value == doctest::Approx(exact).epsilon(1e-14));
  const auto w = quad::gauss_kronrod15([](double) { return 1.0; }, 0.0, 1.0);
  CHECK(w.value == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("adaptive integration of smooth and peaked integrands") {
  quad::Options opts;
  opts.abs_tol = 1e-12;
  const auto r = quad::integrate([](double x) { return std::exp(-x * x); }, -10.0, 10.0, opts);
  CHECK(r.converged);
  CHECK(r.value == doctest::Approx(std::sqrt(std::numbers::pi)).epsilon(1e-12));
  CHECK(std::fabs(r.value - std::sqrt(std::numbers::pi)) <= r.abs_error + 1e-15);
}

TEST_CASE("integrable endpoint log singularity") {
  quad::Options opts;
  opts.abs_tol = 1e-10;
  const auto r = quad::integrate([](double x) { return std::log(x); }, 0.0, 1.0, opts);
  CHECK(r.converged);
  CHECK(r.value == doctest::Approx(-1.0).epsilon(1e-10));
}

TEST_CASE("kernel lobes match symbolic antiderivatives") {
  quad::Options opts;
  opts.abs_tol = 1e-14;
  const auto lobe = quad::integrate([](double t) { return eval_scalar(t); }, 0.0, 2.0, opts);
  CHECK(lobe.value == doctest::Approx(oracle::scalar_antiderivative(2.0)).epsilon(1e-12));

  const double r1 = std::sqrt(2.0) - 1.0;
  const auto qlobe = quad::integrate([](double t) { return eval_unit_quartic(t); }, 0.0, r1, opts);
  CHECK(qlobe.value == doctest::Approx(oracle::quartic_antiderivative(r1)).epsilon(1e-12));
}

TEST_CASE("budget exhaustion is reported, not thrown") {
  quad::Options opts;
  opts.abs_tol = 1e-300;
  opts.max_intervals = 20;
  const auto r = quad::integrate([](double x) { return std::sin(x); }, 0.0, 3.0, opts);
  CHECK_FALSE(r.converged);
  CHECK(r.value == doctest::Approx(1.0 - std::cos(3.0)).epsilon(1e-12));
}

TEST_CASE("empty interval") {
  const auto r = quad::integrate([](double x) { return x; }, 1.0, 1.0);
  CHECK(r.converged);
  CHECK(r.value == 0.0);
}
