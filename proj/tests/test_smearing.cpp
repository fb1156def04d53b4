#include <chrono>
#include <cmath>
#include <numbers>
#include <vector>

#include "doctest.h"
#include "oracles.hpp"
#include "qfluct/error.hpp"
#include "qfluct/kernels.hpp"
#include "qfluct/smearing.hpp"

using namespace qfluct;
using std::numbers::pi;

TEST_CASE("lorentzian sampling function") {
  CHECK(lorentzian(0.0) == doctest::Approx(1.0 / pi).epsilon(1e-15));
  CHECK(lorentzian(1.0) == doctest::Approx(1.0 / (2.0 * pi)).epsilon(1e-15));
  // arctan antiderivative: ∫_{-T}^{T} f = (2/pi) atan(T) = 1 - 2/(pi T) + O(T^-3).
  const double T = 1e3;
  const double mass = oracle::simpson(lorentzian, -T, T, 2000000);
  CHECK(std::fabs(mass - 1.0) < 1e-3);
  CHECK(mass == doctest::Approx(2.0 / pi * std::atan(T)).epsilon(1e-9));
}

TEST_CASE("lorentzian derivative") {
  CHECK(lorentzian_derivative(0.0) == 0.0);
  CHECK(lorentzian_derivative(1.0) == doctest::Approx(-1.0 / (2.0 * pi)).epsilon(1e-15));
  CHECK(lorentzian_derivative(-0.3) == -lorentzian_derivative(0.3));
  const double fd = oracle::central_difference(lorentzian, 0.7, 1e-6);
  CHECK(std::fabs(fd - lorentzian_derivative(0.7)) < 1e-8);
}

TEST_CASE("smearing parameter validation") {
  CHECK_THROWS_AS(smeared_correlation_quadrature(0.0, {0.0, 100.0, 1e-6}), PreconditionError);
  CHECK_THROWS_AS(smeared_correlation_quadrature(0.0, {1.0, 10.0, 1e-6}), PreconditionError);
  CHECK_THROWS_AS(smeared_correlation_quadrature(0.0, {1.0, 100.0, 0.0}), PreconditionError);
}

TEST_CASE("quadrature reproduces the closed form") {
  const SmearingSpec spec{1.0, 100.0, 1e-6};
  const SmearedValue at0 = smeared_correlation_quadrature(0.0, spec);
  CHECK(std::fabs(at0.value - 1.0 / (16.0 * pi * pi)) < 1e-6);
  CHECK(at0.error_bound <= spec.abs_tol);
  const SmearedValue at2 = smeared_correlation_quadrature(2.0, spec);
  CHECK(std::fabs(at2.value) < 1e-6);
  const SmearedValue at1 = smeared_correlation_quadrature(1.0, spec);
  CHECK(std::fabs(at1.value - eval_scalar(1.0)) < 1e-6);
}

TEST_CASE("alpha independence") {
  const SmearedValue lo = smeared_correlation_quadrature(1.0, {0.1, 100.0, 1e-6});
  const SmearedValue mid = smeared_correlation_quadrature(1.0, {1.0, 100.0, 1e-6});
  const SmearedValue hi = smeared_correlation_quadrature(1.0, {10.0, 100.0, 1e-6});
  CHECK(std::fabs(lo.value - hi.value) < 2e-6);
  CHECK(std::fabs(lo.value - hi.value) <= 2.0 * (lo.error_bound + hi.error_bound));
  CHECK(std::fabs(lo.value - mid.value) <= 2.0 * (lo.error_bound + mid.error_bound));
}

TEST_CASE("symmetry in t0") {
  const SmearingSpec spec{1.0, 100.0, 1e-6};
  for (double t0 : {0.5, 3.0}) {
    const SmearedValue p = smeared_correlation_quadrature(t0, spec);
    const SmearedValue m = smeared_correlation_quadrature(-t0, spec);
    CHECK(std::fabs(p.value - m.value) <= 2.0 * (p.error_bound + m.error_bound));
  }
}

TEST_CASE("tightening the tolerance does not increase the deviation") {
  double previous = 1.0;
  for (double tol : {1e-4, 5e-5, 2.5e-5, 1.25e-5, 6.25e-6}) {
    const SmearedValue v = smeared_correlation_quadrature(1.0, {1.0, 100.0, tol});
    const double dev = std::fabs(v.value - eval_scalar(1.0));
    CHECK(dev <= previous);
    CHECK(dev <= tol);
    previous = dev;
  }
}

TEST_CASE("unattainable tolerance raises ConvergenceError with best estimate") {
  try {
    (void)smeared_correlation_quadrature(0.0, {1.0, 100.0, 1e-30});
    FAIL("expected ConvergenceError");
  } catch (const ConvergenceError& e) {
    CHECK(std::fabs(e.best_estimate() - eval_scalar(0.0)) < 1e-6);
    CHECK(e.error_bound() > 1e-30);
  }
}

TEST_CASE("batch verification") {
  const std::vector<double> grid = {0, 1, 2, 4, 8};
  const VerificationReport report = verify_closed_form(grid, {1.0, 100.0, 1e-6});
  CHECK(report.all_pass);
  CHECK(report.max_abs_dev < 1e-6);
  REQUIRE(report.rows.size() == grid.size());
  for (const auto& row : report.rows) {
    CHECK(row.converged);
    CHECK(row.err_bound <= 1e-6);
    CHECK(row.tail_bound > 0.0);
  }
  CHECK(std::isnan(report.rows[2].rel_dev));  // closed form vanishes at t0 = 2

  const std::vector<double> two = {2.0};
  CHECK(verify_closed_form(two, {1.0, 100.0, 1e-6}).rows[0].abs_dev < 1e-6);
  CHECK_THROWS_AS(verify_closed_form(std::vector<double>{}, {1.0, 100.0, 1e-6}), PreconditionError);
}

TEST_CASE("batch records convergence failures without aborting") {
  const std::vector<double> grid = {0.0};
  const VerificationReport report = verify_closed_form(grid, {1.0, 100.0, 1e-30});
  CHECK_FALSE(report.all_pass);
  CHECK_FALSE(report.rows[0].converged);
  CHECK(report.rows[0].failure.has_value());
}

TEST_CASE("batch result is independent of thread count") {
  const std::vector<double> grid = {0.0, 0.5, 3.0};
  const auto one = verify_closed_form(grid, {1.0, 100.0, 1e-6}, 1);
  const auto many = verify_closed_form(grid, {1.0, 100.0, 1e-6}, 3);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    CHECK(one.rows[i].quad_value == many.rows[i].quad_value);
    CHECK(one.rows[i].err_bound == many.rows[i].err_bound);
  }
}
