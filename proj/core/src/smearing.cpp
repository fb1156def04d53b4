#include "qfluct/smearing.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include "qfluct/error.hpp"
#include "qfluct/kernels.hpp"
#include "qfluct/parallel.hpp"
#include "qfluct/quadrature.hpp"

namespace qfluct {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kPrefactor = 1.0 / (8.0 * kPi * kPi);
// Upper bound of ∫|f'| over the real line (= 2 f(0)).
constexpr double kDerivativeL1 = 2.0 / kPi;
constexpr std::size_t kInnerBudget = 200;
constexpr std::size_t kOuterBudget = 200;

// Panel boundaries at 0, +-2^k (k = -1 .. ) up to T, so the initial panels
// resolve the unit-width peaks of f' on the wide box.
std::vector<double> scale_breakpoints(double T) {
  std::vector<double> pts = {-T, 0.0, T};
  for (double x = 0.5; x < T; x *= 2.0) {
    pts.push_back(x);
    pts.push_back(-x);
  }
  std::sort(pts.begin(), pts.end());
  return pts;
}

struct InnerStats {
  double max_error = 0.0;
  bool converged = true;
};

}  // namespace

double lorentzian(double t) { return 1.0 / (kPi * (t * t + 1.0)); }

double lorentzian_derivative(double t) {
  const double d = t * t + 1.0;
  return -2.0 * t / (kPi * d * d);
}

void SmearingSpec::validate() const {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) throw PreconditionError("alpha must be positive");
  if (!(truncation_T >= 50.0) || !std::isfinite(truncation_T))
    throw PreconditionError("truncation_T must be >= 50");
  if (!(abs_tol > 0.0)) throw PreconditionError("abs_tol must be positive");
}

double smearing_tail_bound(const SmearingSpec& spec) {
  const double T = spec.truncation_T;
  return 4.0 / (kPi * kPi * T * T) * (1.0 + std::fabs(std::log(T * spec.alpha)));
}

SmearedValue smeared_correlation_quadrature(double t0, const SmearingSpec& spec) {
  spec.validate();
  if (!std::isfinite(t0)) throw PreconditionError("t0 must be finite");

  const double T = spec.truncation_T;
  const double log_alpha2 = 2.0 * std::log(spec.alpha);
  // Tolerances on the raw double integral (before the -1/8pi^2 prefactor).
  const double raw_tol = spec.abs_tol / kPrefactor;
  const double outer_tol = 0.5 * raw_tol;
  const double inner_tol = 0.4 * raw_tol / kDerivativeL1;

  InnerStats stats;

  const std::vector<double> base_points = scale_breakpoints(T);

  // g(s) = ∫ f'(t') log[(s + t0 - t')^2 alpha^2] dt' over [-T, T], with the
  // singular point t' = s + t0 on a panel boundary.
  auto inner = [&](double s) {
    const double singular = s + t0;
    auto integrand = [&](double tp) {
      const double d = singular - tp;
      if (d == 0.0) return 0.0;
      return lorentzian_derivative(tp) * (std::log(d * d) + log_alpha2);
    };
    std::vector<double> points = base_points;
    if (singular > -T && singular < T) {
      points.insert(std::upper_bound(points.begin(), points.end(), singular), singular);
    }
    quad::Options opts;
    opts.abs_tol = inner_tol;
    opts.max_intervals = kInnerBudget;
    const quad::Result r = quad::integrate(integrand, points, opts);
    stats.max_error = std::max(stats.max_error, r.abs_error);
    stats.converged = stats.converged && r.converged;
    return r.value;
  };

  auto outer_integrand = [&](double s) { return lorentzian_derivative(s) * inner(s); };

  quad::Options outer_opts;
  outer_opts.abs_tol = outer_tol;
  outer_opts.max_intervals = kOuterBudget;
  const quad::Result outer = quad::integrate(outer_integrand, base_points, outer_opts);

  const double raw_bound = outer.abs_error + kDerivativeL1 * stats.max_error;
  SmearedValue out{-kPrefactor * outer.value, kPrefactor * raw_bound, smearing_tail_bound(spec)};

  if (!outer.converged || !stats.converged || out.error_bound > spec.abs_tol) {
    throw ConvergenceError("smeared correlation quadrature did not reach abs_tol within the "
                           "subdivision budget",
                           out.value, out.error_bound);
  }
  return out;
}

VerificationReport verify_closed_form(std::span<const double> t0_grid, const SmearingSpec& spec,
                                      unsigned threads) {
  if (t0_grid.empty()) throw PreconditionError("t0 grid must be nonempty");
  for (double t0 : t0_grid)
    if (!std::isfinite(t0)) throw PreconditionError("t0 grid values must be finite");
  spec.validate();

  VerificationReport report;
  report.rows.resize(t0_grid.size());
  parallel_for(t0_grid.size(), threads, [&](std::size_t i) {
    VerificationRow& row = report.rows[i];
    row.t0 = t0_grid[i];
    row.alpha = spec.alpha;
    row.closed_form = eval_scalar(row.t0);
    row.tail_bound = smearing_tail_bound(spec);
    try {
      const SmearedValue v = smeared_correlation_quadrature(row.t0, spec);
      row.quad_value = v.value;
      row.err_bound = v.error_bound;
      row.converged = true;
    } catch (const ConvergenceError& e) {
      row.quad_value = e.best_estimate();
      row.err_bound = e.error_bound();
      row.converged = false;
      row.failure = e.what();
    }
    row.abs_dev = std::fabs(row.quad_value - row.closed_form);
    row.rel_dev = row.closed_form != 0.0 ? row.abs_dev / std::fabs(row.closed_form)
                                         : std::numeric_limits<double>::quiet_NaN();
    row.pass = row.converged && row.abs_dev <= spec.abs_tol;
  });

  report.all_pass = true;
  for (const VerificationRow& row : report.rows) {
    report.max_abs_dev = std::max(report.max_abs_dev, row.abs_dev);
    report.all_pass = report.all_pass && row.pass;
  }
  return report;
}

}  // namespace qfluct
