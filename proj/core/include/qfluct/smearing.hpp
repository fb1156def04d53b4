#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace qfluct {

/// Lorentzian sampling function f(t) = 1 / (pi (t^2 + 1)), unit width.
double lorentzian(double t);
/// Derivative -2t / (pi (t^2 + 1)^2).
double lorentzian_derivative(double t);

/// Parameters of the log-kernel double integral over the box [-T, T]^2.
struct SmearingSpec {
  double alpha = 1.0;         ///< arbitrary scale inside the logarithm
  double truncation_T = 100;  ///< half-width of the integration box
  double abs_tol = 1e-6;      ///< target absolute error on C(t0)

  /// Throws PreconditionError unless alpha > 0, T >= 50 and abs_tol > 0.
  void validate() const;
};

struct SmearedValue {
  double value;
  double error_bound;  ///< quadrature error only; excludes the truncation tail
  double tail_bound;   ///< analytic bound on the part of the plane outside the box
};

/// C(t0) = -(1 / 8 pi^2) ∫∫ f'(t') f'(t - t0) log[(t - t')^2 alpha^2] dt dt'.
///
/// Nested adaptive Gauss-Kronrod. The outer variable is s = t - t0 on [-T, T];
/// each inner integral over t' in [-T, T] is split at the logarithmic
/// singularity t' = s + t0. Throws ConvergenceError (with the best estimate)
/// when the bound cannot be brought under spec.abs_tol.
SmearedValue smeared_correlation_quadrature(double t0, const SmearingSpec& spec);

/// Analytic bound on the contribution from outside [-T, T]^2:
/// 4 / (pi^2 T^2) * (1 + |log(T alpha)|).
double smearing_tail_bound(const SmearingSpec& spec);

struct VerificationRow {
  double t0;
  double alpha;
  double quad_value;
  double closed_form;
  double abs_dev;
  double rel_dev;  ///< NaN where the closed form vanishes
  double err_bound;
  double tail_bound;
  bool converged;
  bool pass;  ///< converged and abs_dev <= abs_tol
  std::optional<std::string> failure;
};

struct VerificationReport {
  std::vector<VerificationRow> rows;
  double max_abs_dev = 0.0;
  bool all_pass = false;
};

/// Quadrature against the closed form at every grid point. Convergence
/// failures are recorded per row, never abort the batch. Points are evaluated
/// in parallel on up to `threads` workers (0 = hardware concurrency); the
/// result does not depend on the thread count.
VerificationReport verify_closed_form(std::span<const double> t0_grid, const SmearingSpec& spec,
                                      unsigned threads = 1);

}  // namespace qfluct
