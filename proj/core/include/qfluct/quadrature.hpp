#pragma once

#include <cstddef>
#include <functional>
#include <span>

namespace qfluct::quad {

struct Result {
  double value = 0.0;
  double abs_error = 0.0;
  std::size_t intervals = 0;
  std::size_t evaluations = 0;
  bool converged = false;
};

struct Options {
  double abs_tol = 1e-10;
  double rel_tol = 0.0;
  std::size_t max_intervals = 1000;
};

using Integrand = std::function<double(double)>;

/// One 15-point Kronrod panel with its embedded 7-point Gauss estimate.
/// The error follows the QUADPACK qk15 heuristic, including the roundoff floor.
Result gauss_kronrod15(const Integrand& f, double a, double b);

/// Globally adaptive Gauss-Kronrod (QAG style): the panel with the largest
/// error is bisected until sum(err) <= max(abs_tol, rel_tol * |I|) or the
/// interval budget is spent. Never evaluates f at a or b, so integrable
/// endpoint singularities are allowed. Does not throw on non-convergence;
/// check `converged`.
Result integrate(const Integrand& f, double a, double b, const Options& opts = {});

/// Same, starting from the panels between consecutive `breakpoints` (sorted
/// ascending, at least two). Use it to seed the scheme with the length scale
/// of a narrow feature on a wide interval, or to put a singularity on a panel
/// boundary.
Result integrate(const Integrand& f, std::span<const double> breakpoints, const Options& opts = {});

}  // namespace qfluct::quad
