#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "qfluct/sampler.hpp"

namespace qfluct {

/// Inclusive range of step counts N used by a fit.
struct FitWindow {
  std::size_t first = 1;
  std::size_t last = 100;
};

struct WalkConfig {
  double f = 0.0;
  double sigma2 = 1.0;
  SamplerMode mode = SamplerMode::ChainRaw;
  std::size_t n_steps = 100;
  std::size_t n_walkers = 100000;
  std::uint64_t seed = 3;
  /// Defaults to [1, min(100, n_steps)].
  std::optional<FitWindow> fit_window;
  unsigned threads = 1;
};

struct MsdPoint {
  std::size_t n;
  double msd;
  double std_error;
};

struct GrowthFit {
  double c1;  ///< slope of <y_N^2> against N
  double c0;  ///< intercept
};

/// Ensemble of test particles whose per-step displacement is the sampled field
/// value: y_N = x_1 + ... + x_N.
struct WalkEnsembleResult {
  double f;
  double sigma2;
  SamplerMode mode;
  std::size_t n_walkers;
  std::uint64_t seed;
  std::vector<MsdPoint> msd;  ///< N = 0 .. n_steps
  FitWindow fit_window;
  GrowthFit fit;
  /// Standard errors of the window fit, from the spread of per-walker fits
  /// (the OLS coefficients are linear in the walker average).
  double c1_std_error;
  double c0_std_error;
};

/// Runs `n_walkers` independent chains, walker w on stream (seed, w).
/// Accumulation happens in fixed walker blocks merged in block order, so the
/// result does not depend on `threads`.
WalkEnsembleResult run_walk_ensemble(const WalkConfig& config);

/// Least-squares line through (N, <y_N^2>) on the window; y ~ sqrt(c1 N + c0).
/// Throws PreconditionError when the window is out of range or has fewer
/// than 10 points.
GrowthFit fit_sqrt_growth(const WalkEnsembleResult& result, FitWindow window);

/// Slope of log <y_N^2> against log N on the window (1 for diffusive growth).
double loglog_growth_exponent(const WalkEnsembleResult& result, FitWindow window);

/// Closed-form Var(x_1 + ... + x_N) for a chain started at stationarity:
///   chain modes: s_x^2 [N (1+f)/(1-f) - 2f (1 - f^N)/(1-f)^2]
///   pair mode:   s2 [p (1 + (1+f)^2) + (N mod 2)],  p = floor(N/2)
/// where s_x^2 is the mode's stationary variance.
double partial_sum_variance(SamplerMode mode, double f, double sigma2, std::size_t n);

}  // namespace qfluct
