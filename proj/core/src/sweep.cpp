#include "qfluct/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "qfluct/error.hpp"
#include "qfluct/parallel.hpp"

namespace qfluct {
namespace {

void mark_failed(SweepRow& row, const char* what) {
  constexpr double nan = std::numeric_limits<double>::quiet_NaN();
  row.f_shift = nan;
  row.c_simulated = nan;
  row.std_error = nan;
  row.failure = what;
}

}  // namespace

void SweepConfig::validate() const {
  if (n_points < 2) throw PreconditionError("sweep needs at least two points");
  if (!(t0_max > 0.0) || !std::isfinite(t0_max)) throw PreconditionError("t0_max must be positive");
  if (steps_per_point < 100) throw PreconditionError("steps_per_point must be >= 100");
}

std::size_t SweepResult::feasible_count() const {
  return static_cast<std::size_t>(
      std::count_if(rows.begin(), rows.end(), [](const SweepRow& r) { return !r.failure; }));
}

double SweepResult::max_deviation() const {
  double m = 0.0;
  for (const SweepRow& r : rows)
    if (!r.failure) m = std::max(m, std::fabs(r.c_simulated - r.c_analytic));
  return m;
}

double SweepResult::rms_deviation() const {
  double sum = 0.0;
  std::size_t n = 0;
  for (const SweepRow& r : rows) {
    if (r.failure) continue;
    const double d = r.c_simulated - r.c_analytic;
    sum += d * d;
    ++n;
  }
  return n == 0 ? std::numeric_limits<double>::quiet_NaN() : std::sqrt(sum / static_cast<double>(n));
}

SweepResult correlation_sweep(const CorrelationKernel& kernel, const CalibrationModel& calib,
                              const SweepConfig& config) {
  config.validate();
  SweepResult result{{}, kernel.kind(), kernel.wavenumber(), kernel.variance(),
                     calib.method(), calib.sampler_mode(), config};
  result.rows.resize(config.n_points);

  const double spacing = config.t0_max / static_cast<double>(config.n_points - 1);
  parallel_for(config.n_points, config.threads, [&](std::size_t i) {
    SweepRow& row = result.rows[i];
    row.t0 = i + 1 == config.n_points ? config.t0_max : spacing * static_cast<double>(i);
    row.c_analytic = kernel.eval(row.t0);
    row.n_steps = config.steps_per_point;
    try {
      const double f = calib.shift_for(kernel, row.t0);
      const ChainConfig chain{f, kernel.variance(), calib.sampler_mode()};
      const Lag1Estimate est = estimate_lag1(chain, config.steps_per_point, config.seed, i);
      row.f_shift = f;
      row.c_simulated = est.estimate;
      row.std_error = est.std_error;
    } catch (const InfeasibleCalibrationError& e) {
      mark_failed(row, e.what());
    } catch (const NonStationaryError& e) {
      mark_failed(row, e.what());
    }
  });
  return result;
}

}  // namespace qfluct
