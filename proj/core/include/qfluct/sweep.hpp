#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qfluct/calibration.hpp"
#include "qfluct/kernels.hpp"

namespace qfluct {

struct SweepConfig {
  std::size_t n_points = 801;
  double t0_max = 8.0;
  std::uint64_t steps_per_point = 20000;
  std::uint64_t seed = 42;
  unsigned threads = 1;  ///< 0 = hardware concurrency; never affects results

  void validate() const;
};

struct SweepRow {
  double t0;
  double c_analytic;
  double f_shift;      ///< NaN when calibration was infeasible
  double c_simulated;  ///< NaN when calibration was infeasible
  double std_error;
  std::uint64_t n_steps;
  std::optional<std::string> failure;
};

struct SweepResult {
  std::vector<SweepRow> rows;
  KernelKind kernel_kind;
  double wavenumber;
  double variance;
  CalibrationMethod method;
  SamplerMode mode;
  SweepConfig config;

  std::size_t feasible_count() const;
  /// Max and RMS of |c_simulated - c_analytic| over feasible rows.
  double max_deviation() const;
  double rms_deviation() const;
};

/// Simulated lag-1 correlation against the analytic kernel on the uniform grid
/// t0 = i * t0_max / (n_points - 1). Point i uses stream (seed, i), so the
/// result is bitwise independent of the thread count.
SweepResult correlation_sweep(const CorrelationKernel& kernel, const CalibrationModel& calib,
                              const SweepConfig& config);

}  // namespace qfluct
