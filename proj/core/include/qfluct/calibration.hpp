#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <string_view>
#include <vector>

#include "qfluct/kernels.hpp"
#include "qfluct/sampler.hpp"

namespace qfluct {

enum class CalibrationMethod { PaperTanFit, ExactChainInversion, MonteCarloTable };

std::string_view to_string(CalibrationMethod method);
/// Accepts "tanfit", "exact", "table". Throws PreconditionError.
CalibrationMethod parse_calibration_method(std::string_view name);

/// Published tan-fit constants: C(f) = a tan(b f).
struct TanFitConstants {
  double a;
  double b;
};
/// a = 0.01404, b = 1.58 for the scalar kernel; a = 0.672, b = 1.59 otherwise.
TanFitConstants paper_tan_constants(KernelKind kind);

/// C(f) = a tan(b f). Throws DomainError for |f| >= pi / (2b).
double c_of_f_tanfit(double f, double a, double b);

/// Published arctan shift maps, formulas exactly as printed:
///   scalar:   (1/b) atan[(4 - t0^2) / (4 pi a (4 + t0^2)^2)]
///   em:       (1/b) atan[(1 - 6 t0^2 + t0^4) / (a (1 + t0^2)^4)]
///   squeezed: (1/b) atan[cos(k t0) / a]
double f_from_t0_paper(KernelKind kind, double t0, double k, TanFitConstants c);
double f_from_t0_paper(KernelKind kind, double t0, double k = 1.0);

/// Unique f in (-1, 1) whose raw-chain lag-1 covariance f s2 / (1 - f^2)
/// equals c_target. Every finite target is attainable.
double f_exact_chain(double c_target, double sigma2);

/// Pair / normalized-chain inversion f = c / s2. Throws
/// InfeasibleCalibrationError when |c| > s2.
double f_exact_linear(double c_target, double sigma2);

struct CalibrationRow {
  double f;
  double c_estimate;
  double std_error;
  std::uint64_t n_steps;
};

/// Monotone table of simulated lag-1 covariance against shift factor.
class MonteCarloTable {
 public:
  /// Throws CalibrationResolutionError unless c_estimate is strictly
  /// increasing in f, PreconditionError on fewer than two rows.
  MonteCarloTable(std::vector<CalibrationRow> rows, SamplerMode mode, double sigma2);

  const std::vector<CalibrationRow>& rows() const noexcept { return rows_; }
  SamplerMode mode() const noexcept { return mode_; }
  double sigma2() const noexcept { return sigma2_; }

  /// Shape-preserving cubic interpolation of C at f.
  double c_at(double f) const;
  /// Inverse of c_at, found by bisection on the interpolant. Targets are rescaled by sigma2()/sigma2 first (covariance
  /// is linear in the base variance at fixed f). Throws
  /// InfeasibleCalibrationError outside the tabulated range.
  double f_for(double c_target, double sigma2) const;

 private:
  std::vector<CalibrationRow> rows_;
  SamplerMode mode_;
  double sigma2_;
  std::vector<double> f_, c_;
};

/// Default calibration grid: 41 uniform points on [-0.98, 0.98].
std::vector<double> default_f_grid();

/// Runs the sampler at every f in the grid with stream (seed, grid index) and
/// tabulates the lag-1 estimate. Grid must be strictly increasing in (-1, 1)
/// and steps_per_point >= 10^4.
MonteCarloTable calibrate_monte_carlo(SamplerMode mode, double sigma2, std::span<const double> f_grid,
                                      std::uint64_t steps_per_point, std::uint64_t seed,
                                      unsigned threads = 1);

/// Immutable rule mapping (kernel, t0) to a shift factor.
class CalibrationModel {
 public:
  static CalibrationModel paper_tan_fit(KernelKind kind, SamplerMode mode = SamplerMode::ChainRaw);
  static CalibrationModel paper_tan_fit(TanFitConstants constants, SamplerMode mode);
  static CalibrationModel exact(SamplerMode mode = SamplerMode::ChainRaw);
  static CalibrationModel monte_carlo(MonteCarloTable table);

  CalibrationMethod method() const noexcept { return method_; }
  SamplerMode sampler_mode() const noexcept { return mode_; }
  /// Only meaningful for PaperTanFit.
  TanFitConstants constants() const noexcept { return constants_; }
  const MonteCarloTable* table() const noexcept { return table_.get(); }

  /// Shift factor for separation t0 under the kernel, with the kernel's
  /// variance as the base variance. PaperTanFit uses the published map for
  /// the kernel kind. Throws InfeasibleCalibrationError if unreachable.
  double shift_for(const CorrelationKernel& kernel, double t0) const;

  /// Shift factor for a target covariance (ExactChainInversion and
  /// MonteCarloTable); PaperTanFit inverts a tan(b f) directly.
  double shift_for_target(double c_target, double sigma2) const;

 private:
  CalibrationModel(CalibrationMethod method, SamplerMode mode) : method_(method), mode_(mode) {}

  CalibrationMethod method_;
  SamplerMode mode_;
  TanFitConstants constants_{0.672, 1.59};
  std::shared_ptr<const MonteCarloTable> table_;
};

}  // namespace qfluct
