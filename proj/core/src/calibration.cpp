#include "qfluct/calibration.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

// Boost 1.74 pchip.hpp calls unqualified isnan; <math.h> puts it in scope.
#include <math.h>

#include <boost/math/interpolators/pchip.hpp>

#include "qfluct/error.hpp"
#include "qfluct/parallel.hpp"

namespace qfluct {
namespace {

constexpr double kPi = std::numbers::pi;

// Monotone interpolation through strictly increasing (x, y). PCHIP needs at
// least four nodes; shorter tables fall back to linear, which is also monotone.
double monotone_interpolate(const std::vector<double>& x, const std::vector<double>& y, double at) {
  if (x.size() >= 4) {
    std::vector<double> xs = x, ys = y;
    boost::math::interpolators::pchip<std::vector<double>> spline(std::move(xs), std::move(ys));
    return spline(at);
  }
  const auto it = std::upper_bound(x.begin(), x.end(), at);
  std::size_t hi = static_cast<std::size_t>(std::distance(x.begin(), it));
  hi = std::clamp<std::size_t>(hi, 1, x.size() - 1);
  const std::size_t lo = hi - 1;
  const double w = (at - x[lo]) / (x[hi] - x[lo]);
  return y[lo] + w * (y[hi] - y[lo]);
}

}  // namespace

std::string_view to_string(CalibrationMethod method) {
  switch (method) {
    case CalibrationMethod::PaperTanFit: return "tanfit";
    case CalibrationMethod::ExactChainInversion: return "exact";
    case CalibrationMethod::MonteCarloTable: return "table";
  }
  return "unknown";
}

CalibrationMethod parse_calibration_method(std::string_view name) {
  if (name == "tanfit" || name == "paper") return CalibrationMethod::PaperTanFit;
  if (name == "exact") return CalibrationMethod::ExactChainInversion;
  if (name == "table" || name == "monte-carlo") return CalibrationMethod::MonteCarloTable;
  throw PreconditionError("unknown calibration method '" + std::string(name) +
                          "' (expected tanfit, exact or table)");
}

TanFitConstants paper_tan_constants(KernelKind kind) {
  if (kind == KernelKind::ScalarLorentzian) return {0.01404, 1.58};
  return {0.672, 1.59};
}

double c_of_f_tanfit(double f, double a, double b) {
  if (!(a > 0.0) || !(b > 0.0)) throw PreconditionError("tan-fit constants must be positive");
  if (!(std::fabs(f) < kPi / (2.0 * b))) throw DomainError("tan-fit requires |f| < pi / (2b)");
  return a * std::tan(b * f);
}

double f_from_t0_paper(KernelKind kind, double t0, double k, TanFitConstants c) {
  if (!std::isfinite(t0)) throw PreconditionError("t0 must be finite");
  double ratio = 0.0;
  switch (kind) {
    case KernelKind::ScalarLorentzian: {
      const double t2 = t0 * t0;
      const double d = 4.0 + t2;
      ratio = (4.0 - t2) / (4.0 * kPi * c.a * d * d);
      break;
    }
    case KernelKind::UnitVarianceQuartic:
      ratio = eval_unit_quartic(t0) / c.a;
      break;
    case KernelKind::SqueezedCosine:
      ratio = eval_squeezed(t0, k) / c.a;
      break;
    default:
      throw PreconditionError("unknown kernel kind");
  }
  return std::atan(ratio) / c.b;
}

double f_from_t0_paper(KernelKind kind, double t0, double k) {
  return f_from_t0_paper(kind, t0, k, paper_tan_constants(kind));
}

double f_exact_chain(double c_target, double sigma2) {
  if (!std::isfinite(c_target)) throw PreconditionError("target correlation must be finite");
  if (!(sigma2 > 0.0)) throw PreconditionError("sigma2 must be positive");
  if (c_target == 0.0) return 0.0;
  // Root of c f^2 + s2 f - c = 0 inside (-1, 1), written without cancellation:
  // (-s2 + sqrt(s2^2 + 4c^2)) / 2c == 2c / (s2 + sqrt(s2^2 + 4c^2)).
  return 2.0 * c_target / (sigma2 + std::hypot(sigma2, 2.0 * c_target));
}

double f_exact_linear(double c_target, double sigma2) {
  if (!std::isfinite(c_target)) throw PreconditionError("target correlation must be finite");
  if (!(sigma2 > 0.0)) throw PreconditionError("sigma2 must be positive");
  if (std::fabs(c_target) > sigma2)
    throw InfeasibleCalibrationError("target covariance exceeds the base variance; |f| would exceed 1");
  return c_target / sigma2;
}

MonteCarloTable::MonteCarloTable(std::vector<CalibrationRow> rows, SamplerMode mode, double sigma2)
    : rows_(std::move(rows)), mode_(mode), sigma2_(sigma2) {
  if (rows_.size() < 2) throw PreconditionError("calibration table needs at least two rows");
  if (!(sigma2_ > 0.0)) throw PreconditionError("sigma2 must be positive");
  for (std::size_t i = 1; i < rows_.size(); ++i) {
    if (!(rows_[i].f > rows_[i - 1].f)) throw PreconditionError("calibration table f must be strictly increasing");
    if (!(rows_[i].c_estimate > rows_[i - 1].c_estimate))
      throw CalibrationResolutionError(
          "calibration estimates are not monotone near f = " + std::to_string(rows_[i].f) +
          "; statistical noise exceeds the grid spacing, increase steps per point");
  }
  f_.reserve(rows_.size());
  c_.reserve(rows_.size());
  for (const CalibrationRow& r : rows_) {
    f_.push_back(r.f);
    c_.push_back(r.c_estimate);
  }
}

double MonteCarloTable::c_at(double f) const {
  if (f < f_.front() || f > f_.back()) throw PreconditionError("f outside the tabulated range");
  return monotone_interpolate(f_, c_, f);
}

double MonteCarloTable::f_for(double c_target, double sigma2) const {
  if (!(sigma2 > 0.0)) throw PreconditionError("sigma2 must be positive");
  const double c = c_target * (sigma2_ / sigma2);
  if (c < c_.front() || c > c_.back())
    throw InfeasibleCalibrationError("target correlation outside the calibration table range");
  // Invert the forward interpolant itself so that c_at(f_for(c)) == c.
  const auto hi_it = std::lower_bound(c_.begin(), c_.end(), c);
  std::size_t hi = static_cast<std::size_t>(std::distance(c_.begin(), hi_it));
  if (c_[hi] == c) return f_[hi];
  double lo_f = f_[hi - 1], hi_f = f_[hi];
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo_f + hi_f);
    if (mid <= lo_f || mid >= hi_f) break;
    if (monotone_interpolate(f_, c_, mid) < c) lo_f = mid;
    else hi_f = mid;
  }
  return 0.5 * (lo_f + hi_f);
}

std::vector<double> default_f_grid() {
  constexpr int n = 41;
  std::vector<double> grid(n);
  for (int i = 0; i < n; ++i) grid[static_cast<std::size_t>(i)] = -0.98 + 1.96 * i / (n - 1);
  return grid;
}

MonteCarloTable calibrate_monte_carlo(SamplerMode mode, double sigma2, std::span<const double> f_grid,
                                      std::uint64_t steps_per_point, std::uint64_t seed, unsigned threads) {
  if (f_grid.size() < 2) throw PreconditionError("calibration grid needs at least two points");
  if (steps_per_point < 10000) throw PreconditionError("steps_per_point must be >= 10^4");
  for (std::size_t i = 0; i < f_grid.size(); ++i) {
    if (!(std::fabs(f_grid[i]) < 1.0)) throw PreconditionError("calibration grid must lie within (-1, 1)");
    if (i > 0 && !(f_grid[i] > f_grid[i - 1]))
      throw PreconditionError("calibration grid must be strictly increasing");
  }

  std::vector<CalibrationRow> rows(f_grid.size());
  parallel_for(f_grid.size(), threads, [&](std::size_t i) {
    const ChainConfig cfg{f_grid[i], sigma2, mode};
    const Lag1Estimate est = estimate_lag1(cfg, steps_per_point, seed, i);
    rows[i] = {f_grid[i], est.estimate, est.std_error, steps_per_point};
  });
  return MonteCarloTable(std::move(rows), mode, sigma2);
}

CalibrationModel CalibrationModel::paper_tan_fit(KernelKind kind, SamplerMode mode) {
  return paper_tan_fit(paper_tan_constants(kind), mode);
}

CalibrationModel CalibrationModel::paper_tan_fit(TanFitConstants constants, SamplerMode mode) {
  if (!(constants.a > 0.0) || !(constants.b > 0.0)) throw PreconditionError("tan-fit constants must be positive");
  CalibrationModel m(CalibrationMethod::PaperTanFit, mode);
  m.constants_ = constants;
  return m;
}

CalibrationModel CalibrationModel::exact(SamplerMode mode) {
  return CalibrationModel(CalibrationMethod::ExactChainInversion, mode);
}

CalibrationModel CalibrationModel::monte_carlo(MonteCarloTable table) {
  CalibrationModel m(CalibrationMethod::MonteCarloTable, table.mode());
  m.table_ = std::make_shared<const MonteCarloTable>(std::move(table));
  return m;
}

double CalibrationModel::shift_for(const CorrelationKernel& kernel, double t0) const {
  if (method_ == CalibrationMethod::PaperTanFit)
    return f_from_t0_paper(kernel.kind(), t0, kernel.wavenumber(), constants_);
  return shift_for_target(kernel.eval(t0), kernel.variance());
}

double CalibrationModel::shift_for_target(double c_target, double sigma2) const {
  switch (method_) {
    case CalibrationMethod::PaperTanFit:
      if (!std::isfinite(c_target)) throw PreconditionError("target correlation must be finite");
      return std::atan(c_target / constants_.a) / constants_.b;
    case CalibrationMethod::ExactChainInversion:
      return mode_ == SamplerMode::ChainRaw ? f_exact_chain(c_target, sigma2)
                                            : f_exact_linear(c_target, sigma2);
    case CalibrationMethod::MonteCarloTable:
      return table_->f_for(c_target, sigma2);
  }
  throw PreconditionError("unknown calibration method");
}

}  // namespace qfluct
