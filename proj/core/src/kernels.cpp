#include "qfluct/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "qfluct/error.hpp"
#include "qfluct/quadrature.hpp"

namespace qfluct {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr std::size_t kScanSubdivisions = 10000;

void require_finite(double t0) {
  if (!std::isfinite(t0)) throw PreconditionError("kernel argument t0 must be finite");
}

double bisect(const CorrelationKernel& kernel, double lo, double hi, double f_lo) {
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double fm = kernel.eval(mid);
    if (fm == 0.0) return mid;
    if ((fm < 0.0) == (f_lo < 0.0)) {
      lo = mid;
      f_lo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace

std::string_view to_string(KernelKind kind) {
  switch (kind) {
    case KernelKind::ScalarLorentzian: return "scalar";
    case KernelKind::UnitVarianceQuartic: return "em";
    case KernelKind::SqueezedCosine: return "squeezed";
  }
  return "unknown";
}

KernelKind parse_kernel_kind(std::string_view name) {
  if (name == "scalar") return KernelKind::ScalarLorentzian;
  if (name == "em" || name == "quartic") return KernelKind::UnitVarianceQuartic;
  if (name == "squeezed" || name == "cosine") return KernelKind::SqueezedCosine;
  throw PreconditionError("unknown kernel '" + std::string(name) +
                          "' (expected scalar, em or squeezed)");
}

double eval_scalar(double t0) {
  require_finite(t0);
  const double t2 = t0 * t0;
  const double d = t2 + 4.0;
  return (4.0 - t2) / (4.0 * kPi * kPi * d * d);
}

double eval_unit_quartic(double t0) {
  require_finite(t0);
  const double t2 = t0 * t0;
  const double d = 1.0 + t2;
  const double d2 = d * d;
  return (1.0 - 6.0 * t2 + t2 * t2) / (d2 * d2);
}

double eval_squeezed(double t0, double k) {
  require_finite(t0);
  if (!(k > 0.0) || !std::isfinite(k)) throw PreconditionError("wavenumber k must be positive and finite");
  return std::cos(k * t0);
}

CorrelationKernel::CorrelationKernel(KernelKind kind, double k, std::optional<double> kappa)
    : kind_(kind), k_(k), variance_(0.0), kappa_(kappa) {
  variance_ = eval(0.0);
}

CorrelationKernel CorrelationKernel::scalar_lorentzian() {
  return CorrelationKernel(KernelKind::ScalarLorentzian, 1.0, std::nullopt);
}

CorrelationKernel CorrelationKernel::unit_quartic(std::optional<double> kappa) {
  if (kappa && !(*kappa > 0.0)) throw PreconditionError("kappa must be positive");
  return CorrelationKernel(KernelKind::UnitVarianceQuartic, 1.0, kappa);
}

CorrelationKernel CorrelationKernel::squeezed_cosine(double k) {
  if (!(k > 0.0) || !std::isfinite(k)) throw PreconditionError("wavenumber k must be positive and finite");
  return CorrelationKernel(KernelKind::SqueezedCosine, k, std::nullopt);
}

CorrelationKernel CorrelationKernel::make(KernelKind kind, double k) {
  switch (kind) {
    case KernelKind::ScalarLorentzian: return scalar_lorentzian();
    case KernelKind::UnitVarianceQuartic: return unit_quartic();
    case KernelKind::SqueezedCosine: return squeezed_cosine(k);
  }
  throw PreconditionError("unknown kernel kind");
}

double CorrelationKernel::eval(double t0) const {
  switch (kind_) {
    case KernelKind::ScalarLorentzian: return eval_scalar(t0);
    case KernelKind::UnitVarianceQuartic: return eval_unit_quartic(t0);
    case KernelKind::SqueezedCosine: return eval_squeezed(t0, k_);
  }
  throw PreconditionError("unknown kernel kind");
}

std::vector<double> zero_crossings(const CorrelationKernel& kernel, double lo, double hi) {
  if (!std::isfinite(lo) || !std::isfinite(hi)) throw PreconditionError("search interval must be finite");
  if (lo > hi) throw PreconditionError("search interval must be ordered (lo <= hi)");

  std::vector<double> roots;
  if (lo == hi) {
    if (kernel.eval(lo) == 0.0) roots.push_back(lo);
    return roots;
  }

  const double h = (hi - lo) / static_cast<double>(kScanSubdivisions);
  auto node = [&](std::size_t i) {
    return i == kScanSubdivisions ? hi : lo + h * static_cast<double>(i);
  };

  double x_prev = node(0);
  double f_prev = kernel.eval(x_prev);
  if (f_prev == 0.0) roots.push_back(x_prev);
  for (std::size_t i = 1; i <= kScanSubdivisions; ++i) {
    const double x = node(i);
    const double fx = kernel.eval(x);
    if (fx == 0.0) {
      roots.push_back(x);
    } else if (f_prev != 0.0 && (fx < 0.0) != (f_prev < 0.0)) {
      roots.push_back(bisect(kernel, x_prev, x, f_prev));
    }
    x_prev = x;
    f_prev = fx;
  }
  std::sort(roots.begin(), roots.end());
  return roots;
}

IntegralEstimate integral_to_infinity(const CorrelationKernel& kernel) {
  if (!kernel.integrable())
    throw NonIntegrableKernelError("kernel '" + std::string(to_string(kernel.kind())) +
                                   "' has no convergent integral over [0, inf)");

  // t = u / (1 - u), dt = du / (1 - u)^2. Both integrable kernels decay at
  // least as t^-2, so the mapped integrand stays bounded as u -> 1.
  auto mapped = [&kernel](double u) {
    const double w = 1.0 - u;
    return kernel.eval(u / w) / (w * w);
  };
  quad::Options opts;
  opts.abs_tol = 1e-14;
  opts.max_intervals = 2000;
  const quad::Result r = quad::integrate(mapped, 0.0, 1.0, opts);
  return {r.value, r.abs_error};
}

}  // namespace qfluct
