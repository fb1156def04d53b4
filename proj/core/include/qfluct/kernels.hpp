#pragma once

#include <optional>
#include <string_view>
#include <vector>

namespace qfluct {

// All times are in units of the Lorentzian sampling width (tau = 1).

enum class KernelKind {
  ScalarLorentzian,     ///< Lorentzian-smeared massless scalar vacuum correlator.
  UnitVarianceQuartic,  ///< Unit-variance smeared inverse-quartic correlator (EM-type fields).
  SqueezedCosine,       ///< Single-mode squeezed bath, cos(k t0).
};

std::string_view to_string(KernelKind kind);
/// Accepts "scalar", "em"/"quartic", "squeezed"/"cosine". Throws PreconditionError.
KernelKind parse_kernel_kind(std::string_view name);

/// (4 - t0^2) / (4 pi^2 (t0^2 + 4)^2).
double eval_scalar(double t0);
/// (1 - 6 t0^2 + t0^4) / (1 + t0^2)^4.
double eval_unit_quartic(double t0);
/// cos(k t0); requires k > 0.
double eval_squeezed(double t0, double k);

/// A stationary correlation function C(t0) together with its metadata.
class CorrelationKernel {
 public:
  static CorrelationKernel scalar_lorentzian();
  /// `kappa` is the field-dependent prefactor of the unsmeared correlator.
  /// It is absorbed by the unit-variance rescaling and never used in evaluation.
  static CorrelationKernel unit_quartic(std::optional<double> kappa = std::nullopt);
  static CorrelationKernel squeezed_cosine(double k);
  static CorrelationKernel make(KernelKind kind, double k = 1.0);

  double eval(double t0) const;
  double operator()(double t0) const { return eval(t0); }

  KernelKind kind() const noexcept { return kind_; }
  /// C(0).
  double variance() const noexcept { return variance_; }
  /// Only meaningful for SqueezedCosine.
  double wavenumber() const noexcept { return k_; }
  std::optional<double> kappa_note() const noexcept { return kappa_; }
  /// True when the kernel is absolutely integrable over [0, inf).
  bool integrable() const noexcept { return kind_ != KernelKind::SqueezedCosine; }

 private:
  CorrelationKernel(KernelKind kind, double k, std::optional<double> kappa);

  KernelKind kind_;
  double k_;
  double variance_;
  std::optional<double> kappa_;
};

/// Roots of the kernel in [lo, hi], sorted ascending.
///
/// The interval is scanned on 10^4 uniform subdivisions; every sign change is
/// refined by bisection until the bracket cannot shrink further (well below
/// 1e-12 relative). Exact zeros on scan nodes are reported as-is.
std::vector<double> zero_crossings(const CorrelationKernel& kernel, double lo, double hi);

struct IntegralEstimate {
  double value;
  double abs_error;
};

/// Integral of the kernel over [0, inf) via t0 = u / (1 - u) and adaptive
/// Gauss-Kronrod on [0, 1). Throws NonIntegrableKernelError for SqueezedCosine.
IntegralEstimate integral_to_infinity(const CorrelationKernel& kernel);

}  // namespace qfluct
