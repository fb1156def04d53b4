#pragma once

// Test-only reference computations. Nothing here calls into the library code
// path being checked.

#include <cmath>
#include <cstddef>
#include <functional>
#include <numbers>

namespace oracle {

inline constexpr double kPi = std::numbers::pi;

/// Antiderivative of (4 - t^2) / (t^2 + 4)^2 is t / (t^2 + 4).
inline double scalar_antiderivative(double t) { return t / (4.0 * kPi * kPi * (t * t + 4.0)); }

/// Antiderivative of (1 - 6t^2 + t^4) / (1 + t^2)^4 (symbolic integration).
inline double quartic_antiderivative(double t) {
  const double d = 1.0 + t * t;
  return t * (3.0 - t * t) / (3.0 * d * d * d);
}

/// Composite Simpson with n (even) panels.
inline double simpson(const std::function<double(double)>& f, double a, double b, std::size_t n) {
  if (n % 2) ++n;
  const double h = (b - a) / static_cast<double>(n);
  double s = f(a) + f(b);
  for (std::size_t i = 1; i < n; ++i) s += f(a + h * static_cast<double>(i)) * (i % 2 ? 4.0 : 2.0);
  return s * h / 3.0;
}

inline double central_difference(const std::function<double(double)>& f, double x, double h) {
  return (f(x + h) - f(x - h)) / (2.0 * h);
}

/// Solve f / (1 - f^2) = c for f in (-1, 1) by bisection.
inline double chain_inverse_bisection(double c, double sigma2) {
  double lo = -1.0 + 1e-15, hi = 1.0 - 1e-15;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    const double v = mid * sigma2 / (1.0 - mid * mid);
    if (v < c) lo = mid; else hi = mid;
  }
  return 0.5 * (lo + hi);
}

/// Var(x_1 + ... + x_N) by summing the full N x N covariance matrix of a
/// stationary order-1 autoregression with marginal variance var_x.
inline double ar1_sum_variance_bruteforce(double f, double var_x, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      s += var_x * std::pow(f, static_cast<double>(i > j ? i - j : j - i));
  return s;
}

/// Same for independent pairs (x1, x2 = f x1 + e), var(x1) = s2, var(e) = s2.
inline double pair_sum_variance_bruteforce(double f, double s2, std::size_t n) {
  auto cov = [&](std::size_t i, std::size_t j) {
    if (i / 2 != j / 2) return 0.0;
    if (i == j) return i % 2 == 0 ? s2 : s2 * (1.0 + f * f);
    return f * s2;
  };
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) s += cov(i, j);
  return s;
}

}  // namespace oracle
