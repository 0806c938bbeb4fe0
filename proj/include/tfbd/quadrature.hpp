#pragma once

#include <functional>
#include <span>

namespace tfbd {

struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;
};

using Integrand = std::function<double(double)>;

/// Adaptive 31-point Gauss-Kronrod (GSL qag) on a finite interval. Throws
/// QuadratureError when the error estimate exceeds max(abs_tol, rel_tol * |value|).
QuadratureResult integrate(const Integrand& f, double a, double b, double abs_tol,
                           double rel_tol = 0.0);

/// Same contract, but with GSL qags extrapolation so integrable endpoint
/// singularities (t^{nu-1}, (1-w)^{-s}) converge.
QuadratureResult integrate_endpoint_singular(const Integrand& f, double a, double b,
                                             double abs_tol, double rel_tol = 0.0);

/// Sums adaptive Gauss-Kronrod over consecutive breakpoints (must be sorted).
QuadratureResult integrate_piecewise(const Integrand& f, std::span<const double> breakpoints,
                                     double abs_tol, double rel_tol = 0.0);

}  // namespace tfbd
