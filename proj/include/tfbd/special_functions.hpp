#pragma once

// Mittag-Leffler function E_{nu,1}, its derivative, Riemann-Liouville integrals
// of power functions, and sign-tracked log-gamma.
//
// Safe range of mittag_leffler / mittag_leffler_deriv:
//   x in [kMittagLefflerMinArg, 0]           any nu in (0, 1]
//   x in (0, kMittagLefflerMaxArg]           while the result fits in a double
//                                            (x^{1/nu} <= ~700; for nu = 0.5 that is x <= 26)
// Outside it an AccuracyLossError is thrown instead of returning a degraded value.

namespace tfbd {

/// Fractional order nu in (0, 1].
class FracOrder {
 public:
  explicit FracOrder(double nu);

  double value() const noexcept { return nu_; }
  /// True when nu is within 1e-12 of 1; such orders are evaluated as the classical case.
  bool is_classical() const noexcept;

  friend bool operator==(const FracOrder&, const FracOrder&) = default;

 private:
  double nu_;
};

inline constexpr double kClassicalOrderTolerance = 1e-12;
inline constexpr double kMittagLefflerMinArg = -1e6;
inline constexpr double kMittagLefflerMaxArg = 50.0;

struct SignedLogGamma {
  double log_abs;  // log|Gamma(x)|
  int sign;        // sign of Gamma(x); 0 at the poles
};

SignedLogGamma log_gamma(double x);

/// 1/Gamma(x), exactly zero at the non-positive integers.
double reciprocal_gamma(double x);

/// E_{nu,1}(x) = sum_k x^k / Gamma(k nu + 1).
double mittag_leffler(FracOrder nu, double x);

/// d/dx E_{nu,1}(x).
double mittag_leffler_deriv(FracOrder nu, double x);

/// Riemann-Liouville integral of order nu applied to t^{delta-1}:
/// Gamma(delta) t^{delta+nu-1} / Gamma(delta+nu).
double frac_integral_power(double nu, double delta, double t);

}  // namespace tfbd
