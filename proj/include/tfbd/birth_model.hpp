#pragma once

// Time-fractional linear birth process with immigration (mu = 0): closed forms in
// Mittag-Leffler functions, series components, Laplace transforms and moments.

#include <cstdint>

#include "tfbd/special_functions.hpp"

namespace tfbd {

struct BirthParams {
  double alpha;  // immigration rate at state 0, > 0
  double lambda; // per-capita birth rate, > 0
  FracOrder nu;

  BirthParams(double alpha, double lambda, FracOrder nu);
};

/// pmf_closed refuses states above this: the alternating binomial sum is meaningless
/// in double precision there.
inline constexpr int kMaxClosedFormState = 100;
/// |k lambda - alpha| <= kResonanceTolerance * max(k lambda, alpha) selects the limit formula.
inline constexpr double kResonanceTolerance = 1e-8;

struct ClosedFormValue {
  double value = 0.0;
  double error_estimate = 0.0;  // rounding/cancellation bound of the alternating sum
};

/// C(n, k) as a double; exact integer arithmetic for n <= 64, log-gamma beyond.
double binomial(int n, int k);

ClosedFormValue pmf_closed_with_error(int n, double t, const BirthParams& p);
double pmf_closed(int n, double t, const BirthParams& p);
double series_component_birth(int n, int k, const BirthParams& p, double t);
double laplace_state(int n, double z, const BirthParams& p);
double mean_birth(double t, const BirthParams& p);
double second_factorial_moment_birth(double t, const BirthParams& p);
double variance_birth(double t, const BirthParams& p);
/// First order in alpha; the o(alpha) remainder is the caller's concern.
double small_alpha_pmf(int n, double t, const BirthParams& p);
/// Pr{T > s} for the sojourn T in state 0.
double waiting_time_survival(double s, const BirthParams& p);
/// Laplace transform in t of the probability generating function, at (u, z).
double pgf_laplace(double u, double z, const BirthParams& p);

}  // namespace tfbd
