#pragma once

// Classical (nu = 1) reference solutions: fixed-step RK4 on the truncated master
// equation, plus a plain Laplace-transform quadrature.

#include <optional>

#include "tfbd/adm_engine.hpp"
#include "tfbd/model_params.hpp"
#include "tfbd/quadrature.hpp"

namespace tfbd {

inline constexpr double kMaxBoundaryMass = 1e-10;
inline constexpr double kMaxConservationDrift = 1e-9;

struct OdeConfig {
  int n_max = 100;
  /// Unset picks 1e-3 * min(1, 1 / (n_max (lambda + mu) + alpha)).
  std::optional<double> step;
  double t_end = 1.0;
};

struct OdeSolution {
  Pmf pmf;                     // states 0..n_max at t_end
  double boundary_mass = 0.0;  // max over the run of p(n_max, t)
  double lost_mass = 0.0;      // probability that left through n_max
  double step = 0.0;
  long steps = 0;
};

double default_ode_step(const ModelParams& params, int n_max);

/// Throws TruncationError when the boundary state carries more than 1e-10 or the
/// bookkeeping sum drifts from 1 by more than 1e-9.
OdeSolution integrate_classical(const ModelParams& params, const OdeConfig& config);

/// Integral of exp(-z t) f(t) over [0, t_max] to absolute tolerance tol.
double laplace_quadrature(const Integrand& f, double z, double t_max, double tol);

}  // namespace tfbd
