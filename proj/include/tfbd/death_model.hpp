#pragma once

// Time-fractional linear death process with immigration (lambda = 0). The chain
// lives on {0, 1}; its marginal at time t is Bernoulli(p1(t)).

#include "tfbd/special_functions.hpp"

namespace tfbd {

struct DeathParams {
  double alpha;  // > 0
  double mu;     // > 0
  FracOrder nu;

  DeathParams(double alpha, double mu, FracOrder nu);
};

struct TwoStatePmf {
  double p0 = 1.0;
  double p1 = 0.0;
};

struct CaputoResidual {
  double state0 = 0.0;
  double state1 = 0.0;
};

TwoStatePmf pmf_death(double t, const DeathParams& p);

/// Caputo derivative of p0 in closed form: -alpha E_{nu,1}(-(alpha+mu) t^nu).
double caputo_derivative_p0(double t, const DeathParams& p);

/// Residuals of both fractional master equations with the closed-form Caputo derivative.
CaputoResidual caputo_residual_death(double t, const DeathParams& p);

}  // namespace tfbd
