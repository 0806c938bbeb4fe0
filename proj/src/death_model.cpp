#include "tfbd/death_model.hpp"

#include <cmath>

#include "tfbd/errors.hpp"

namespace tfbd {

DeathParams::DeathParams(double alpha_, double mu_, FracOrder nu_)
    : alpha(alpha_), mu(mu_), nu(nu_) {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) {
    throw ParameterError("death model: alpha must be positive and finite");
  }
  if (!(mu > 0.0) || !std::isfinite(mu)) {
    throw ParameterError("death model: mu must be positive and finite");
  }
}

namespace {

double relaxation(double t, const DeathParams& p) {
  if (!(t >= 0.0) || !std::isfinite(t)) throw DomainError("time must be finite and >= 0");
  if (t == 0.0) return 1.0;
  return mittag_leffler(p.nu, -(p.alpha + p.mu) * std::pow(t, p.nu.value()));
}

}  // namespace

TwoStatePmf pmf_death(double t, const DeathParams& p) {
  const double e = relaxation(t, p);
  const double total = p.alpha + p.mu;
  TwoStatePmf out;
  out.p1 = p.alpha * (1.0 - e) / total;
  // p0 = (alpha E + mu)/(alpha + mu); taking the complement keeps p0 + p1 == 1 to rounding.
  out.p0 = 1.0 - out.p1;
  return out;
}

double caputo_derivative_p0(double t, const DeathParams& p) {
  return -p.alpha * relaxation(t, p);
}

CaputoResidual caputo_residual_death(double t, const DeathParams& p) {
  if (!(t > 0.0)) throw DomainError("caputo_residual_death: t must be positive");
  const auto pmf = pmf_death(t, p);
  const double d0 = caputo_derivative_p0(t, p);
  CaputoResidual r;
  r.state0 = d0 - (-p.alpha * pmf.p0 + p.mu * pmf.p1);
  r.state1 = -d0 - (-p.mu * pmf.p1 + p.alpha * pmf.p0);
  return r;
}

}  // namespace tfbd
