#include "tfbd/ode_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "tfbd/errors.hpp"

namespace tfbd {

namespace {

// dp/dt for the truncated chain. Outflow from n_max upward is dropped; its rate
// is returned through `leak` so the lost mass can be tracked.
void generator(const ModelParams& m, const std::vector<double>& p, std::vector<double>& dp,
               double& leak) {
  const int n_max = static_cast<int>(p.size()) - 1;
  for (int n = 0; n <= n_max; ++n) {
    double v = -(m.birth_rate(n) + m.death_rate(n)) * p[n];
    if (n > 0) v += m.birth_rate(n - 1) * p[n - 1];
    if (n < n_max) v += m.death_rate(n + 1) * p[n + 1];
    dp[n] = v;
  }
  leak = m.birth_rate(n_max) * p[n_max];
}

}  // namespace

double default_ode_step(const ModelParams& params, int n_max) {
  const double scale = static_cast<double>(n_max) * (params.lambda() + params.mu()) + params.alpha();
  return 1e-3 * std::min(1.0, scale > 0.0 ? 1.0 / scale : 1.0);
}

OdeSolution integrate_classical(const ModelParams& params, const OdeConfig& config) {
  if (!params.nu().is_classical()) {
    throw DomainError("integrate_classical: requires nu = 1");
  }
  if (config.n_max < 2) throw DomainError("integrate_classical: n_max must be >= 2");
  if (!(config.t_end >= 0.0) || !std::isfinite(config.t_end)) {
    throw DomainError("integrate_classical: t_end must be finite and >= 0");
  }
  const double h_req = config.step.value_or(default_ode_step(params, config.n_max));
  if (!(h_req > 0.0)) throw DomainError("integrate_classical: step must be > 0");

  const auto size = static_cast<std::size_t>(config.n_max) + 1;
  std::vector<double> p(size, 0.0), k1(size), k2(size), k3(size), k4(size), tmp(size);
  p[0] = 1.0;

  OdeSolution out;
  const long steps = config.t_end == 0.0 ? 0 : static_cast<long>(std::ceil(config.t_end / h_req - 1e-9));
  const double h = steps == 0 ? 0.0 : config.t_end / static_cast<double>(steps);
  out.step = h;
  out.steps = steps;

  double lost = 0.0;
  for (long s = 0; s < steps; ++s) {
    double l1, l2, l3, l4;
    generator(params, p, k1, l1);
    for (std::size_t i = 0; i < size; ++i) tmp[i] = p[i] + 0.5 * h * k1[i];
    generator(params, tmp, k2, l2);
    for (std::size_t i = 0; i < size; ++i) tmp[i] = p[i] + 0.5 * h * k2[i];
    generator(params, tmp, k3, l3);
    for (std::size_t i = 0; i < size; ++i) tmp[i] = p[i] + h * k3[i];
    generator(params, tmp, k4, l4);
    for (std::size_t i = 0; i < size; ++i) {
      p[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }
    lost += h / 6.0 * (l1 + 2.0 * l2 + 2.0 * l3 + l4);
    out.boundary_mass = std::max(out.boundary_mass, std::abs(p[size - 1]));
  }

  double total = 0.0;
  for (double v : p) total += v;
  const double drift = std::abs(total + lost - 1.0);

  if (out.boundary_mass > kMaxBoundaryMass) {
    throw TruncationError("integrate_classical: boundary state mass " +
                          std::to_string(out.boundary_mass) + " exceeds 1e-10; raise n_max");
  }
  if (drift > kMaxConservationDrift) {
    throw TruncationError("integrate_classical: conservation drift " + std::to_string(drift) +
                          " exceeds 1e-9; reduce the step");
  }

  out.lost_mass = lost;
  out.pmf.time = config.t_end;
  out.pmf.probs = std::move(p);
  out.pmf.regularity_defect = std::abs(total - 1.0);
  out.pmf.per_state_error.assign(size, out.boundary_mass + drift);
  return out;
}

double laplace_quadrature(const Integrand& f, double z, double t_max, double tol) {
  if (!(z > 0.0)) throw DomainError("laplace_quadrature: z must be > 0");
  if (!(t_max > 0.0) || !std::isfinite(t_max)) {
    throw DomainError("laplace_quadrature: t_max must be finite and > 0");
  }
  if (!(tol > 0.0)) throw DomainError("laplace_quadrature: tol must be > 0");
  const auto integrand = [&](double t) { return std::exp(-z * t) * f(t); };
  // Split early: fractional integrands are steep near zero.
  std::vector<double> breaks{0.0};
  for (double b = 1e-6; b < t_max; b *= 10.0) breaks.push_back(b);
  breaks.push_back(t_max);
  return integrate_piecewise(integrand, breaks, tol, 0.0).value;
}

}  // namespace tfbd
