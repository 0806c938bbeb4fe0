#include "tfbd/verify.hpp"

#include <cmath>
#include <cstdio>
#include <functional>

#include "tfbd/adm_engine.hpp"
#include "tfbd/birth_model.hpp"
#include "tfbd/death_model.hpp"
#include "tfbd/errors.hpp"
#include "tfbd/mc_oracle.hpp"
#include "tfbd/ode_oracle.hpp"

namespace tfbd {

namespace {

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

Check near(std::string name, double expected, double actual, double tol) {
  return {std::move(name), num(expected), num(actual), tol, std::abs(expected - actual) <= tol};
}

Check exact(std::string name, const BigInt& expected, const BigInt& actual) {
  return {std::move(name), expected.str(), actual.str(), 0.0, expected == actual};
}

// A check whose computation may refuse; the refusal becomes a failed check.
void guarded(std::vector<Check>& out, const std::string& name, const std::function<void()>& body) {
  try {
    body();
  } catch (const Error& e) {
    out.push_back({name, "a value", std::string("refused: ") + e.what(), 0.0, false});
  }
}

void coeffs_suite(std::vector<Check>& out) {
  static const std::vector<std::vector<long>> golden{
      {1},
      {1, 1},
      {2, 3, 1},
      {5, 10, 7, 2},
      {15, 39, 44, 26, 6},
      {54, 181, 293, 268, 126, 24},
      {235, 1002, 2157, 2698, 1932, 744, 120},
      {1237, 6553, 17724, 28230, 27270, 15888, 5160, 720},
      {7790, 49791, 162139, 313908, 382290, 298920, 146400, 41040, 5040},
  };
  const auto table = coeff_table_equal_rates(50);
  for (int k = 0; k <= 8; ++k) {
    for (int n = 0; n <= k; ++n) {
      out.push_back(exact("c[" + std::to_string(n) + "," + std::to_string(k) + "]",
                          BigInt(golden[k][n]), table.exact(n, k)));
    }
  }
  for (int k = 2; k <= 50; ++k) {
    BigInt alt = 0;
    for (int n = 0; n <= k; ++n) alt += ((k - n) % 2 == 0) ? table.exact(n, k) : -table.exact(n, k);
    out.push_back(exact("alternating row sum k=" + std::to_string(k), BigInt(0), alt));
  }
  BigInt fact = 1;
  for (int k = 1; k <= 20; ++k) {
    if (k > 1) fact *= (k - 1);
    out.push_back(exact("diagonal c[k,k]=(k-1)! k=" + std::to_string(k), fact, table.exact(k, k)));
  }
}

void regularity_suite(std::vector<Check>& out, const VerifyOptions& o) {
  const ModelParams params(o.alpha, o.lambda, o.mu, FracOrder(o.nu));
  const AdmSeries series(params, o.order);
  for (double t : o.times) {
    const std::string name = "adm regularity defect t=" + num(t);
    guarded(out, name, [&] {
      const auto p = series.pmf(t, o.n_max);
      out.push_back(near(name, 0.0, p.regularity_defect, 1e-8));
    });
  }
}

void oracles_suite(std::vector<Check>& out, const VerifyOptions& o) {
  const ModelParams unit(1, 1, 1, FracOrder(1.0));
  const AdmSeries series(unit, 60);
  // The series converges to double precision for lambda t <= 0.4 at this order.
  for (double t : {0.1, 0.2, 0.3, 0.4}) {
    OdeConfig cfg;
    cfg.n_max = 100;
    cfg.step = 1e-4;
    cfg.t_end = t;
    const auto ode = integrate_classical(unit, cfg);
    guarded(out, "adm vs ode t=" + num(t), [&] {
      const auto adm = series.pmf(t, 20);
      double worst = 0.0;
      for (int n = 0; n <= 20; ++n) worst = std::max(worst, std::abs(adm.probs[n] - ode.pmf.probs[n]));
      out.push_back(near("adm vs ode max |diff| n<=20 t=" + num(t), 0.0, worst, 1e-6));
    });
  }

  {
    OdeConfig cfg;
    cfg.n_max = 80;
    cfg.step = 1e-3;
    cfg.t_end = 0.5;
    const auto ode = integrate_classical(unit, cfg);
    SimConfig sim{unit, 0.5, o.replicas, o.seed};
    sim.workers = o.workers;
    const auto mc = empirical_pmf(sim);
    for (int n = 0; n <= 8; ++n) {
      const double p = ode.pmf.probs[n];
      const double sigma = std::sqrt(std::max(p * (1 - p), mc.probs[n] * (1 - mc.probs[n])) /
                                     static_cast<double>(o.replicas));
      out.push_back(near("mc vs ode n=" + std::to_string(n) + " (3 sigma)", p, mc.probs[n], 3 * sigma));
    }
  }

  {
    const ModelParams death(1, 0, 1, FracOrder(0.5));
    SimConfig sim{death, 1.0, o.replicas, o.seed + 1};
    sim.workers = o.workers;
    const auto mc = empirical_pmf(sim);
    const double p1 = pmf_death(1.0, DeathParams(1, 1, FracOrder(0.5))).p1;
    const double sigma = std::sqrt(p1 * (1 - p1) / static_cast<double>(o.replicas));
    out.push_back(near("mc vs death closed form nu=0.5 p1 (3 sigma)", p1, mc.probs[1], 3 * sigma));
  }

  {
    OdeConfig cfg;
    cfg.n_max = 5;
    cfg.step = 1e-3;
    cfg.t_end = 1.0;
    const auto ode = integrate_classical(ModelParams(1, 0, 1, FracOrder(1.0)), cfg);
    const auto closed = pmf_death(1.0, DeathParams(1, 1, FracOrder(1.0)));
    out.push_back(near("death closed form vs ode p1", ode.pmf.probs[1], closed.p1, 1e-8));
  }

  {
    const BirthParams birth(0.7, 1.3, FracOrder(1.0));
    OdeConfig cfg;
    cfg.n_max = 120;
    cfg.step = 1e-3;
    cfg.t_end = 1.0;
    const auto ode = integrate_classical(ModelParams(0.7, 1.3, 0.0, FracOrder(1.0)), cfg);
    double worst = 0.0;
    for (int n = 0; n <= 15; ++n) worst = std::max(worst, std::abs(pmf_closed(n, 1.0, birth) - ode.pmf.probs[n]));
    out.push_back(near("birth closed form vs ode max |diff| n<=15", 0.0, worst, 1e-6));
  }
}

void laplace_suite(std::vector<Check>& out) {
  const BirthParams sets[] = {BirthParams(0.7, 1.3, FracOrder(0.6)), BirthParams(2.0, 1.0, FracOrder(0.8))};
  for (const auto& p : sets) {
    const std::string tag = "alpha=" + num(p.alpha) + " lambda=" + num(p.lambda) + " nu=" + num(p.nu.value());
    for (double z : {1.0, 2.0}) {
      for (int n = 0; n <= 4; ++n) {
        const std::string name = "laplace n=" + std::to_string(n) + " z=" + num(z) + " " + tag;
        guarded(out, name, [&] {
          const double q = laplace_quadrature([&](double t) { return pmf_closed(n, t, p); }, z, 40.0, 1e-9);
          out.push_back(near(name, laplace_state(n, z, p), q, 1e-4));
        });
      }
      out.push_back(near("pgf laplace u=1 z=" + num(z) + " " + tag, 1.0 / z, pgf_laplace(1.0, z, p), 1e-6));
    }
  }
  for (double nu : {0.5, 0.8}) {
    const FracOrder f(nu);
    const double q = laplace_quadrature([&](double t) { return mittag_leffler(f, -std::pow(t, nu)); }, 1.0,
                                        60.0, 1e-10);
    out.push_back(near("mittag-leffler laplace identity nu=" + num(nu), 0.5, q, 1e-6));
  }
}

}  // namespace

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"coeffs", "regularity", "oracles", "laplace", "all"};
  return names;
}

std::vector<Check> run_suite(const std::string& suite, const VerifyOptions& options) {
  std::vector<Check> out;
  const bool all = suite == "all";
  if (!all && suite != "coeffs" && suite != "regularity" && suite != "oracles" && suite != "laplace") {
    throw DomainError("unknown verify suite '" + suite + "'");
  }
  if (all || suite == "coeffs") coeffs_suite(out);
  if (all || suite == "regularity") regularity_suite(out, options);
  if (all || suite == "oracles") oracles_suite(out, options);
  if (all || suite == "laplace") laplace_suite(out);
  return out;
}

}  // namespace tfbd
