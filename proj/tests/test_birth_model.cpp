#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <tuple>

#include "support/oracles.hpp"
#include "tfbd/birth_model.hpp"
#include "tfbd/errors.hpp"
#include "tfbd/ode_oracle.hpp"

using namespace tfbd;

namespace {

double series_sum(int n, const BirthParams& p, double t, int order = 60) {
  double s = 0.0;
  for (int k = n; k <= order; ++k) s += series_component_birth(n, k, p, t);
  return s;
}

}  // namespace

TEST_CASE("birth params validation") {
  CHECK_THROWS_AS(BirthParams(0.0, 1.0, FracOrder(0.5)), ParameterError);
  CHECK_THROWS_AS(BirthParams(1.0, -1.0, FracOrder(0.5)), ParameterError);
  CHECK_THROWS_AS(BirthParams(1.0, std::nan(""), FracOrder(0.5)), ParameterError);
}

TEST_CASE("binomial coefficients") {
  CHECK(binomial(10, 3) == 120.0);
  CHECK(binomial(64, 32) == 1832624140942590534.0);
  CHECK(binomial(5, 7) == 0.0);
  CHECK(binomial(100, 50) == doctest::Approx(1.0089134454556419e29).epsilon(1e-12));
}

TEST_CASE("combinatorial identity sum (-1)^r C(n-1, r-1) r^j = 0") {
  for (int n = 2; n <= 15; ++n) {
    for (int j = 0; j < n - 1; ++j) {
      std::int64_t s = 0;
      for (int r = 1; r <= n; ++r) {
        std::int64_t pw = 1;
        for (int i = 0; i < j; ++i) pw *= r;
        s += ((r % 2) ? -1 : 1) * static_cast<std::int64_t>(binomial(n - 1, r - 1)) * pw;
      }
      CHECK(s == 0);
    }
  }
}

TEST_CASE("finite sum identity") {
  for (int big_n = 0; big_n <= 20; ++big_n) {
    for (double a : {0.3, 1.7, 5.0}) {
      double lhs = 0.0;
      for (int i = 0; i <= big_n; ++i) lhs += binomial(big_n, i) * ((i % 2) ? -1.0 : 1.0) / (a + i);
      double rhs = std::tgamma(big_n + 1.0);
      for (int i = 0; i <= big_n; ++i) rhs /= (a + i);
      CHECK(lhs == doctest::Approx(rhs).epsilon(1e-10));
    }
  }
}

TEST_CASE("closed form special values") {
  const BirthParams p(0.7, 1.3, FracOrder(1.0));
  CHECK(pmf_closed(0, 0.8, p) == doctest::Approx(std::exp(-0.56)).epsilon(1e-13));
  CHECK(pmf_closed(3, 0.0, p) == 0.0);
  CHECK(pmf_closed(0, 0.0, p) == 1.0);
  const BirthParams f(0.7, 1.3, FracOrder(0.6));
  CHECK(pmf_closed(0, 0.8, f) == mittag_leffler(FracOrder(0.6), -0.7 * std::pow(0.8, 0.6)));
  CHECK_THROWS_AS(pmf_closed(kMaxClosedFormState + 1, 0.5, p), AccuracyLossError);
  CHECK_THROWS_AS(pmf_closed(-1, 0.5, p), DomainError);
}

TEST_CASE("birth series components") {
  for (double nu : {0.5, 0.8, 1.0}) {
    const BirthParams p(0.7, 1.3, FracOrder(nu));
    const double t = 0.6, a = 0.7, l = 1.3;
    CHECK(series_component_birth(1, 1, p, t) ==
          doctest::Approx(a * std::pow(t, nu) / std::tgamma(nu + 1)).epsilon(1e-13));
    CHECK(series_component_birth(2, 2, p, t) ==
          doctest::Approx(a * l * std::pow(t, 2 * nu) / std::tgamma(2 * nu + 1)).epsilon(1e-13));
    CHECK(series_component_birth(1, 3, p, t) ==
          doctest::Approx(a * (a * a + a * l + l * l) * std::pow(t, 3 * nu) / std::tgamma(3 * nu + 1))
              .epsilon(1e-12));
    CHECK(series_component_birth(4, 2, p, t) == 0.0);
    CHECK(series_component_birth(0, 3, p, t) ==
          doctest::Approx(std::pow(-a * std::pow(t, nu), 3) / std::tgamma(3 * nu + 1)).epsilon(1e-13));
  }
  // Resonance 2 lambda = alpha: the limit alpha k (r lambda)^{k-1} replaces the quotient.
  const BirthParams res(2.0, 1.0, FracOrder(1.0));
  const BirthParams near(2.0, 1.0 + 1e-6, FracOrder(1.0));
  for (int k = 2; k <= 8; ++k) {
    CHECK(series_component_birth(2, k, res, 0.5) ==
          doctest::Approx(series_component_birth(2, k, near, 0.5)).epsilon(1e-5));
  }
}

TEST_CASE("closed form equals the series where the series converges") {
  for (double nu : {0.5, 0.8, 1.0}) {
    for (double ratio : {1.0, 2.0, 3.0, 0.7}) {
      const double lambda = 1.0;
      const BirthParams p(ratio * lambda, lambda, FracOrder(nu));
      for (double x : {0.05, 0.2, 0.4}) {  // x = lambda t^nu
        const double t = std::pow(x / lambda, 1.0 / nu);
        for (int n = 0; n <= 6; ++n) {
          INFO("nu = " << nu << " alpha/lambda = " << ratio << " x = " << x << " n = " << n);
          CHECK(std::abs(pmf_closed(n, t, p) - series_sum(n, p, t)) < 1e-8);
        }
      }
    }
  }
}

TEST_CASE("resonant branch is continuous") {
  for (double nu : {0.6, 1.0}) {
    const BirthParams res(1.0, 1.0, FracOrder(nu));
    const BirthParams off(1.0, 1.0 + 1e-5, FracOrder(nu));
    for (int n = 1; n <= 5; ++n) {
      CHECK(pmf_closed(n, 0.7, res) == doctest::Approx(pmf_closed(n, 0.7, off)).epsilon(1e-4));
    }
  }
}

TEST_CASE("classical reduction matches the ODE oracle") {
  const ModelParams m(0.7, 1.3, 0.0, FracOrder(1.0));
  const BirthParams p(0.7, 1.3, FracOrder(1.0));
  for (double t : {0.3, 1.0}) {
    OdeConfig cfg;
    cfg.n_max = 120;
    cfg.t_end = t;
    cfg.step = 1e-3;
    const auto ode = integrate_classical(m, cfg);
    for (int n = 0; n <= 30; ++n) CHECK(std::abs(pmf_closed(n, t, p) - ode.pmf.probs[n]) < 1e-6);
  }
}

TEST_CASE("regularity in the feasible range") {
  for (double nu : {0.8, 1.0}) {
    const BirthParams p(1.0, 1.0, FracOrder(nu));
    for (double x : {0.25, 0.5}) {
      const double t = std::pow(x, 1.0 / nu);
      double total = 0.0;
      for (int n = 0; n <= 40; ++n) total += pmf_closed(n, t, p);
      INFO("nu = " << nu << " x = " << x);
      CHECK(std::abs(total - 1.0) < 1e-6);
    }
  }
}

TEST_CASE("extinction state decays monotonically") {
  for (double nu : {0.3, 0.7, 1.0}) {
    const BirthParams p(1.5, 1.0, FracOrder(nu));
    double prev = 1.0;
    for (double t = 0.0; t < 20.0; t += 0.37) {
      const double v = pmf_closed(0, t, p);
      CHECK(v <= prev);
      prev = v;
    }
  }
}

TEST_CASE("birth laplace transforms") {
  CHECK(laplace_state(0, 1.0, BirthParams(1.0, 1.0, FracOrder(1.0))) == doctest::Approx(0.5));
  const BirthParams p(0.7, 1.3, FracOrder(0.6));
  const double z = 1.5, zn = std::pow(z, 0.6);
  const double expect1 = 0.7 / (1.3 - 0.7) * (std::pow(z, -0.4) / (zn + 0.7) - std::pow(z, -0.4) / (zn + 1.3));
  CHECK(laplace_state(1, z, p) == doctest::Approx(expect1).epsilon(1e-13));
  for (int n = 0; n <= 4; ++n) {
    const auto f = [&](double t) { return pmf_closed(n, t, p); };
    // pmf values are bounded by 1, so the tail beyond T is below e^{-zT}/z.
    const double q = laplace_quadrature(f, z, 30.0, 1e-8);
    CHECK(std::abs(q - laplace_state(n, z, p)) < 1e-4);
  }
  // Resonant n with alpha = 2 lambda.
  const BirthParams res(2.0, 1.0, FracOrder(0.7));
  for (int n = 2; n <= 4; ++n) {
    const auto f = [&](double t) { return pmf_closed(n, t, res); };
    CHECK(std::abs(laplace_quadrature(f, 1.0, 40.0, 1e-8) - laplace_state(n, 1.0, res)) < 1e-4);
  }
  CHECK_THROWS_AS(laplace_state(1, 0.0, p), DomainError);
}

// First and second moments of the classical chain from its moment equations
//   m' = alpha p0 + lambda m,   s' = alpha p0 + lambda m + 2 lambda s,   p0 = exp(-alpha l).
struct ClassicalMoments {
  double alpha, lambda;
  double mean(double l) const {
    return alpha / (alpha + lambda) * (std::exp(lambda * l) - std::exp(-alpha * l));
  }
  double second(double l) const {
    const double a = alpha, b = lambda;
    const double e2 = std::exp(2 * b * l), ea = std::exp(-a * l), eb = std::exp(b * l);
    return a * (e2 - ea) / (2 * b + a) + b * a / (a + b) * ((e2 - eb) / b - (e2 - ea) / (2 * b + a));
  }
};

TEST_CASE("birth moments") {
  const BirthParams p(1.0, 1.0, FracOrder(1.0));
  CHECK(mean_birth(0.0, p) == 0.0);
  CHECK(variance_birth(0.0, p) == 0.0);
  CHECK(std::abs(mean_birth(1.0, p) - std::sinh(1.0)) < 1e-12);

  // Classical case against the ODE oracle.
  OdeConfig cfg;
  cfg.n_max = 80;
  cfg.t_end = 0.5;
  cfg.step = 1e-3;
  const auto ode = integrate_classical(ModelParams(1.0, 1.0, 0.0, FracOrder(1.0)), cfg);
  double m = 0.0, m2 = 0.0;
  for (std::size_t n = 0; n < ode.pmf.probs.size(); ++n) {
    m += n * ode.pmf.probs[n];
    m2 += n * (n * ode.pmf.probs[n]);
  }
  CHECK(std::abs(mean_birth(0.5, p) - m) < 1e-9);
  CHECK(std::abs(variance_birth(0.5, p) - (m2 - m * m)) < 1e-9);
  const ClassicalMoments cm{1.0, 1.0};
  CHECK(cm.mean(0.5) == doctest::Approx(m).epsilon(1e-10));
  CHECK(cm.second(0.5) == doctest::Approx(m2).epsilon(1e-10));

  // Fractional orders: average the classical moments over the random clock.
  for (const auto& [a, l, nu, t] : {std::tuple{2.0, 1.0, 0.8, 0.5}, std::tuple{1.0, 2.0, 0.5, 0.4}}) {
    const BirthParams q(a, l, FracOrder(nu));
    const ClassicalMoments c{a, l};
    const double mean = testing::subordinated_expectation(nu, t, [&](double x) { return c.mean(x); });
    const double second = testing::subordinated_expectation(nu, t, [&](double x) { return c.second(x); });
    INFO("alpha = " << a << " lambda = " << l << " nu = " << nu);
    CHECK(mean_birth(t, q) == doctest::Approx(mean).epsilon(1e-8));
    CHECK(variance_birth(t, q) == doctest::Approx(second - mean * mean).epsilon(1e-8));
  }

  const BirthParams q(2.0, 1.0, FracOrder(0.8));
  double prev = 0.0;
  for (double s = 0.0; s < 3.0; s += 0.2) {
    const double mm = mean_birth(s, q);
    CHECK(mm >= prev);
    CHECK(variance_birth(s, q) >= -1e-10);
    prev = mm;
  }
}

TEST_CASE("small immigration approximation") {
  const BirthParams c(0.01, 1.0, FracOrder(1.0));
  CHECK(small_alpha_pmf(0, 0.5, c) == doctest::Approx(1.0 - 0.005).epsilon(1e-14));
  for (int n = 1; n <= 5; ++n) {
    CHECK(small_alpha_pmf(n, 0.5, c) ==
          doctest::Approx(0.01 * std::pow(1 - std::exp(-0.5), n) / n).epsilon(1e-10));
  }
  const double a = 1e-4;
  const BirthParams f(a, 1.0, FracOrder(0.7));
  CHECK(std::abs(small_alpha_pmf(2, 1.0, f) - pmf_closed(2, 1.0, f)) <= 10 * a * a);
}

TEST_CASE("waiting time") {
  const BirthParams p(0.8, 1.0, FracOrder(0.65));
  CHECK(waiting_time_survival(0.0, p) == 1.0);
  for (double s : {0.1, 1.0, 7.0}) CHECK(waiting_time_survival(s, p) == pmf_closed(0, s, p));
  const BirthParams c(0.8, 1.0, FracOrder(1.0));
  CHECK(waiting_time_survival(2.0, c) == doctest::Approx(std::exp(-1.6)).epsilon(1e-14));
}

TEST_CASE("pgf laplace transform") {
  for (double nu : {0.6, 1.0}) {
    const BirthParams p(1.0, 1.0, FracOrder(nu));
    for (double z : {0.5, 1.0, 2.0}) CHECK(std::abs(pgf_laplace(1.0, z, p) - 1.0 / z) < 1e-6);
    CHECK(pgf_laplace(0.0, 1.3, p) == doctest::Approx(laplace_state(0, 1.3, p)).epsilon(1e-12));
  }
  const BirthParams p(1.0, 1.0, FracOrder(0.8));
  double series = 0.0;
  for (int n = 0; n <= 80; ++n) series += std::pow(0.5, n) * laplace_state(n, 1.0, p);
  CHECK(std::abs(pgf_laplace(0.5, 1.0, p) - series) < 1e-6);
  CHECK_THROWS_AS(pgf_laplace(1.2, 1.0, p), DomainError);
}
