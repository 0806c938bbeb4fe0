#include <doctest.h>

#include <boost/math/distributions/chi_squared.hpp>

#include <algorithm>
#include <cmath>
#include <vector>

#include "support/oracles.hpp"
#include "tfbd/death_model.hpp"
#include "tfbd/errors.hpp"
#include "tfbd/mc_oracle.hpp"
#include "tfbd/ode_oracle.hpp"

using namespace tfbd;

namespace {

struct MeanStat {
  double mean, sigma;
};

template <class F>
MeanStat sample_mean(int count, F draw) {
  double s = 0.0, s2 = 0.0;
  for (int i = 0; i < count; ++i) {
    const double v = draw(i);
    s += v;
    s2 += v * v;
  }
  const double m = s / count;
  return {m, std::sqrt((s2 / count - m * m) / count)};
}

std::vector<double> inverse_subordinator_samples(double nu, double t, int count, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<double> out(count);
  for (auto& v : out) {
    const double u1 = open_uniform(rng), u2 = open_uniform(rng);
    v = sample_inverse_subordinator(FracOrder(nu), t, {u1, u2});
  }
  return out;
}

double ks_statistic(std::vector<double> a, std::vector<double> b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    const double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= x) ++i;
    while (j < b.size() && b[j] <= x) ++j;
    d = std::max(d, std::abs(double(i) / a.size() - double(j) / b.size()));
  }
  return d;
}

SimConfig config(const ModelParams& p, double t, std::int64_t replicas, std::uint64_t seed) {
  SimConfig c{p, t, replicas, seed};
  return c;
}

}  // namespace

TEST_CASE("stable sampler") {
  CHECK_THROWS_AS(sample_stable(FracOrder(1.0), {0.3, 0.4}), DomainError);
  CHECK_THROWS_AS(sample_stable(FracOrder(0.5), {0.0, 0.4}), DomainError);
  CHECK(sample_stable(FracOrder(0.5), {1e-12, 1.0 - 1e-12}) > 0.0);
  Rng rng(20261016);
  std::vector<double> s(1'000'000);
  int nonpositive = 0;
  for (auto& v : s) {
    const double u1 = open_uniform(rng), u2 = open_uniform(rng);
    v = sample_stable(FracOrder(0.5), {u1, u2});
    nonpositive += !(v > 0.0);
  }
  CHECK(nonpositive == 0);
  for (double z : {1.0, 4.0}) {
    const auto st = sample_mean(int(s.size()), [&](int i) { return std::exp(-z * s[i]); });
    CHECK(std::abs(st.mean - std::exp(-std::sqrt(z))) < 3 * st.sigma);
  }
}

TEST_CASE("inverse subordinator") {
  CHECK(sample_inverse_subordinator(FracOrder(0.6), 0.0, {0.3, 0.4}) == 0.0);
  CHECK(sample_inverse_subordinator(FracOrder(1.0), 0.7, {0.3, 0.4}) == 0.7);
  const auto l = inverse_subordinator_samples(0.6, 1.0, 1'000'000, 7);
  for (double w : {0.5, 1.0, 2.0}) {
    const auto st = sample_mean(int(l.size()), [&](int i) { return std::exp(-w * l[i]); });
    CHECK(std::abs(st.mean - mittag_leffler(FracOrder(0.6), -w)) < 3 * st.sigma);
  }
}

TEST_CASE("inverse subordinator self-similarity") {
  for (double nu : {0.5, 0.8}) {
    for (double c : {2.0, 4.0}) {
      const auto scaled_time = inverse_subordinator_samples(nu, c, 100'000, 11);
      auto scaled_value = inverse_subordinator_samples(nu, 1.0, 100'000, 12);
      for (auto& v : scaled_value) v *= std::pow(c, nu);
      const double d = ks_statistic(scaled_time, scaled_value);
      CHECK(testing::ks_p_value(d, 100'000 / 2.0) > 1e-3);
    }
  }
}

TEST_CASE("gillespie walk") {
  Rng rng(3);
  CHECK(simulate_lbdpwi(ModelParams(1, 1, 1, FracOrder(1.0)), 0.0, rng) == 0);
  CHECK_THROWS_AS(simulate_lbdpwi(ModelParams(1, 1, 1, FracOrder(1.0)), -1.0, rng), DomainError);
  CHECK_THROWS_AS(simulate_lbdpwi(ModelParams(1, 50, 0, FracOrder(1.0)), 10.0, rng), RunawayError);

  const auto death = empirical_pmf(config(ModelParams(1, 0, 1, FracOrder(1.0)), 0.5, 100'000, 5));
  CHECK(std::abs(death.probs[1] - (1 - std::exp(-1.0)) / 2) < 3 * death.std_errors[1]);

  const ModelParams unit(1, 1, 1, FracOrder(1.0));
  const auto mc = empirical_pmf(config(unit, 0.5, 100'000, 6));
  OdeConfig oc;
  oc.n_max = 80;
  oc.t_end = 0.5;
  oc.step = 1e-3;
  const auto ode = integrate_classical(unit, oc);
  for (int n = 0; n <= 8; ++n) {
    const double sigma = std::sqrt(ode.pmf.probs[n] * (1 - ode.pmf.probs[n]) / 100'000);
    CHECK(std::abs(mc.probs[n] - ode.pmf.probs[n]) < 3 * std::max(sigma, mc.std_errors[n]) + 1e-12);
  }
}

TEST_CASE("empirical pmf bookkeeping and determinism") {
  const ModelParams p(1, 1.2, 0.8, FracOrder(0.7));
  SimConfig c = config(p, 2.0, 20'000, 99);
  c.state_cap = 6;
  const auto one = empirical_pmf(c);
  c.workers = 3;
  const auto three = empirical_pmf(c);
  CHECK(one.probs == three.probs);
  CHECK(one.overflow_mass == three.overflow_mass);
  double total = one.overflow_mass;
  for (double v : one.probs) total += v;
  CHECK(std::abs(total - 1.0) < 1e-12);
  CHECK(one.overflow_mass > 0.0);
  for (std::size_t n = 0; n < one.probs.size(); ++n) {
    CHECK(one.std_errors[n] == doctest::Approx(std::sqrt(one.probs[n] * (1 - one.probs[n]) / 20'000)));
  }

  const auto single = empirical_pmf(config(p, 1.0, 1, 42));
  int hot = 0;
  for (double v : single.probs) hot += (v == 1.0);
  CHECK(hot + (single.overflow_mass == 1.0) == 1);

  c.master_seed = 100;
  CHECK(empirical_pmf(c).probs != one.probs);
  CHECK_THROWS_AS(empirical_pmf(config(p, 1.0, 0, 1)), DomainError);
}

TEST_CASE("fractional death chain") {
  const auto mc = empirical_pmf(config(ModelParams(1, 0, 1, FracOrder(0.5)), 1.0, 100'000, 8));
  const double p1 = pmf_death(1.0, DeathParams(1, 1, FracOrder(0.5))).p1;
  CHECK(std::abs(mc.probs[1] - p1) < 3 * mc.std_errors[1]);
  // Bernoulli marginal: mean p1, variance p1 (1 - p1).
  const double mean = mc.probs[1];
  CHECK(mc.probs[0] + mc.probs[1] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(std::abs(mean * (1 - mean) - p1 * (1 - p1)) < 3 * mc.std_errors[1]);
}

TEST_CASE("fractional pmf against the spectral oracle") {
  const ModelParams p(1, 1, 1, FracOrder(0.7));
  const auto mc = empirical_pmf(config(p, 0.5, 100'000, 20261016));
  const auto ref = testing::spectral_pmf(p, 0.5, 80);
  for (int n = 0; n <= 8; ++n) {
    const double sigma = std::sqrt(std::max(ref[n] * (1 - ref[n]), mc.probs[n] * (1 - mc.probs[n])) / 100'000);
    INFO("n = " << n << " mc = " << mc.probs[n] << " ref = " << ref[n]);
    CHECK(std::abs(mc.probs[n] - ref[n]) < 3 * sigma + 1e-12);
  }
}

TEST_CASE("classical composed sampler equals the plain walk") {
  const ModelParams p(1, 1, 1, FracOrder(1.0));
  const std::int64_t r = 50'000;
  const auto composed = empirical_pmf(config(p, 0.8, r, 31));
  std::vector<double> plain(composed.probs.size() + 1, 0.0);
  Rng rng(77);
  for (std::int64_t i = 0; i < r; ++i) {
    const auto x = simulate_lbdpwi(p, 0.8, rng);
    plain[std::min<std::size_t>(x, plain.size() - 1)] += 1.0;
  }
  // Two-sample chi-square on states pooled until each bin holds >= 10 counts.
  double stat = 0.0, a = 0.0, b = 0.0;
  int bins = 0;
  for (std::size_t n = 0; n < plain.size(); ++n) {
    a += (n < composed.probs.size() ? composed.probs[n] : composed.overflow_mass) * r;
    b += plain[n];
    if ((a >= 10 && b >= 10) || n + 1 == plain.size()) {
      stat += (a - b) * (a - b) / (a + b);
      a = b = 0.0;
      ++bins;
    }
  }
  const boost::math::chi_squared dist(bins - 1);
  CHECK(boost::math::cdf(boost::math::complement(dist, stat)) > 1e-3);
}
