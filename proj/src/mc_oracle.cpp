#include "tfbd/mc_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <thread>

#include "tfbd/errors.hpp"

namespace tfbd {

namespace {

constexpr std::uint64_t kSubordinatorStream = 0;
constexpr std::uint64_t kWalkStream = 1;

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

void check_uniforms(const UniformPair& u) {
  if (!(u.first > 0.0 && u.first < 1.0 && u.second > 0.0 && u.second < 1.0)) {
    throw DomainError("stable sampler needs uniforms in the open interval (0, 1)");
  }
}

}  // namespace

Rng substream(std::uint64_t master_seed, std::uint64_t replica, std::uint64_t stream) {
  const std::uint64_t key = splitmix64(splitmix64(master_seed) ^ splitmix64(replica * 2 + stream));
  std::seed_seq seq{static_cast<std::uint32_t>(key), static_cast<std::uint32_t>(key >> 32),
                    static_cast<std::uint32_t>(replica), static_cast<std::uint32_t>(stream)};
  return Rng(seq);
}

double open_uniform(Rng& rng) {
  std::uniform_real_distribution<double> dist(0.0, 1.0);
  double u = 0.0;
  do {
    u = dist(rng);
  } while (u <= 0.0);
  return u;
}

double sample_stable(FracOrder nu, UniformPair uniforms) {
  if (nu.is_classical()) {
    throw DomainError("sample_stable: nu = 1 is degenerate; use the identity time change");
  }
  check_uniforms(uniforms);
  const double a = nu.value();
  const double angle = std::numbers::pi * uniforms.first;
  const double w = -std::log(uniforms.second);
  // Kanter's form: S = (A(angle)/W)^{(1-a)/a},
  // A(x) = (sin(a x)/sin x)^{1/(1-a)} * sin((1-a) x)/sin(a x).
  const double ratio = std::sin(a * angle) / std::sin(angle);
  const double log_a_fn = std::log(ratio) / (1.0 - a) + std::log(std::sin((1.0 - a) * angle)) -
                          std::log(std::sin(a * angle));
  return std::exp((1.0 - a) / a * (log_a_fn - std::log(w)));
}

double sample_inverse_subordinator(FracOrder nu, double t, UniformPair uniforms) {
  if (!(t >= 0.0)) throw DomainError("inverse subordinator: t must be >= 0");
  if (nu.is_classical()) return t;
  if (t == 0.0) return 0.0;
  const double s = sample_stable(nu, uniforms);
  return std::pow(t / s, nu.value());
}

std::int64_t simulate_lbdpwi(const ModelParams& params, double horizon, Rng& rng) {
  if (!(horizon >= 0.0)) throw DomainError("simulate_lbdpwi: horizon must be >= 0");
  std::int64_t n = 0;
  double clock = 0.0;
  for (;;) {
    const double up = (n == 0) ? params.alpha() : static_cast<double>(n) * params.lambda();
    const double down = static_cast<double>(n) * params.mu();
    const double total = up + down;
    if (total <= 0.0) return n;
    clock += -std::log(open_uniform(rng)) / total;
    if (clock > horizon) return n;
    n += (open_uniform(rng) * total < up) ? 1 : -1;
    if (n > kRunawayState) {
      throw RunawayError("simulate_lbdpwi: population exceeded " +
                         std::to_string(kRunawayState) + " (supercritical blow-up)");
    }
  }
}

EmpiricalPmf empirical_pmf(const SimConfig& config) {
  if (config.replicas < 1) throw DomainError("empirical_pmf: replicas must be >= 1");
  if (config.state_cap < 1) throw DomainError("empirical_pmf: state_cap must be >= 1");
  if (!(config.horizon >= 0.0)) throw DomainError("empirical_pmf: horizon must be >= 0");

  const std::size_t bins = static_cast<std::size_t>(config.state_cap) + 2;  // last = overflow
  unsigned workers = config.workers == 0 ? std::max(1u, std::thread::hardware_concurrency())
                                         : config.workers;
  workers = static_cast<unsigned>(
      std::min<std::int64_t>(workers, config.replicas));

  std::vector<std::vector<std::int64_t>> counts(workers, std::vector<std::int64_t>(bins, 0));
  std::vector<std::exception_ptr> failures(workers);
  const FracOrder nu = config.params.nu();

  auto run = [&](unsigned w) {
    try {
      auto& local = counts[w];
      for (std::int64_t i = w; i < config.replicas; i += workers) {
        const auto replica = static_cast<std::uint64_t>(i);
        double clock = config.horizon;
        if (!nu.is_classical()) {
          Rng sub = substream(config.master_seed, replica, kSubordinatorStream);
          const double u1 = open_uniform(sub);
          const double u2 = open_uniform(sub);
          clock = sample_inverse_subordinator(nu, config.horizon, {u1, u2});
        }
        Rng walk = substream(config.master_seed, replica, kWalkStream);
        const std::int64_t x = simulate_lbdpwi(config.params, clock, walk);
        const std::size_t bin =
            x > config.state_cap ? bins - 1 : static_cast<std::size_t>(x);
        ++local[bin];
      }
    } catch (...) {
      failures[w] = std::current_exception();
    }
  };

  if (workers == 1) {
    run(0);
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(run, w);
  }
  for (auto& f : failures) {
    if (f) std::rethrow_exception(f);
  }

  std::vector<std::int64_t> total(bins, 0);
  for (const auto& local : counts) {
    for (std::size_t b = 0; b < bins; ++b) total[b] += local[b];
  }

  EmpiricalPmf out;
  out.replicas = config.replicas;
  const double r = static_cast<double>(config.replicas);
  out.probs.resize(bins - 1);
  out.std_errors.resize(bins - 1);
  for (std::size_t b = 0; b + 1 < bins; ++b) {
    const double p = static_cast<double>(total[b]) / r;
    out.probs[b] = p;
    out.std_errors[b] = std::sqrt(p * (1.0 - p) / r);
  }
  out.overflow_mass = static_cast<double>(total[bins - 1]) / r;
  return out;
}

}  // namespace tfbd
