#pragma once

// Monte Carlo oracle: N(L_nu(t)) with N the classical chain simulated by the
// Gillespie method and L_nu(t) drawn through the marginal identity
// L_nu(t) = (t / S)^nu, S a standard positive nu-stable variate.
//
// Every replica owns two substreams keyed by (master_seed, replica index), so the
// histogram is identical for any number of worker threads.

#include <cstdint>
#include <random>
#include <utility>
#include <vector>

#include "tfbd/model_params.hpp"

namespace tfbd {

inline constexpr int kDefaultStateCap = 64;
inline constexpr std::int64_t kRunawayState = 10'000'000;

struct SimConfig {
  ModelParams params;
  double horizon;
  std::int64_t replicas;
  std::uint64_t master_seed;
  int state_cap = kDefaultStateCap;
  /// Worker threads; 0 picks the hardware concurrency. Does not affect the result.
  unsigned workers = 1;
};

struct EmpiricalPmf {
  std::vector<double> probs;  // states 0..state_cap
  std::vector<double> std_errors;
  std::int64_t replicas = 0;
  double overflow_mass = 0.0;  // fraction of samples above state_cap
};

using UniformPair = std::pair<double, double>;
using Rng = std::mt19937_64;

/// Positive stable variate with E exp(-z S) = exp(-z^nu) from uniforms in (0, 1)
/// (Chambers-Mallows-Stuck / Kanter). Requires 0 < nu < 1.
double sample_stable(FracOrder nu, UniformPair uniforms);

/// Inverse stable subordinator at time t; returns t itself for the classical order.
double sample_inverse_subordinator(FracOrder nu, double t, UniformPair uniforms);

/// N(horizon) for the classical chain started empty.
std::int64_t simulate_lbdpwi(const ModelParams& params, double horizon, Rng& rng);

EmpiricalPmf empirical_pmf(const SimConfig& config);

/// Independent generator for (master_seed, replica, stream).
Rng substream(std::uint64_t master_seed, std::uint64_t replica, std::uint64_t stream);

/// Uniform on the open interval (0, 1).
double open_uniform(Rng& rng);

}  // namespace tfbd
