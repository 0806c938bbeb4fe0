#pragma once

#include "tfbd/special_functions.hpp"

namespace tfbd {

/// Rates of the linear birth-death process with immigration at extinction plus the
/// fractional order of the time change. State rates: birth alpha at n=0 and n*lambda
/// for n>=1; death n*mu.
class ModelParams {
 public:
  /// Set `allow_immigration_only` to build the degenerate lambda = mu = 0 chain.
  ModelParams(double alpha, double lambda, double mu, FracOrder nu,
              bool allow_immigration_only = false);

  double alpha() const noexcept { return alpha_; }
  double lambda() const noexcept { return lambda_; }
  double mu() const noexcept { return mu_; }
  FracOrder nu() const noexcept { return nu_; }

  double birth_rate(int n) const noexcept;
  double death_rate(int n) const noexcept;
  /// alpha == lambda == mu exactly; the case with an integer coefficient table.
  bool equal_rates() const noexcept { return alpha_ == lambda_ && lambda_ == mu_; }

  ModelParams with_nu(FracOrder nu) const;

  friend bool operator==(const ModelParams&, const ModelParams&) = default;

 private:
  double alpha_;
  double lambda_;
  double mu_;
  FracOrder nu_;
  bool allow_immigration_only_;
};

}  // namespace tfbd
