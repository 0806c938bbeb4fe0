#include "tfbd/model_params.hpp"

#include <cmath>
#include <sstream>

#include "tfbd/errors.hpp"

namespace tfbd {

ModelParams::ModelParams(double alpha, double lambda, double mu, FracOrder nu,
                         bool allow_immigration_only)
    : alpha_(alpha), lambda_(lambda), mu_(mu), nu_(nu),
      allow_immigration_only_(allow_immigration_only) {
  std::ostringstream os;
  if (!(alpha > 0.0) || !std::isfinite(alpha)) {
    os << "immigration rate alpha must be positive and finite, got " << alpha;
  } else if (!(lambda >= 0.0) || !std::isfinite(lambda)) {
    os << "birth rate lambda must be nonnegative and finite, got " << lambda;
  } else if (!(mu >= 0.0) || !std::isfinite(mu)) {
    os << "death rate mu must be nonnegative and finite, got " << mu;
  } else if (lambda == 0.0 && mu == 0.0 && !allow_immigration_only) {
    os << "lambda and mu are both zero; construct the immigration-only chain explicitly";
  }
  if (!os.str().empty()) throw ParameterError(os.str());
}

double ModelParams::birth_rate(int n) const noexcept {
  if (n < 0) return 0.0;
  return n == 0 ? alpha_ : n * lambda_;
}

double ModelParams::death_rate(int n) const noexcept {
  return n <= 0 ? 0.0 : n * mu_;
}

ModelParams ModelParams::with_nu(FracOrder nu) const {
  return ModelParams(alpha_, lambda_, mu_, nu, allow_immigration_only_);
}

}  // namespace tfbd
