#include "tfbd/birth_model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <string>

#include "tfbd/compensated_sum.hpp"
#include "tfbd/errors.hpp"
#include "tfbd/quadrature.hpp"

namespace tfbd {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
// Relative accuracy assumed for each Mittag-Leffler value entering an alternating sum.
constexpr double kMittagLefflerRelError = 1e-13;

void check_state(int n) {
  if (n < 0) throw DomainError("state must be nonnegative");
}

void check_time(double t) {
  if (!(t >= 0.0) || !std::isfinite(t)) throw DomainError("time must be finite and >= 0");
}

bool resonant(double k_lambda, double alpha) {
  return std::abs(k_lambda - alpha) <= kResonanceTolerance * std::max(k_lambda, alpha);
}

// log of (a^k - b^k)/(a - b) for a, b > 0, k >= 1, including the a == b limit k a^{k-1}.
double log_power_difference_quotient(double a, double b, int k) {
  const double hi = std::max(a, b);
  const double lo = std::min(a, b);
  if (lo >= 0.5 * hi) {
    // hi^{k-1} * sum_j (lo/hi)^j: no subtraction, exact at the resonance.
    const double q = lo / hi;
    CompensatedSum s;
    double qj = 1.0;
    for (int j = 0; j < k; ++j) {
      s += qj;
      qj *= q;
    }
    return (k - 1) * std::log(hi) + std::log(s.value());
  }
  return k * std::log(hi) + std::log1p(-std::pow(lo / hi, k)) - std::log(hi - lo);
}

}  // namespace

BirthParams::BirthParams(double alpha_, double lambda_, FracOrder nu_)
    : alpha(alpha_), lambda(lambda_), nu(nu_) {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) {
    throw ParameterError("birth model: alpha must be positive and finite");
  }
  if (!(lambda > 0.0) || !std::isfinite(lambda)) {
    throw ParameterError("birth model: lambda must be positive and finite");
  }
}

double binomial(int n, int k) {
  if (n < 0) throw DomainError("binomial: n must be nonnegative");
  if (k < 0 || k > n) return 0.0;
  k = std::min(k, n - k);
  if (n <= 64) {
    unsigned __int128 c = 1;
    for (int i = 0; i < k; ++i) c = c * static_cast<unsigned>(n - i) / static_cast<unsigned>(i + 1);
    return static_cast<double>(static_cast<std::uint64_t>(c));
  }
  return std::exp(log_gamma(n + 1.0).log_abs - log_gamma(k + 1.0).log_abs -
                  log_gamma(n - k + 1.0).log_abs);
}

ClosedFormValue pmf_closed_with_error(int n, double t, const BirthParams& p) {
  check_state(n);
  check_time(t);
  if (n > kMaxClosedFormState) {
    throw AccuracyLossError("pmf_closed: state " + std::to_string(n) + " exceeds " +
                            std::to_string(kMaxClosedFormState) +
                            "; the alternating binomial sum cancels beyond double precision");
  }
  if (t == 0.0) return {n == 0 ? 1.0 : 0.0, 0.0};
  const double tau = std::pow(t, p.nu.value());
  const double e_alpha = mittag_leffler(p.nu, -p.alpha * tau);
  if (n == 0) return {e_alpha, e_alpha * kMittagLefflerRelError};

  CompensatedSum sum;
  double propagated = 0.0;
  for (int k = 1; k <= n; ++k) {
    const double weight = ((k % 2 == 0) ? 1.0 : -1.0) * binomial(n - 1, k - 1);
    const double k_lambda = k * p.lambda;
    double term = 0.0;
    if (resonant(k_lambda, p.alpha)) {
      const double d = mittag_leffler_deriv(p.nu, -p.alpha * tau);
      term = weight * (-p.alpha * tau) * d;
      propagated += std::abs(term) * kMittagLefflerRelError;
    } else {
      const double e_k = mittag_leffler(p.nu, -k_lambda * tau);
      const double factor = weight * p.alpha / (k_lambda - p.alpha);
      term = factor * (e_k - e_alpha);
      propagated += std::abs(factor) * (std::abs(e_k) + std::abs(e_alpha)) * kMittagLefflerRelError;
    }
    sum += term;
  }
  ClosedFormValue out;
  out.value = sum.value();
  out.error_estimate = propagated + 4.0 * n * kEps * sum.max_abs_term();
  if (out.value < -out.error_estimate || out.value > 1.0 + out.error_estimate) {
    std::ostringstream os;
    os.precision(6);
    os << "pmf_closed at n=" << n << ", t=" << t << " evaluated to " << out.value
       << " with error bound " << out.error_estimate << ", outside [0, 1]";
    throw AccuracyLossError(os.str());
  }
  return out;
}

double pmf_closed(int n, double t, const BirthParams& p) {
  return pmf_closed_with_error(n, t, p).value;
}

double series_component_birth(int n, int k, const BirthParams& p, double t) {
  check_state(n);
  check_time(t);
  if (k < 0) throw DomainError("component order must be nonnegative");
  if (n > k) return 0.0;
  if (t == 0.0) return (k == 0) ? 1.0 : 0.0;
  const double nu = p.nu.value();
  const double log_scale = k * nu * std::log(t) - log_gamma(k * nu + 1.0).log_abs;
  if (n == 0) {
    const double mag = std::exp(k * std::log(p.alpha) + log_scale);
    return (k % 2 == 0) ? mag : -mag;
  }
  CompensatedSum sum;
  for (int r = 1; r <= n; ++r) {
    const double l = std::log(binomial(n - 1, r - 1)) + std::log(p.alpha) +
                     log_power_difference_quotient(r * p.lambda, p.alpha, k) + log_scale;
    const double mag = std::exp(l);
    sum += ((r + k) % 2 == 0) ? mag : -mag;
  }
  return sum.value();
}

double laplace_state(int n, double z, const BirthParams& p) {
  check_state(n);
  if (!(z > 0.0)) throw DomainError("laplace_state: z must be positive");
  const double nu = p.nu.value();
  const double zn = std::pow(z, nu);
  const double lead = std::pow(z, nu - 1.0);
  const double state0 = lead / (zn + p.alpha);
  if (n == 0) return state0;
  CompensatedSum sum;
  for (int k = 1; k <= n; ++k) {
    const double weight = ((k % 2 == 0) ? 1.0 : -1.0) * binomial(n - 1, k - 1);
    const double k_lambda = k * p.lambda;
    // alpha/(k lambda - alpha) * (lead/(zn + k lambda) - lead/(zn + alpha)) reduces to
    // -alpha lead / ((zn + k lambda)(zn + alpha)), which is also the resonant limit.
    const double term = resonant(k_lambda, p.alpha)
                            ? -p.alpha * lead / ((zn + p.alpha) * (zn + p.alpha))
                            : -p.alpha * lead / ((zn + k_lambda) * (zn + p.alpha));
    sum += weight * term;
  }
  return sum.value();
}

double mean_birth(double t, const BirthParams& p) {
  check_time(t);
  if (t == 0.0) return 0.0;
  const double tau = std::pow(t, p.nu.value());
  return p.alpha / (p.alpha + p.lambda) *
         (mittag_leffler(p.nu, p.lambda * tau) - mittag_leffler(p.nu, -p.alpha * tau));
}

double second_factorial_moment_birth(double t, const BirthParams& p) {
  check_time(t);
  if (t == 0.0) return 0.0;
  const double a = p.alpha;
  const double l = p.lambda;
  const double tau = std::pow(t, p.nu.value());
  const double e2 = mittag_leffler(p.nu, 2.0 * l * tau);
  const double e1 = mittag_leffler(p.nu, l * tau);
  const double em = mittag_leffler(p.nu, -a * tau);
  return 2.0 * a * l / (a + l) *
         ((a + l) * e2 / (l * (a + 2.0 * l)) - e1 / l + em / (a + 2.0 * l));
}

double variance_birth(double t, const BirthParams& p) {
  const double m = mean_birth(t, p);
  return second_factorial_moment_birth(t, p) + m - m * m;
}

double small_alpha_pmf(int n, double t, const BirthParams& p) {
  check_state(n);
  check_time(t);
  const double tau = std::pow(t, p.nu.value());
  if (n == 0) return 1.0 - tau * p.alpha * reciprocal_gamma(1.0 + p.nu.value());
  CompensatedSum sum;
  for (int k = 0; k <= n; ++k) {
    const double weight = ((k % 2 == 0) ? 1.0 : -1.0) * binomial(n, k);
    sum += weight * mittag_leffler(p.nu, -k * p.lambda * tau);
  }
  return p.alpha / (n * p.lambda) * sum.value();
}

double waiting_time_survival(double s, const BirthParams& p) {
  return pmf_closed(0, s, p);
}

double pgf_laplace(double u, double z, const BirthParams& p) {
  if (!(u >= 0.0 && u <= 1.0)) throw DomainError("pgf_laplace: u must lie in [0, 1]");
  if (!(z > 0.0)) throw DomainError("pgf_laplace: z must be positive");
  const double nu = p.nu.value();
  const double zn = std::pow(z, nu);
  const double lead = std::pow(z, nu - 1.0);
  const double state0 = lead / (zn + p.alpha);
  if (u == 0.0) return state0;
  // x = -log(1 - w)/lambda maps the half line onto [0, 1).
  const double exponent = zn / p.lambda;
  auto integrand = [&](double w) {
    if (w >= 1.0) return 0.0;
    return std::pow(1.0 - w, exponent) / (1.0 - u * w);
  };
  const auto r = integrate_endpoint_singular(integrand, 0.0, 1.0, 1e-10);
  const double integral = u * lead / p.lambda * r.value;
  return state0 + p.alpha / (zn + p.alpha) * integral;
}

}  // namespace tfbd
