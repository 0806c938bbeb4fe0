#include "tfbd/special_functions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <vector>

#include <boost/math/special_functions/gamma.hpp>

#include "tfbd/compensated_sum.hpp"
#include "tfbd/errors.hpp"
#include "tfbd/quadrature.hpp"

namespace tfbd {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kLogMax = 709.0;
// Largest alternating-series term tolerated before switching to the integral
// representation; keeps the cancellation error near 1e-15.
constexpr double kSeriesMaxTerm = 8.0;
// Series is only attempted when |x|^{1/nu} is below this (terms peak near e^{|x|^{1/nu}}).
constexpr double kSeriesReach = 6.0;

[[noreturn]] void out_of_range(const char* what, double nu, double x) {
  std::ostringstream os;
  os.precision(17);
  os << what << ": argument x=" << x << " is outside the safe range for nu=" << nu;
  throw AccuracyLossError(os.str());
}

void check_argument(FracOrder nu, double x, const char* what) {
  if (std::isnan(x)) throw DomainError(std::string(what) + ": argument is NaN");
  if (x < kMittagLefflerMinArg || x > kMittagLefflerMaxArg) out_of_range(what, nu.value(), x);
}

// Positive argument: every term is positive, so sum in log space and rescale.
// `derivative` selects sum_k k x^{k-1}/Gamma(k nu+1) instead of sum_k x^k/Gamma(k nu+1).
double positive_series(double nu, double x, bool derivative, const char* what) {
  const double log_x = std::log(x);
  const double peak = std::pow(x, 1.0 / nu) / nu;
  std::vector<double> logs;
  logs.reserve(static_cast<std::size_t>(peak) + 64);
  double log_max = -std::numeric_limits<double>::infinity();
  for (int k = derivative ? 1 : 0;; ++k) {
    const double kd = k;
    const double l = derivative
                         ? std::log(kd) + (kd - 1.0) * log_x - log_gamma(kd * nu + 1.0).log_abs
                         : kd * log_x - log_gamma(kd * nu + 1.0).log_abs;
    logs.push_back(l);
    log_max = std::max(log_max, l);
    if (kd > peak + 2.0 && l < log_max - 40.0) break;
  }
  CompensatedSum sum;
  for (double l : logs) sum += std::exp(l - log_max);
  const double log_result = log_max + std::log(sum.value());
  if (log_result > kLogMax) out_of_range(what, nu, x);
  return std::exp(log_result);
}

// Negative argument, short range: plain alternating Taylor series. Returns NaN
// when the terms grew too large for the result to keep ~15 digits.
double negative_series(double nu, double x, bool derivative) {
  const double y = -x;
  const double log_y = std::log(y);
  const double peak = std::pow(y, 1.0 / nu) / nu;
  CompensatedSum sum;
  for (int k = derivative ? 1 : 0;; ++k) {
    const double kd = k;
    const int power = derivative ? k - 1 : k;
    const double mag = derivative
                           ? std::exp(std::log(kd) + (kd - 1.0) * log_y -
                                      log_gamma(kd * nu + 1.0).log_abs)
                           : std::exp(kd * log_y - log_gamma(kd * nu + 1.0).log_abs);
    sum += (power % 2 == 0) ? mag : -mag;
    if (kd > peak + 2.0 && mag < 1e-18 * std::abs(sum.value())) break;
    if (k > 2000) break;
  }
  if (sum.max_abs_term() > kSeriesMaxTerm) return std::numeric_limits<double>::quiet_NaN();
  return sum.value();
}

// Negative argument via the completely-monotone integral representation
//   E_nu(-y) = sin(nu pi)/(nu pi) * int_0^inf exp(-(y s)^{1/nu}) / (s^2 + 2 s cos(nu pi) + 1) ds,
// valid for 0 < nu < 1, y > 0. The integrand is positive, so there is no cancellation.
// The derivative with respect to the argument differentiates under the integral.
double negative_integral(double nu, double y, bool derivative) {
  const double theta = nu * std::numbers::pi;
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  const double inv_nu = 1.0 / nu;
  // exp(-(y s)^{1/nu}) underflows beyond this point.
  const double upper = std::pow(745.0, nu) / y;

  // u^2 + 2 u cos + 1 written as (u + cos)^2 + sin^2 to keep the peak accurate.
  auto value_kernel = [=](double u) {
    const double z = std::pow(y * u, inv_nu);
    return std::exp(-z) / ((u + c) * (u + c) + s * s);
  };
  auto deriv_kernel = [=](double u) {
    if (u == 0.0) return 0.0;
    const double z = std::pow(y * u, inv_nu);
    return z * std::exp(-z) / (y * ((u + c) * (u + c) + s * s));
  };

  std::vector<double> points{0.0, upper};
  for (double m = 0.125; m / y < upper; m *= 2.0) points.push_back(m / y);
  if (c < 0.0) {
    // 1/(s^2 + 2 s cos + 1) peaks at s = -cos with width sin(nu pi); narrow as nu -> 1.
    const double centre = -c;
    points.push_back(centre);
    for (double w = s; w < 2.0; w *= 4.0) {
      points.push_back(centre - w);
      points.push_back(centre + w);
    }
  }
  std::erase_if(points, [&](double p) { return p < 0.0 || p > upper; });
  std::sort(points.begin(), points.end());
  points.erase(std::unique(points.begin(), points.end()), points.end());

  const double prefactor = s / (nu * std::numbers::pi);
  if (derivative) {
    const auto r = integrate_piecewise(deriv_kernel, points, 0.0, 1e-12);
    return prefactor * inv_nu * r.value;
  }
  const auto r = integrate_piecewise(value_kernel, points, 0.0, 1e-12);
  return prefactor * r.value;
}

double evaluate(FracOrder order, double x, bool derivative, const char* what) {
  check_argument(order, x, what);
  if (order.is_classical()) return std::exp(x);
  const double nu = order.value();
  if (x == 0.0) return derivative ? reciprocal_gamma(nu + 1.0) : 1.0;
  if (x > 0.0) return positive_series(nu, x, derivative, what);
  if (std::pow(-x, 1.0 / nu) <= kSeriesReach) {
    const double v = negative_series(nu, x, derivative);
    if (!std::isnan(v)) return v;
  }
  return negative_integral(nu, -x, derivative);
}

}  // namespace

FracOrder::FracOrder(double nu) : nu_(nu) {
  if (!(nu > 0.0 && nu <= 1.0)) {
    std::ostringstream os;
    os << "fractional order must satisfy 0 < nu <= 1, got " << nu;
    throw DomainError(os.str());
  }
}

bool FracOrder::is_classical() const noexcept {
  return 1.0 - nu_ <= kClassicalOrderTolerance;
}

SignedLogGamma log_gamma(double x) {
  if (std::isnan(x)) throw DomainError("log_gamma: argument is NaN");
  if (x <= 0.0 && std::floor(x) == x) {
    return {std::numeric_limits<double>::infinity(), 0};
  }
  int sign = 1;
  const double l = boost::math::lgamma(x, &sign);
  return {l, sign};
}

double reciprocal_gamma(double x) {
  const auto g = log_gamma(x);
  if (g.sign == 0) return 0.0;
  return g.sign * std::exp(-g.log_abs);
}

double mittag_leffler(FracOrder nu, double x) {
  return evaluate(nu, x, false, "mittag_leffler");
}

double mittag_leffler_deriv(FracOrder nu, double x) {
  return evaluate(nu, x, true, "mittag_leffler_deriv");
}

double frac_integral_power(double nu, double delta, double t) {
  if (!(nu > 0.0)) throw DomainError("frac_integral_power: nu must be positive");
  if (!(delta > 0.0)) throw DomainError("frac_integral_power: delta must be positive");
  if (!(t >= 0.0)) throw DomainError("frac_integral_power: t must be nonnegative");
  const double power = delta + nu - 1.0;
  const double log_ratio = log_gamma(delta).log_abs - log_gamma(delta + nu).log_abs;
  if (t == 0.0) {
    if (power > 0.0) return 0.0;
    if (power == 0.0) return std::exp(log_ratio);
    return std::numeric_limits<double>::infinity();
  }
  return std::exp(log_ratio + power * std::log(t));
}

}  // namespace tfbd
