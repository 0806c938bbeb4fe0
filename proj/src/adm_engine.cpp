#include "tfbd/adm_engine.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <string>

#include "tfbd/compensated_sum.hpp"
#include "tfbd/errors.hpp"

namespace tfbd {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

const BigInt& big_zero() {
  static const BigInt zero{0};
  return zero;
}

void check_order(int max_order) {
  if (max_order < 0) throw DomainError("series order must be nonnegative");
  if (max_order > kMaxSeriesOrder) {
    throw ResourceError("series order " + std::to_string(max_order) + " exceeds the limit " +
                        std::to_string(kMaxSeriesOrder));
  }
}

void check_time(double t) {
  if (!(t >= 0.0) || !std::isfinite(t)) throw DomainError("time must be finite and >= 0");
}

// t^{k nu} / Gamma(k nu + 1) in log form; t > 0.
double log_power_over_gamma(int k, double nu, double log_t) {
  const double e = k * nu;
  return e * log_t - log_gamma(e + 1.0).log_abs;
}

[[noreturn]] void refuse(const char* what, int n, double t, const TruncatedSeries& s) {
  std::ostringstream os;
  os.precision(6);
  os << what << " at n=" << n << ", t=" << t << ": cancellation estimate "
     << s.cancellation_estimate << ", first omitted term " << s.tail_estimate
     << " (limit " << kMaxCancellation << " each, partial sum " << s.value
     << "); the series has not converged or cannot be evaluated in double precision here";
  throw AccuracyLossError(os.str());
}

TruncatedSeries checked(const char* what, int n, double t, TruncatedSeries s) {
  if (!(s.cancellation_estimate <= kMaxCancellation && s.tail_estimate <= kMaxCancellation)) {
    refuse(what, n, t, s);
  }
  return s;
}

}  // namespace

double log_abs(const BigInt& v) {
  if (v == 0) return -std::numeric_limits<double>::infinity();
  const BigInt a = abs(v);
  const auto bits = boost::multiprecision::msb(a);
  if (bits < 1000) return std::log(a.convert_to<double>());
  const auto shift = bits - 64;
  const BigInt top = a >> shift;
  return std::log(top.convert_to<double>()) + static_cast<double>(shift) * std::numbers::ln2;
}

CoefficientTable CoefficientTable::equal_rates(int max_order) {
  check_order(max_order);
  CoefficientTable table(CoefficientFlavor::equal_rates, max_order);
  auto& rows = table.exact_rows_;
  rows.reserve(max_order + 1);
  rows.push_back({BigInt{1}});
  for (int k = 0; k < max_order; ++k) {
    const auto& prev = rows[k];
    auto at = [&](int n) -> const BigInt& {
      return (n >= 0 && n <= k) ? prev[n] : big_zero();
    };
    std::vector<BigInt> next(k + 2);
    next[0] = at(0) + at(1);
    next[1] = at(0) + 2 * (at(1) + at(2));
    for (int n = 2; n <= k + 1; ++n) {
      next[n] = (n - 1) * at(n - 1) + 2 * n * at(n) + (n + 1) * at(n + 1);
    }
    rows.push_back(std::move(next));
  }
  return table;
}

CoefficientTable CoefficientTable::general(const ModelParams& params, int max_order) {
  check_order(max_order);
  CoefficientTable table(CoefficientFlavor::general, max_order);
  auto& rows = table.general_rows_;
  rows.reserve(max_order + 1);
  rows.push_back({1.0});
  for (int k = 1; k <= max_order; ++k) {
    const auto& prev = rows[k - 1];
    auto at = [&](int n) { return (n >= 0 && n <= k - 1) ? prev[n] : 0.0; };
    std::vector<double> next(k + 1);
    for (int n = 0; n <= k; ++n) {
      const double v = -(params.birth_rate(n) + params.death_rate(n)) * at(n) +
                       params.birth_rate(n - 1) * at(n - 1) +
                       params.death_rate(n + 1) * at(n + 1);
      if (!std::isfinite(v)) {
        throw OverflowError("coefficient C_{" + std::to_string(n) + "," + std::to_string(k) +
                            "} overflows the double range");
      }
      next[n] = v;
    }
    rows.push_back(std::move(next));
  }
  return table;
}

const BigInt& CoefficientTable::exact(int n, int k) const {
  if (flavor_ != CoefficientFlavor::equal_rates) {
    throw ParameterError("exact coefficients exist only for alpha = lambda = mu");
  }
  if (k < 0 || k > max_order_) throw DomainError("coefficient row outside the table");
  if (n < 0 || n > k) return big_zero();
  return exact_rows_[k][n];
}

std::span<const BigInt> CoefficientTable::exact_row(int k) const {
  if (flavor_ != CoefficientFlavor::equal_rates) {
    throw ParameterError("exact coefficients exist only for alpha = lambda = mu");
  }
  if (k < 0 || k > max_order_) throw DomainError("coefficient row outside the table");
  return exact_rows_[k];
}

double CoefficientTable::general(int n, int k) const {
  if (flavor_ != CoefficientFlavor::general) {
    throw ParameterError("table holds exact equal-rates coefficients");
  }
  if (k < 0 || k > max_order_) throw DomainError("coefficient row outside the table");
  if (n < 0 || n > k) return 0.0;
  return general_rows_[k][n];
}

CoefficientTable coeff_table_equal_rates(int max_order) {
  return CoefficientTable::equal_rates(max_order);
}

CoefficientTable coeff_table_general(const ModelParams& params, int max_order) {
  return CoefficientTable::general(params, max_order);
}

double Pmf::error_budget() const noexcept {
  double s = 0.0;
  for (double e : per_state_error) s += e;
  return s;
}

namespace {

// One extra row so the first omitted term is available as the tail estimate.
CoefficientTable table_for(const ModelParams& params, int order) {
  check_order(order);
  return params.equal_rates() ? CoefficientTable::equal_rates(order + 1)
                              : CoefficientTable::general(params, order + 1);
}

}  // namespace

AdmSeries::AdmSeries(const ModelParams& params, int order)
    : params_(params), order_(order), table_(table_for(params, order)) {}

double AdmSeries::component(int n, int k, double t) const {
  check_time(t);
  if (n < 0 || k < 0) throw DomainError("component indices must be nonnegative");
  if (k > table_.max_order()) throw DomainError("component order beyond the coefficient table");
  if (n > k) return 0.0;
  if (t == 0.0) return k == 0 ? 1.0 : 0.0;
  const double nu = params_.nu().value();
  const double log_t = std::log(t);
  if (table_.flavor() == CoefficientFlavor::equal_rates) {
    const BigInt& c = table_.exact(n, k);
    if (c == 0) return 0.0;
    const double l = log_abs(c) + k * std::log(params_.lambda()) + log_power_over_gamma(k, nu, log_t);
    const double mag = std::exp(l);
    return ((k - n) % 2 == 0) ? mag : -mag;
  }
  const double c = table_.general(n, k);
  if (c == 0.0) return 0.0;
  const double mag = std::exp(std::log(std::abs(c)) + log_power_over_gamma(k, nu, log_t));
  return c > 0.0 ? mag : -mag;
}

TruncatedSeries AdmSeries::partial_sum(int n, double t) const {
  check_time(t);
  if (n < 0) throw DomainError("state must be nonnegative");
  if (n > order_) {
    throw DomainError("state " + std::to_string(n) + " exceeds the series order " +
                      std::to_string(order_));
  }
  TruncatedSeries s;
  s.order_used = order_;
  if (t == 0.0) {
    s.value = (n == 0) ? 1.0 : 0.0;
    return s;
  }
  CompensatedSum sum;
  for (int k = n; k <= order_; ++k) sum += component(n, k, t);
  s.value = sum.value();
  s.tail_estimate = std::abs(component(n, order_ + 1, t));
  s.cancellation_estimate = sum.max_abs_partial() * kEps;
  return s;
}

TruncatedSeries AdmSeries::state_probability(int n, double t) const {
  return checked("state_probability", n, t, partial_sum(n, t));
}

namespace {

template <class Eval>
Pmf assemble_pmf(double t, int n_max, int order, Eval eval) {
  if (n_max < 0 || n_max > order) {
    throw DomainError("pmf needs 0 <= n_max <= series order");
  }
  Pmf out;
  out.time = t;
  out.probs.reserve(n_max + 1);
  out.per_state_error.reserve(n_max + 1);
  CompensatedSum total;
  for (int n = 0; n <= n_max; ++n) {
    const TruncatedSeries s = eval(n);
    out.probs.push_back(s.value);
    out.per_state_error.push_back(s.error_bound());
    total += s.value;
  }
  out.regularity_defect = std::abs(total.value() - 1.0);
  return out;
}

}  // namespace

Pmf AdmSeries::pmf(double t, int n_max) const {
  return assemble_pmf(t, n_max, order_, [&](int n) { return state_probability(n, t); });
}

Pmf AdmSeries::partial_pmf(double t, int n_max) const {
  return assemble_pmf(t, n_max, order_, [&](int n) { return partial_sum(n, t); });
}

void AdmSeries::require_equal_rates(const char* what) const {
  if (!params_.equal_rates()) {
    throw ParameterError(std::string(what) +
                         ": moment series are available only for alpha = lambda = mu");
  }
}

// scale * sum_{k=0}^{K} (-1)^k c_{0,k} x^{k+shift} / Gamma((k+shift) nu + 1), x = lambda t^nu.
TruncatedSeries AdmSeries::factorial_moment_series(double t, int shift, double scale) const {
  check_time(t);
  TruncatedSeries s;
  s.order_used = order_;
  if (t == 0.0) return s;
  const double nu = params_.nu().value();
  const double log_x = std::log(params_.lambda()) + nu * std::log(t);
  auto term = [&](int k) {
    const double l = log_abs(table_.exact(0, k)) + (k + shift) * log_x -
                     log_gamma((k + shift) * nu + 1.0).log_abs;
    const double mag = scale * std::exp(l);
    return (k % 2 == 0) ? mag : -mag;
  };
  CompensatedSum sum;
  for (int k = 0; k <= order_; ++k) sum += term(k);
  s.value = sum.value();
  s.tail_estimate = std::abs(term(order_ + 1));
  s.cancellation_estimate = sum.max_abs_partial() * kEps;
  return s;
}

TruncatedSeries AdmSeries::mean(double t) const {
  require_equal_rates("mean");
  return checked("mean", 0, t, factorial_moment_series(t, 1, 1.0));
}

TruncatedSeries AdmSeries::second_factorial_moment(double t) const {
  require_equal_rates("second_factorial_moment");
  return checked("second_factorial_moment", 0, t, factorial_moment_series(t, 2, 2.0));
}

TruncatedSeries AdmSeries::variance(double t) const {
  const auto m = mean(t);
  const auto m2 = second_factorial_moment(t);
  TruncatedSeries v;
  v.order_used = order_;
  v.value = m2.value + m.value - m.value * m.value;
  const double spread = 1.0 + 2.0 * std::abs(m.value);
  v.tail_estimate = m2.tail_estimate + m.tail_estimate * spread;
  v.cancellation_estimate = m2.cancellation_estimate + m.cancellation_estimate * spread +
                            kEps * (std::abs(m2.value) + std::abs(m.value) + m.value * m.value);
  return v;
}

double series_component(int n, int k, const ModelParams& params, double t) {
  return AdmSeries(params, std::max(k, 0)).component(n, k, t);
}

TruncatedSeries state_probability(int n, double t, const ModelParams& params, int order) {
  return AdmSeries(params, order).state_probability(n, t);
}

Pmf pmf(double t, const ModelParams& params, int order, int n_max) {
  return AdmSeries(params, order).pmf(t, n_max);
}

TruncatedSeries mean(double t, const ModelParams& params, int order) {
  return AdmSeries(params, order).mean(t);
}

TruncatedSeries second_factorial_moment(double t, const ModelParams& params, int order) {
  return AdmSeries(params, order).second_factorial_moment(t);
}

TruncatedSeries variance(double t, const ModelParams& params, int order) {
  return AdmSeries(params, order).variance(t);
}

}  // namespace tfbd
