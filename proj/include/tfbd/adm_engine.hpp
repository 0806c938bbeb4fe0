#pragma once

// Adomian-decomposition series for the time-fractional linear birth-death
// process with immigration at extinction.
//
// The k-th series component of p(n, t) is C_{n,k} t^{k nu} / Gamma(k nu + 1), where
//   C_{0,0} = 1,
//   C_{n,k} = -(lambda_n + mu_n) C_{n,k-1} + lambda_{n-1} C_{n-1,k-1} + mu_{n+1} C_{n+1,k-1},
// and C_{n,k} = 0 for n > k. With alpha = lambda = mu the table is
// C_{n,k} = (-1)^{k-n} c_{n,k} lambda^k for nonnegative integers c_{n,k}, which are kept exact.
//
// The series is alternating with terms that grow before they decay (and, for
// nu < 1, never decay: it is only asymptotic as t -> 0). Every evaluation reports
// the first omitted term and a cancellation bound so callers can reject results.

#include <span>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "tfbd/model_params.hpp"

namespace tfbd {

using BigInt = boost::multiprecision::cpp_int;

inline constexpr int kDefaultSeriesOrder = 60;
inline constexpr int kMaxSeriesOrder = 400;
/// Results whose cancellation bound or first omitted term exceeds this are refused
/// with AccuracyLossError.
inline constexpr double kMaxCancellation = 1e-6;

enum class CoefficientFlavor { equal_rates, general };

class CoefficientTable {
 public:
  /// Integer table c_{n,k}, 0 <= n <= k <= max_order.
  static CoefficientTable equal_rates(int max_order);
  /// Floating table C_{n,k} for arbitrary rates. Throws OverflowError naming (n, k).
  static CoefficientTable general(const ModelParams& params, int max_order);

  CoefficientFlavor flavor() const noexcept { return flavor_; }
  int max_order() const noexcept { return max_order_; }

  /// c_{n,k}; zero for n > k. Equal-rates tables only.
  const BigInt& exact(int n, int k) const;
  /// Row k of the integer table: c_{0,k}, ..., c_{k,k}.
  std::span<const BigInt> exact_row(int k) const;
  /// C_{n,k}; zero for n > k. General tables only.
  double general(int n, int k) const;

 private:
  CoefficientTable(CoefficientFlavor flavor, int max_order)
      : flavor_(flavor), max_order_(max_order) {}

  CoefficientFlavor flavor_;
  int max_order_;
  std::vector<std::vector<BigInt>> exact_rows_;
  std::vector<std::vector<double>> general_rows_;
};

struct TruncatedSeries {
  double value = 0.0;
  int order_used = 0;
  double tail_estimate = 0.0;          // |first omitted term|
  double cancellation_estimate = 0.0;  // max |partial sum| * machine epsilon

  double error_bound() const noexcept { return tail_estimate + cancellation_estimate; }
};

struct Pmf {
  double time = 0.0;
  std::vector<double> probs;
  double regularity_defect = 0.0;  // |sum probs - 1|
  std::vector<double> per_state_error;

  double error_budget() const noexcept;
};

CoefficientTable coeff_table_equal_rates(int max_order);
CoefficientTable coeff_table_general(const ModelParams& params, int max_order);

/// Series evaluator bound to one parameter set; builds the coefficient table once.
/// Immutable after construction and safe to share between threads.
class AdmSeries {
 public:
  AdmSeries(const ModelParams& params, int order = kDefaultSeriesOrder);

  const ModelParams& params() const noexcept { return params_; }
  int order() const noexcept { return order_; }
  const CoefficientTable& table() const noexcept { return table_; }

  /// k-th component of p(n, t); k may go up to order() + 1.
  double component(int n, int k, double t) const;
  TruncatedSeries state_probability(int n, double t) const;
  Pmf pmf(double t, int n_max) const;

  /// Unchecked partial sums: the same values without the accuracy-loss refusal, for
  /// diagnostics such as the growth of the regularity defect with t.
  TruncatedSeries partial_sum(int n, double t) const;
  Pmf partial_pmf(double t, int n_max) const;

  // Moments are derived only for alpha = lambda = mu; other rates raise ParameterError.
  TruncatedSeries mean(double t) const;
  TruncatedSeries second_factorial_moment(double t) const;
  TruncatedSeries variance(double t) const;

 private:
  TruncatedSeries factorial_moment_series(double t, int shift, double scale) const;
  void require_equal_rates(const char* what) const;

  ModelParams params_;
  int order_;
  CoefficientTable table_;
};

double series_component(int n, int k, const ModelParams& params, double t);
TruncatedSeries state_probability(int n, double t, const ModelParams& params,
                                  int order = kDefaultSeriesOrder);
Pmf pmf(double t, const ModelParams& params, int order, int n_max);
TruncatedSeries mean(double t, const ModelParams& params, int order = kDefaultSeriesOrder);
TruncatedSeries second_factorial_moment(double t, const ModelParams& params,
                                        int order = kDefaultSeriesOrder);
TruncatedSeries variance(double t, const ModelParams& params, int order = kDefaultSeriesOrder);

/// log|v| for a big integer that may exceed the double range.
double log_abs(const BigInt& v);

}  // namespace tfbd
