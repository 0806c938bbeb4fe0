#pragma once

#include <algorithm>
#include <cmath>

namespace tfbd {

// Neumaier's variant of Kahan summation. Also tracks the largest running-sum
// and term magnitudes, which bound the cancellation error of the result.
class CompensatedSum {
 public:
  void add(double x) noexcept {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      carry_ += (sum_ - t) + x;
    } else {
      carry_ += (x - t) + sum_;
    }
    sum_ = t;
    max_partial_ = std::max(max_partial_, std::abs(sum_ + carry_));
    max_term_ = std::max(max_term_, std::abs(x));
  }

  CompensatedSum& operator+=(double x) noexcept {
    add(x);
    return *this;
  }

  double value() const noexcept { return sum_ + carry_; }
  double max_abs_partial() const noexcept { return max_partial_; }
  double max_abs_term() const noexcept { return max_term_; }

 private:
  double sum_ = 0.0;
  double carry_ = 0.0;
  double max_partial_ = 0.0;
  double max_term_ = 0.0;
};

}  // namespace tfbd
