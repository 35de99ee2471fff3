#pragma once
// numeric.hpp - compensated summation and log-domain helpers.

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>

namespace fvc {

/// Uniform slack on every "probability <= eps" comparison.
inline constexpr double kEpsSlack = 1e-12;

inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();

/// Neumaier compensated accumulator.
class CompensatedSum {
 public:
  void add(double x) {
    double t = sum_ + x;
    if (std::fabs(sum_) >= std::fabs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  CompensatedSum& operator+=(double x) {
    add(x);
    return *this;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

/// log2(sum_i 2^{x_i}); -inf for an empty or all -inf input.
inline double log2_sum_exp2(std::span<const double> xs) {
  double top = kNegInf;
  for (double x : xs) top = std::max(top, x);
  if (top == kNegInf) return kNegInf;
  CompensatedSum s;
  for (double x : xs) s.add(std::exp2(x - top));
  return top + std::log2(s.value());
}

/// 2^{log2_count + log2_p} without intermediate overflow.
inline double weight(long double log2_count, double log2_p) {
  if (log2_p == kNegInf) return 0.0;
  return static_cast<double>(exp2l(log2_count + static_cast<long double>(log2_p)));
}

}  // namespace fvc
