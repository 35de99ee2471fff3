#pragma once
// gaussian.hpp - standard normal tail Q and its inverse.

#include <cmath>
#include <stdexcept>

namespace fvc {

/// Q(x) = P(Z > x) for a standard normal Z.
inline double q(double x) { return 0.5 * std::erfc(x / M_SQRT2); }

/// Q^{-1}(p) for p in (0, 1): bisection to 1e-13, then two Newton steps.
inline double q_inv(double p) {
  if (!(p > 0.0 && p < 1.0)) throw std::domain_error("q_inv: p must lie in (0, 1)");
  if (p == 0.5) return 0.0;
  double lo = -40.0, hi = 40.0;  // q decreasing: q(lo) > p > q(hi)
  while (hi - lo > 1e-13) {
    double mid = 0.5 * (lo + hi);
    if (q(mid) > p) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  double x = 0.5 * (lo + hi);
  for (int i = 0; i < 2; ++i) {
    double pdf = std::exp(-0.5 * x * x) / std::sqrt(2.0 * M_PI);
    if (pdf <= 0.0) break;
    double step = (q(x) - p) / pdf;
    if (!std::isfinite(step) || std::fabs(step) > 1e-10) break;
    x += step;
  }
  return x;
}

}  // namespace fvc
