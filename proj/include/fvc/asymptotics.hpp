#pragma once
// asymptotics.hpp - exact finite-n distributions of the empirical entropy and
// of log type-class size, their normal approximations, predicted rates and
// third-order regression.

#include "fvc/alphabet_types.hpp"
#include "fvc/coding_core.hpp"
#include "fvc/gaussian.hpp"
#include "fvc/numeric.hpp"
#include "fvc/universal_codes.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace fvc {

// ---------------------------------------------------------------------------
// Empirical entropy and type-size distributions
// ---------------------------------------------------------------------------

/// P[H(t_{X^n}) >= H(P) + sqrt(V(P)/n) delta], summed exactly over types.
inline double empirical_entropy_cdf(const TypeSpace& sp, const Dist& p, double delta) {
  const double thr = entropy(p) + std::sqrt(varentropy(p) / sp.n()) * delta;
  auto cls = sp.class_log2_probs(p);
  CompensatedSum s;
  for (std::size_t id = 0; id < sp.size(); ++id) {
    if (cls[id] == kNegInf) continue;
    if (empirical_entropy(sp.counts(id)) >= thr - kEpsSlack) s.add(std::exp2(cls[id]));
  }
  return std::min(1.0, s.value());
}

inline double empirical_entropy_cdf(const Dist& p, std::uint32_t n, double delta) {
  return empirical_entropy_cdf(TypeSpace(n, p.size()), p, delta);
}

/// B = max{4/beta^2, 1 + |X|/beta + 400|X|^3/beta^{3/2} + 1/sqrt(2 pi beta)}.
inline double entropy_deviation_constant(std::size_t alphabet, double beta) {
  if (!(beta > 0.0)) throw std::domain_error("entropy_deviation_constant: beta must be positive");
  const double a = static_cast<double>(alphabet);
  return std::max(4.0 / (beta * beta),
                  1.0 + a / beta + 400.0 * a * a * a / std::pow(beta, 1.5) + 1.0 / std::sqrt(2.0 * M_PI * beta));
}

/// min{min_x P(x), V(P)}.
inline double natural_beta(const Dist& p) {
  double b = varentropy(p);
  for (double x : p.probs()) b = std::min(b, x);
  return b;
}

struct EntropyDeviationCheck {
  double probability = 0.0;
  double deviation = 0.0;
  double bound = 0.0;  // B / sqrt(n)
  double B = 0.0;
  bool holds() const { return deviation <= bound; }
};

inline EntropyDeviationCheck entropy_deviation_check(const TypeSpace& sp, const Dist& p, double delta, double beta) {
  for (double x : p.probs()) {
    if (x < beta) throw std::domain_error("entropy_deviation_check: P(x) < beta");
  }
  if (varentropy(p) < beta) throw std::domain_error("entropy_deviation_check: V(P) < beta");
  EntropyDeviationCheck c;
  c.probability = empirical_entropy_cdf(sp, p, delta);
  c.deviation = std::fabs(c.probability - q(delta));
  c.B = entropy_deviation_constant(p.size(), beta);
  c.bound = c.B / std::sqrt(static_cast<double>(sp.n()));
  return c;
}

/// P(log2|T_{t_{X^n}}| > gamma), exact over types.
inline double log_type_size_tail(const TypeSpace& sp, const Dist& p, double gamma) {
  auto cls = sp.class_log2_probs(p);
  CompensatedSum s;
  for (std::size_t id = 0; id < sp.size(); ++id) {
    if (cls[id] == kNegInf) continue;
    if (sp.log2_size(id) > gamma) s.add(std::exp2(cls[id]));
  }
  return std::min(1.0, s.value());
}

/// |P(log2|T| > gamma) - Q((gamma - (1-|X_P|)/2 log2 n - nH)/sqrt(nV))|.
inline double type_size_tail_deviation(const TypeSpace& sp, const Dist& p, double gamma) {
  const double v = varentropy(p);
  if (!(v > 0.0)) throw std::domain_error("type_size_tail_deviation: V(P) must be positive");
  const double n = sp.n();
  const double a = static_cast<double>(p.support_size());
  const double z = (gamma - (1.0 - a) / 2.0 * std::log2(n) - n * entropy(p)) / std::sqrt(n * v);
  return std::fabs(log_type_size_tail(sp, p, gamma) - q(z));
}

// ---------------------------------------------------------------------------
// Predictions and fits
// ---------------------------------------------------------------------------

enum class RateVariant { Optimal, TypeSize, TwoStage };

inline double third_order_coefficient(RateVariant v, std::size_t support_size) {
  const double a = static_cast<double>(support_size);
  switch (v) {
    case RateVariant::Optimal: return -0.5;
    case RateVariant::TypeSize: return (a - 3.0) / 2.0;
    case RateVariant::TwoStage: return (a - 1.0) / 2.0;
  }
  return 0.0;
}

inline RateVariant variant_of(CodeKind k) {
  switch (k) {
    case CodeKind::Optimal:
    case CodeKind::Interleave: return RateVariant::Optimal;
    case CodeKind::TypeSize: return RateVariant::TypeSize;
    case CodeKind::TwoStageFV:
    case CodeKind::TwoStageFF: return RateVariant::TwoStage;
  }
  return RateVariant::Optimal;
}

struct RatePrediction {
  double H = 0.0;
  double V = 0.0;
  double c = 0.0;
  double value(double n, double eps) const {
    return H + std::sqrt(V / n) * q_inv(eps) + c * std::log2(n) / n;
  }
};

inline RatePrediction predicted_rate(const Dist& p, RateVariant v) {
  return {entropy(p), varentropy(p), third_order_coefficient(v, p.support_size())};
}

inline double predicted_rate(const Dist& p, double n, double eps, RateVariant v) {
  return predicted_rate(p, v).value(n, eps);
}

/// y(n) = nR - nH - sqrt(nV) Q^{-1}(eps).
inline double third_order_residual(const Dist& p, double n, double eps, double nR_bits) {
  return nR_bits - n * entropy(p) - std::sqrt(n * varentropy(p)) * q_inv(eps);
}

struct FitPoint {
  double n = 0.0;
  double nR_bits = 0.0;
};

struct FitResult {
  double slope = 0.0;
  double intercept = 0.0;
  double residual = 0.0;  // root-mean-square
};

/// Least squares of y on log2 n.
inline FitResult fit_log2(const std::vector<double>& n, const std::vector<double>& y) {
  if (n.size() != y.size()) throw std::invalid_argument("fit: size mismatch");
  if (n.size() < 5) throw std::invalid_argument("fit: need at least 5 points");
  double lo = *std::min_element(n.begin(), n.end()), hi = *std::max_element(n.begin(), n.end());
  if (!(lo > 0.0) || hi < 8.0 * lo) throw std::invalid_argument("fit: n must span a factor of 8");
  const double k = static_cast<double>(n.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n.size(); ++i) {
    mx += std::log2(n[i]);
    my += y[i];
  }
  mx /= k;
  my /= k;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n.size(); ++i) {
    double dx = std::log2(n[i]) - mx;
    sxx += dx * dx;
    sxy += dx * (y[i] - my);
  }
  if (!(sxx > 1e-12)) throw std::domain_error("fit: singular design");
  FitResult r;
  r.slope = sxy / sxx;
  r.intercept = my - r.slope * mx;
  double ss = 0.0;
  for (std::size_t i = 0; i < n.size(); ++i) {
    double e = y[i] - (r.intercept + r.slope * std::log2(n[i]));
    ss += e * e;
  }
  r.residual = std::sqrt(ss / k);
  return r;
}

inline FitResult third_order_fit(const Dist& p, double eps, const std::vector<FitPoint>& points) {
  std::vector<double> n, y;
  for (const auto& pt : points) {
    n.push_back(pt.n);
    y.push_back(third_order_residual(p, pt.n, eps, pt.nR_bits));
  }
  return fit_log2(n, y);
}

/// Geometric grid from a to b with `per_octave` points per doubling, rounded
/// to integers, endpoints included.
inline std::vector<std::uint32_t> geometric_grid(std::uint32_t a, std::uint32_t b, int per_octave = 2) {
  if (a == 0 || b < a) throw std::invalid_argument("geometric_grid: need 0 < a <= b");
  std::vector<std::uint32_t> out;
  const double steps = std::round(std::log2(static_cast<double>(b) / a) * per_octave);
  const int k = static_cast<int>(steps);
  for (int i = 0; i <= k; ++i) {
    double v = a * std::exp2(static_cast<double>(i) / per_octave);
    auto r = static_cast<std::uint32_t>(std::llround(v));
    if (i == k) r = b;
    if (out.empty() || r != out.back()) out.push_back(r);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Exact rates at scale
// ---------------------------------------------------------------------------

/// Exact nR in bits for one code. Count selects the arithmetic backend.
template <class Count>
long exact_rate_bits(CodeKind kind, std::shared_ptr<const TypeSpace> space, const Dist& p, double eps) {
  switch (kind) {
    case CodeKind::TypeSize: return type_size_solution<Count>(*space, p, eps).bits;
    case CodeKind::TwoStageFV: return two_stage_rate<Count>(*space, p, eps, TwoStageVariant::FV).bits();
    case CodeKind::TwoStageFF: return two_stage_rate<Count>(*space, p, eps, TwoStageVariant::FF).bits();
    case CodeKind::Optimal:
    case CodeKind::Interleave:
      return epsilon_bits(length_distribution(make_code<Count>(kind, space, p), p), eps);
  }
  throw std::invalid_argument("exact_rate_bits: bad kind");
}

/// Exact big-natural arithmetic is used when the total size of all class
/// sizes stays below ~1e8 bits; long double beyond.
inline bool prefer_exact(std::uint32_t n, std::size_t m) {
  long double types = count_traits<BigNat>::to_real(number_of_types(n, m));
  return types * n * std::log2(static_cast<double>(m)) <= 1e8L;
}

inline long exact_rate_bits(CodeKind kind, std::shared_ptr<const TypeSpace> space, const Dist& p, double eps) {
  if (prefer_exact(space->n(), space->m())) return exact_rate_bits<BigNat>(kind, space, p, eps);
  return exact_rate_bits<long double>(kind, space, p, eps);
}

}  // namespace fvc
