#pragma once
// count.hpp - arithmetic backends for sequence counts and ranks.
//
// Every count-carrying template in fvc is parameterized on a Count type.
// Two backends are provided:
//   BigNat       exact arbitrary-precision naturals (boost cpp_int)
//   long double  x87 extended precision; range up to 2^16383, used when the
//                number of types makes exact prefix tables too large.

#include <boost/multiprecision/cpp_int.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <stdexcept>
#include <vector>

namespace fvc {

using BigNat = boost::multiprecision::cpp_int;

namespace detail {

/// log2(k!) for k = 0..n, long double, computed with lgammal.
class Log2Factorials {
 public:
  explicit Log2Factorials(std::uint32_t n) : table_(n + 1) {
    constexpr long double ln2 = 0.693147180559945309417232121458176568L;
    for (std::uint32_t k = 0; k <= n; ++k) {
      table_[k] = k < 2 ? 0.0L : lgammal(static_cast<long double>(k) + 1.0L) / ln2;
    }
  }
  long double operator[](std::uint32_t k) const { return table_[k]; }
  std::uint32_t max() const { return static_cast<std::uint32_t>(table_.size() - 1); }

  // Canonical order (ascending counts) so permuted types give identical bits.
  long double log2_multinomial(std::span<const std::uint32_t> counts) const {
    std::uint32_t n = 0;
    std::uint32_t buf[64];
    std::vector<std::uint32_t> heap;
    std::uint32_t* sorted = buf;
    if (counts.size() > 64) {
      heap.resize(counts.size());
      sorted = heap.data();
    }
    std::copy(counts.begin(), counts.end(), sorted);
    std::sort(sorted, sorted + counts.size());
    long double acc = 0.0L;
    for (std::size_t i = 0; i < counts.size(); ++i) {
      acc += table_[sorted[i]];
      n += sorted[i];
    }
    return table_[n] - acc;
  }

 private:
  std::vector<long double> table_;
};

inline bool mul_overflows(std::uint64_t a, std::uint64_t b, std::uint64_t& out) {
  return __builtin_mul_overflow(a, b, &out);
}

/// Exact multinomial in 64 bits; false on overflow.
inline bool multinomial_u64(std::span<const std::uint32_t> counts, std::uint64_t& out) {
  std::uint64_t result = 1;
  std::uint64_t placed = 0;
  for (std::uint32_t c : counts) {
    // result *= binom(placed + c, c), built one factor at a time.
    for (std::uint32_t i = 1; i <= c; ++i) {
      ++placed;
      unsigned __int128 wide = static_cast<unsigned __int128>(result) * placed;
      wide /= i;
      if (wide > std::numeric_limits<std::uint64_t>::max()) return false;
      result = static_cast<std::uint64_t>(wide);
    }
  }
  out = result;
  return true;
}

}  // namespace detail

/// Exact binomial coefficient.
inline BigNat binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  BigNat r = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    r *= n - k + i;
    r /= i;
  }
  return r;
}

/// Exact multinomial n! / prod c! with n = sum of counts.
inline BigNat multinomial(std::span<const std::uint32_t> counts) {
  BigNat r = 1;
  std::uint64_t placed = 0;
  for (std::uint32_t c : counts) {
    placed += c;
    r *= binomial(placed, c);
  }
  return r;
}

/// Pascal rows cached up to a fixed n; multinomials become m-1 products.
class BinomialTable {
 public:
  explicit BinomialTable(std::uint32_t n) : n_(n), rows_(n + 1) {
    for (std::uint32_t r = 0; r <= n; ++r) {
      rows_[r].resize(r + 1);
      rows_[r][0] = 1;
      rows_[r][r] = 1;
      for (std::uint32_t k = 1; k < r; ++k) rows_[r][k] = rows_[r - 1][k - 1] + rows_[r - 1][k];
    }
  }
  const BigNat& operator()(std::uint32_t n, std::uint32_t k) const { return rows_.at(n).at(k); }
  BigNat multinomial(std::span<const std::uint32_t> counts) const {
    BigNat r = 1;
    std::uint32_t placed = 0;
    for (std::uint32_t c : counts) {
      placed += c;
      if (placed > n_) throw std::out_of_range("BinomialTable: n exceeds table");
      if (c != 0 && c != placed) r *= rows_[placed][c];
    }
    return r;
  }

 private:
  std::uint32_t n_;
  std::vector<std::vector<BigNat>> rows_;
};

template <class Count>
struct count_traits;

template <>
struct count_traits<BigNat> {
  static constexpr bool exact = true;

  static BigNat from_u64(std::uint64_t v) { return BigNat(v); }
  static BigNat pow2(long e) { return e < 0 ? BigNat(0) : BigNat(1) << e; }

  static BigNat class_size(std::span<const std::uint32_t> counts, const detail::Log2Factorials&) {
    return multinomial(counts);
  }

  /// floor(log2 x), x >= 1.
  static long floor_log2(const BigNat& x) {
    if (x <= 0) throw std::domain_error("floor_log2 of non-positive count");
    return static_cast<long>(boost::multiprecision::msb(x));
  }
  /// ceil(log2 x), x >= 1.
  static long ceil_log2(const BigNat& x) {
    long f = floor_log2(x);
    return boost::multiprecision::lsb(x) == static_cast<unsigned>(f) ? f : f + 1;
  }
  static long double log2(const BigNat& x) {
    if (x <= 0) return -std::numeric_limits<long double>::infinity();
    long top = floor_log2(x);
    if (top < 63) return log2l(static_cast<long double>(static_cast<std::uint64_t>(x)));
    long shift = top - 63;
    std::uint64_t head = static_cast<std::uint64_t>(x >> shift);
    return static_cast<long double>(shift) + log2l(static_cast<long double>(head));
  }
  static BigNat floor_div(const BigNat& x, std::uint64_t g) { return x / g; }
  static bool is_zero(const BigNat& x) { return x == 0; }
  /// Midpoint for bisection; equal to lo when hi - lo <= 1.
  static BigNat midpoint(const BigNat& lo, const BigNat& hi) { return lo + (hi - lo) / 2; }
  static std::uint64_t to_u64(const BigNat& x) {
    if (x > std::numeric_limits<std::uint64_t>::max()) throw std::overflow_error("count exceeds 64 bits");
    return static_cast<std::uint64_t>(x);
  }
  static long double to_real(const BigNat& x) { return static_cast<long double>(x); }
};

template <>
struct count_traits<long double> {
  static constexpr bool exact = false;

  static long double from_u64(std::uint64_t v) { return static_cast<long double>(v); }
  static long double pow2(long e) { return e < 0 ? 0.0L : ldexpl(1.0L, static_cast<int>(e)); }

  static long double class_size(std::span<const std::uint32_t> counts, const detail::Log2Factorials& lf) {
    long double lg = lf.log2_multinomial(counts);
    if (lg < 62.0L) {
      std::uint64_t exact = 0;
      if (detail::multinomial_u64(counts, exact)) return static_cast<long double>(exact);
    }
    return exp2l(lg);
  }

  static long floor_log2(long double x) {
    if (!(x >= 1.0L)) throw std::domain_error("floor_log2 of count below one");
    int e = 0;
    frexpl(x, &e);
    return e - 1;
  }
  static long ceil_log2(long double x) {
    long f = floor_log2(x);
    return x == ldexpl(1.0L, static_cast<int>(f)) ? f : f + 1;
  }
  static long double log2(long double x) { return log2l(x); }
  static long double floor_div(long double x, std::uint64_t g) {
    return floorl(x / static_cast<long double>(g));
  }
  static bool is_zero(long double x) { return x == 0.0L; }
  static long double midpoint(long double lo, long double hi) {
    long double mid = floorl(lo + (hi - lo) / 2.0L);
    return mid;
  }
  static std::uint64_t to_u64(long double x) { return static_cast<std::uint64_t>(x); }
  static long double to_real(long double x) { return x; }
};

/// Number of i in [0, x) with i mod g == r (0 <= r < g).
template <class Count>
Count count_residue_below(const Count& x, std::uint32_t g, std::uint32_t r) {
  using T = count_traits<Count>;
  Count rr = T::from_u64(r);
  if (!(x > rr)) return T::from_u64(0);
  return T::floor_div(Count(x - rr - T::from_u64(1)), g) + T::from_u64(1);
}

/// Number of i in [u, v) with i mod g == r.
template <class Count>
Count count_residue(const Count& u, const Count& v, std::uint32_t g, std::uint32_t r) {
  if (!(v > u)) return count_traits<Count>::from_u64(0);
  if (g == 1) return Count(v - u);
  return Count(count_residue_below(v, g, r) - count_residue_below(u, g, r));
}

}  // namespace fvc
