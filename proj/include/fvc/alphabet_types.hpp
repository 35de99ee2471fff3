#pragma once
// alphabet_types.hpp - finite alphabets, distributions, empirical types and
// their exact combinatorics.
//
// Types are enumerated in descending lexicographic order of the count vector,
// (n,0,...,0) first and (0,...,0,n) last. The position in that order is the
// type id used everywhere else; "lexicographic tie order" means ascending id.

#include "fvc/count.hpp"
#include "fvc/numeric.hpp"

#include <bit>
#include <cmath>
#include <cstdint>
#include <memory>
#include <numeric>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace fvc {

using SupportMask = std::uint32_t;
inline constexpr std::size_t kMaxAlphabet = 32;

// ---------------------------------------------------------------------------
// Alphabet, Dist, TypeVector
// ---------------------------------------------------------------------------

class Alphabet {
 public:
  explicit Alphabet(std::size_t size) : labels_(size) {
    if (size == 0 || size > kMaxAlphabet) throw std::invalid_argument("alphabet size must be in [1, 32]");
    for (std::size_t i = 0; i < size; ++i) labels_[i] = "x" + std::to_string(i);
  }
  explicit Alphabet(std::vector<std::string> labels) : labels_(std::move(labels)) {
    if (labels_.empty() || labels_.size() > kMaxAlphabet) {
      throw std::invalid_argument("alphabet size must be in [1, 32]");
    }
    for (std::size_t i = 0; i < labels_.size(); ++i) {
      for (std::size_t j = i + 1; j < labels_.size(); ++j) {
        if (labels_[i] == labels_[j]) throw std::invalid_argument("alphabet labels must be distinct");
      }
    }
  }
  std::size_t size() const { return labels_.size(); }
  const std::string& label(std::size_t i) const { return labels_.at(i); }

 private:
  std::vector<std::string> labels_;
};

/// A probability vector over an alphabet of size m.
class Dist {
 public:
  explicit Dist(std::vector<double> probs) : probs_(std::move(probs)) {
    if (probs_.empty() || probs_.size() > kMaxAlphabet) throw std::invalid_argument("Dist: bad alphabet size");
    CompensatedSum s;
    for (double p : probs_) {
      if (!(p >= 0.0) || !std::isfinite(p)) throw std::invalid_argument("Dist: probabilities must be finite and >= 0");
      s.add(p);
    }
    if (std::fabs(s.value() - 1.0) > 1e-12) throw std::invalid_argument("Dist: probabilities must sum to 1");
    for (std::size_t x = 0; x < probs_.size(); ++x) {
      if (probs_[x] > 0.0) support_ |= SupportMask{1} << x;
    }
    log2_.resize(probs_.size());
    for (std::size_t x = 0; x < probs_.size(); ++x) log2_[x] = probs_[x] > 0.0 ? std::log2(probs_[x]) : kNegInf;
  }

  std::size_t size() const { return probs_.size(); }
  double operator[](std::size_t x) const { return probs_[x]; }
  std::span<const double> probs() const { return probs_; }
  double log2_prob(std::size_t x) const { return log2_[x]; }
  SupportMask support() const { return support_; }
  std::size_t support_size() const { return static_cast<std::size_t>(std::popcount(support_)); }

 private:
  std::vector<double> probs_;
  std::vector<double> log2_;
  SupportMask support_ = 0;
};

struct TypeVector {
  std::uint32_t n = 0;
  std::vector<std::uint32_t> counts;

  TypeVector() = default;
  explicit TypeVector(std::vector<std::uint32_t> c) : counts(std::move(c)) {
    n = std::accumulate(counts.begin(), counts.end(), std::uint32_t{0});
    if (counts.empty() || counts.size() > kMaxAlphabet) throw std::invalid_argument("TypeVector: bad alphabet size");
    if (n == 0) throw std::invalid_argument("TypeVector: counts must sum to n >= 1");
  }
  std::size_t size() const { return counts.size(); }
  bool operator==(const TypeVector&) const = default;
};

inline SupportMask support_of(std::span<const std::uint32_t> counts) {
  SupportMask s = 0;
  for (std::size_t x = 0; x < counts.size(); ++x) {
    if (counts[x] > 0) s |= SupportMask{1} << x;
  }
  return s;
}

inline std::string format_counts(std::span<const std::uint32_t> counts) {
  std::ostringstream os;
  os << '(';
  for (std::size_t i = 0; i < counts.size(); ++i) os << (i ? "," : "") << counts[i];
  os << ')';
  return os.str();
}

// ---------------------------------------------------------------------------
// Enumeration
// ---------------------------------------------------------------------------

/// Input range over all count vectors of length m summing to n, in
/// descending lexicographic order.
class TypeEnumeration {
 public:
  TypeEnumeration(std::uint32_t n, std::size_t m) : n_(n), m_(m) {
    if (n == 0) throw std::invalid_argument("enumerate_types: n must be >= 1");
    if (m == 0 || m > kMaxAlphabet) throw std::invalid_argument("enumerate_types: bad alphabet size");
  }

  class iterator {
   public:
    using value_type = TypeVector;
    using difference_type = std::ptrdiff_t;

    iterator() = default;
    iterator(std::uint32_t n, std::size_t m) : done_(false) {
      std::vector<std::uint32_t> c(m, 0);
      c[0] = n;
      current_.counts = std::move(c);
      current_.n = n;
    }
    const TypeVector& operator*() const { return current_; }
    const TypeVector* operator->() const { return &current_; }
    iterator& operator++() {
      advance();
      return *this;
    }
    void operator++(int) { advance(); }
    bool operator==(std::default_sentinel_t) const { return done_; }

   private:
    void advance() {
      auto& c = current_.counts;
      const std::size_t m = c.size();
      if (m == 1) {
        done_ = true;
        return;
      }
      // Rightmost position j < m-1 with c[j] > 0: decrement it and move
      // everything to its right into position j+1.
      std::size_t j = m - 1;
      do {
        --j;
        if (c[j] > 0) break;
        if (j == 0) {
          done_ = true;
          return;
        }
      } while (true);
      std::uint32_t tail = c[m - 1];
      c[m - 1] = 0;
      --c[j];
      c[j + 1] = tail + 1;
    }

    TypeVector current_;
    bool done_ = true;
  };

  iterator begin() const { return iterator(n_, m_); }
  std::default_sentinel_t end() const { return {}; }

 private:
  std::uint32_t n_;
  std::size_t m_;
};

inline TypeEnumeration enumerate_types(std::uint32_t n, const Alphabet& alphabet) {
  return TypeEnumeration(n, alphabet.size());
}

/// |P_n| = binom(n+m-1, m-1).
inline BigNat number_of_types(std::uint32_t n, std::size_t m) { return binomial(n + m - 1, m - 1); }

// ---------------------------------------------------------------------------
// Scalar functionals
// ---------------------------------------------------------------------------

/// Shannon entropy in bits.
inline double entropy(std::span<const double> p) {
  CompensatedSum s;
  for (double x : p) {
    if (x > 0.0) s.add(-x * std::log2(x));
  }
  return std::max(0.0, s.value());
}

/// Varentropy Var[-log2 P(X)] in bits^2.
inline double varentropy(std::span<const double> p) {
  const double h = entropy(p);
  CompensatedSum s;
  for (double x : p) {
    if (x > 0.0) {
      double d = -std::log2(x) - h;
      s.add(x * d * d);
    }
  }
  return std::max(0.0, s.value());
}

inline double entropy(const Dist& p) { return entropy(p.probs()); }
inline double varentropy(const Dist& p) { return varentropy(p.probs()); }

/// Empirical entropy H(t) computed as sum c (log2 n - log2 c) / n; exact zero
/// for constant types.
inline double empirical_entropy(std::span<const std::uint32_t> counts) {
  std::uint64_t n = 0;
  for (auto c : counts) n += c;
  const double log2n = std::log2(static_cast<double>(n));
  CompensatedSum s;
  for (auto c : counts) {
    if (c > 0) s.add(static_cast<double>(c) * (log2n - std::log2(static_cast<double>(c))));
  }
  return std::max(0.0, s.value() / static_cast<double>(n));
}

inline std::vector<double> empirical_dist(std::span<const std::uint32_t> counts) {
  std::uint64_t n = 0;
  for (auto c : counts) n += c;
  std::vector<double> t(counts.size());
  for (std::size_t x = 0; x < counts.size(); ++x) t[x] = static_cast<double>(counts[x]) / static_cast<double>(n);
  return t;
}

inline double empirical_varentropy(std::span<const std::uint32_t> counts) {
  auto t = empirical_dist(counts);
  return varentropy(t);
}

/// D(t || P) in bits; +inf when support(t) is not inside support(P).
inline double kl(std::span<const std::uint32_t> counts, std::span<const double> p) {
  if (counts.size() != p.size()) throw std::invalid_argument("kl: alphabet mismatch");
  std::uint64_t n = 0;
  for (auto c : counts) n += c;
  CompensatedSum s;
  for (std::size_t x = 0; x < counts.size(); ++x) {
    if (counts[x] == 0) continue;
    if (p[x] <= 0.0) return std::numeric_limits<double>::infinity();
    double tx = static_cast<double>(counts[x]) / static_cast<double>(n);
    s.add(tx * std::log2(tx / p[x]));
  }
  return std::max(0.0, s.value());
}

inline double kl(const TypeVector& t, const Dist& p) { return kl(t.counts, p.probs()); }

/// log2 of the probability of one sequence of type t: -n(H(t) + D(t||P)).
inline double sequence_log2_prob(std::span<const std::uint32_t> counts, const Dist& p) {
  if (counts.size() != p.size()) throw std::invalid_argument("sequence_log2_prob: alphabet mismatch");
  CompensatedSum s;
  for (std::size_t x = 0; x < counts.size(); ++x) {
    if (counts[x] == 0) continue;
    if (p[x] <= 0.0) return kNegInf;
    s.add(static_cast<double>(counts[x]) * p.log2_prob(x));
  }
  return s.value();
}

inline double sequence_log2_prob(const TypeVector& t, const Dist& p) { return sequence_log2_prob(t.counts, p); }

/// Exact type class size n! / prod c!.
inline BigNat type_class_size(const TypeVector& t) { return multinomial(t.counts); }

struct TypeClassStats {
  BigNat size_exact;
  double log2_size = 0.0;
  double seq_log2_prob = 0.0;
  double class_log2_prob = 0.0;
};

inline TypeClassStats type_class_stats(const TypeVector& t, const Dist& p) {
  TypeClassStats s;
  s.size_exact = type_class_size(t);
  s.log2_size = static_cast<double>(count_traits<BigNat>::log2(s.size_exact));
  s.seq_log2_prob = sequence_log2_prob(t, p);
  s.class_log2_prob = s.seq_log2_prob == kNegInf ? kNegInf : s.log2_size + s.seq_log2_prob;
  return s;
}

/// n * f(t) for the type-class sandwich n f(t) + C- <= log2|T_t| <= n f(t).
///
/// Uses the identity min{log n, -log t(x)} - log n = -log2 c_x for c_x >= 1
/// (and 0 for c_x = 0), which gives n f(t) = n H(t) + (1/2) log2 n
/// - (1/2) sum_{c_x > 0} log2 c_x.
inline double n_f_bound(std::span<const std::uint32_t> counts) {
  std::uint64_t n = 0;
  for (auto c : counts) n += c;
  const double log2n = std::log2(static_cast<double>(n));
  CompensatedSum s;
  for (auto c : counts) {
    if (c > 0) s.add(static_cast<double>(c) * (log2n - std::log2(static_cast<double>(c))));
  }
  CompensatedSum half;
  half.add(log2n);
  for (auto c : counts) {
    if (c > 0) half.add(-std::log2(static_cast<double>(c)));
  }
  return s.value() + 0.5 * half.value();
}

inline double f_bound(const TypeVector& t) { return n_f_bound(t.counts) / static_cast<double>(t.n); }

/// C- = (1-m)/2 log2(2 pi) - m / (12 ln 2).
inline double c_minus(std::size_t m) {
  if (m == 0) throw std::invalid_argument("c_minus: m must be >= 1");
  const double md = static_cast<double>(m);
  return (1.0 - md) / 2.0 * std::log2(2.0 * M_PI) - md / (12.0 * M_LN2);
}

// ---------------------------------------------------------------------------
// TypeSpace: all types of P_n for one (n, m), materialized once.
// ---------------------------------------------------------------------------

class TypeSpace {
 public:
  TypeSpace(std::uint32_t n, std::size_t m) : n_(n), m_(m), lf_(n) {
    BigNat total = number_of_types(n, m);
    if (total > std::numeric_limits<std::uint32_t>::max()) throw std::length_error("TypeSpace: too many types");
    const auto count = static_cast<std::size_t>(total);
    counts_.reserve(count * m);
    support_.reserve(count);
    log2_size_.reserve(count);
    for (const TypeVector& t : TypeEnumeration(n, m)) {
      counts_.insert(counts_.end(), t.counts.begin(), t.counts.end());
      support_.push_back(support_of(t.counts));
      log2_size_.push_back(static_cast<double>(lf_.log2_multinomial(t.counts)));
    }
  }

  std::uint32_t n() const { return n_; }
  std::size_t m() const { return m_; }
  std::size_t size() const { return support_.size(); }

  std::span<const std::uint32_t> counts(std::size_t id) const { return {counts_.data() + id * m_, m_}; }
  TypeVector type(std::size_t id) const {
    auto c = counts(id);
    return TypeVector(std::vector<std::uint32_t>(c.begin(), c.end()));
  }
  SupportMask support(std::size_t id) const { return support_[id]; }
  double log2_size(std::size_t id) const { return log2_size_[id]; }

  template <class Count>
  Count class_size(std::size_t id) const {
    return count_traits<Count>::class_size(counts(id), lf_);
  }

  /// Type id of a count vector (linear search is avoided via ranking).
  std::size_t id_of(std::span<const std::uint32_t> c) const {
    if (c.size() != m_) throw std::invalid_argument("id_of: alphabet mismatch");
    // Rank in descending lex order: count vectors strictly greater than c.
    std::uint64_t rank = 0;
    std::uint32_t remaining = n_;
    for (std::size_t j = 0; j + 1 < m_; ++j) {
      // Vectors agreeing on positions < j with a larger value at j.
      for (std::uint32_t v = c[j] + 1; v <= remaining; ++v) {
        rank += static_cast<std::uint64_t>(binomial(remaining - v + (m_ - j - 1) - 1, m_ - j - 2));
      }
      remaining -= c[j];
    }
    return static_cast<std::size_t>(rank);
  }

  /// Per-type log2 probability of one sequence; ties between types with equal
  /// probability are bit-exact because symbols with equal P(x) are pooled.
  std::vector<double> sequence_log2_probs(const Dist& p) const {
    if (p.size() != m_) throw std::invalid_argument("TypeSpace: alphabet mismatch");
    std::vector<double> levels;
    std::vector<std::size_t> level_of(m_);
    for (std::size_t x = 0; x < m_; ++x) {
      std::size_t l = 0;
      while (l < levels.size() && levels[l] != p[x]) ++l;
      if (l == levels.size()) levels.push_back(p[x]);
      level_of[x] = l;
    }
    std::vector<double> out(size());
    std::vector<std::uint64_t> pooled(levels.size());
    for (std::size_t id = 0; id < size(); ++id) {
      std::fill(pooled.begin(), pooled.end(), 0);
      auto c = counts(id);
      for (std::size_t x = 0; x < m_; ++x) pooled[level_of[x]] += c[x];
      double acc = 0.0;
      for (std::size_t l = 0; l < levels.size(); ++l) {
        if (pooled[l] == 0) continue;
        if (levels[l] <= 0.0) {
          acc = kNegInf;
          break;
        }
        acc += static_cast<double>(pooled[l]) * std::log2(levels[l]);
      }
      out[id] = acc;
    }
    return out;
  }

  /// Per-type log2 class probability log2|T_t| + log2 P(x^n).
  std::vector<double> class_log2_probs(const Dist& p) const {
    auto seq = sequence_log2_probs(p);
    for (std::size_t id = 0; id < size(); ++id) {
      if (seq[id] != kNegInf) seq[id] += log2_size_[id];
    }
    return seq;
  }

  const detail::Log2Factorials& log2_factorials() const { return lf_; }

 private:
  std::uint32_t n_;
  std::size_t m_;
  detail::Log2Factorials lf_;
  std::vector<std::uint32_t> counts_;
  std::vector<SupportMask> support_;
  std::vector<double> log2_size_;
};

inline std::shared_ptr<const TypeSpace> make_type_space(std::uint32_t n, std::size_t m) {
  return std::make_shared<const TypeSpace>(n, m);
}

/// Support sets ordered by size, then lexicographically by member list.
inline bool canonical_support_less(SupportMask a, SupportMask b) {
  int pa = std::popcount(a), pb = std::popcount(b);
  if (pa != pb) return pa < pb;
  // Lexicographic on ascending member lists: compare lowest differing member.
  while (a != 0 && b != 0) {
    int la = std::countr_zero(a), lb = std::countr_zero(b);
    if (la != lb) return la < lb;
    a &= a - 1;
    b &= b - 1;
  }
  return false;
}

}  // namespace fvc
