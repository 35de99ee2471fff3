#pragma once
// coding_core.hpp - fixed-to-variable codes at type granularity.
//
// A RankedCode lists, for each rank space (partition), an ordered run of
// blocks. Block b of width g covers `count` consecutive ranks and shares them
// round-robin among g member types: rank offset i inside the block belongs to
// member (i + phase) mod g. Plain codes use width-1 blocks (one type each);
// wider blocks express interleavings such as the binary interleaved code.
//
// Rank r (1-based, per partition) is mapped to the r-th string of
// {empty, 0, 1, 00, 01, ...}, length floor(log2 r), plus header_bits. In
// fixed-length partitions every rank gets ceil(log2 |partition|) bits instead.

#include "fvc/alphabet_types.hpp"
#include "fvc/count.hpp"
#include "fvc/numeric.hpp"

#include "json.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <functional>
#include <memory>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace fvc {

/// Length of the rank-th binary string in shortest-first order.
template <class Count>
long string_length_of_rank(const Count& rank) {
  if (!(rank >= count_traits<Count>::from_u64(1))) throw std::invalid_argument("string_length_of_rank: rank must be >= 1");
  return count_traits<Count>::floor_log2(rank);
}

inline long string_length_of_rank(std::uint64_t rank) {
  if (rank == 0) throw std::invalid_argument("string_length_of_rank: rank must be >= 1");
  return std::bit_width(rank) - 1;
}

template <class Count>
class RankedCode {
 public:
  using T = count_traits<Count>;

  struct Block {
    std::uint32_t first = 0;  // index into members()
    std::uint16_t width = 1;
    std::uint16_t phase = 0;
    Count count{};
  };

  struct Partition {
    std::uint64_t key = 0;
    std::size_t begin = 0;  // block range
    std::size_t end = 0;
    Count total{};
  };

  RankedCode(std::shared_ptr<const TypeSpace> space, std::uint32_t header_bits, bool fixed_length = false)
      : space_(std::move(space)), header_bits_(header_bits), fixed_length_(fixed_length) {
    if (!space_) throw std::invalid_argument("RankedCode: null type space");
  }

  void begin_partition(std::uint64_t key) {
    Partition p;
    p.key = key;
    p.begin = p.end = blocks_.size();
    p.total = T::from_u64(0);
    partitions_.push_back(std::move(p));
  }

  void add_block(std::span<const std::uint32_t> members, const Count& count, std::uint32_t phase = 0) {
    if (partitions_.empty()) begin_partition(0);
    if (members.empty() || members.size() > 0xffff) throw std::invalid_argument("RankedCode: bad block width");
    if (T::is_zero(count)) return;
    for (auto id : members) {
      if (id >= space_->size()) throw std::out_of_range("RankedCode: type id out of range");
    }
    Block b;
    b.first = static_cast<std::uint32_t>(members_.size());
    b.width = static_cast<std::uint16_t>(members.size());
    b.phase = static_cast<std::uint16_t>(phase % members.size());
    b.count = count;
    members_.insert(members_.end(), members.begin(), members.end());
    blocks_.push_back(std::move(b));
    Partition& p = partitions_.back();
    p.end = blocks_.size();
    p.total += count;
  }

  /// Whole type class as one width-1 block.
  void add_type(std::uint32_t id) {
    const std::uint32_t one[1] = {id};
    add_block(one, space_->class_size<Count>(id));
  }

  const TypeSpace& space() const { return *space_; }
  std::shared_ptr<const TypeSpace> space_ptr() const { return space_; }
  std::uint32_t header_bits() const { return header_bits_; }
  bool fixed_length() const { return fixed_length_; }
  const std::vector<Block>& blocks() const { return blocks_; }
  const std::vector<Partition>& partitions() const { return partitions_; }
  std::span<const std::uint32_t> members(const Block& b) const { return {members_.data() + b.first, b.width}; }

  /// Member slot of rank offset i inside b.
  static std::uint32_t slot_of_offset(const Block& b, std::uint64_t i) {
    return static_cast<std::uint32_t>((i + b.phase) % b.width);
  }
  /// Residue class of offsets owned by member slot j.
  static std::uint32_t residue_of_slot(const Block& b, std::uint32_t j) {
    return static_cast<std::uint32_t>((j + b.width - b.phase) % b.width);
  }

  /// Number of ranks of member slot j inside offsets [u, v).
  Count slot_count(const Block& b, std::uint32_t j, const Count& u, const Count& v) const {
    return count_residue(u, v, b.width, residue_of_slot(b, j));
  }

  /// Codeword length of rank r in partition p (fixed-length partitions ignore r).
  long fixed_partition_length(const Partition& p) const {
    if (!(p.total > T::from_u64(1))) return header_bits_;
    return header_bits_ + T::ceil_log2(p.total);
  }

  /// Visit blocks of partition p with their first rank.
  void for_each_block(const Partition& p, const std::function<void(const Block&, const Count&)>& fn) const {
    Count start = T::from_u64(1);
    for (std::size_t b = p.begin; b < p.end; ++b) {
      fn(blocks_[b], start);
      start += blocks_[b].count;
    }
  }

  /// Ranks assigned to each type, summed over all blocks.
  std::vector<Count> assigned_per_type() const {
    std::vector<Count> out(space_->size(), T::from_u64(0));
    const Count zero = T::from_u64(0);
    for (const Block& b : blocks_) {
      auto mem = members(b);
      for (std::uint32_t j = 0; j < b.width; ++j) out[mem[j]] += slot_count(b, j, zero, b.count);
    }
    return out;
  }

  /// Every type's class is covered exactly once (exact for BigNat, relative
  /// 1e-15 for long double). Throws std::logic_error naming the first failure.
  void validate() const {
    auto got = assigned_per_type();
    for (std::size_t id = 0; id < space_->size(); ++id) {
      Count want = space_->class_size<Count>(id);
      bool ok;
      if constexpr (T::exact) {
        ok = got[id] == want;
      } else {
        ok = fabsl(got[id] - want) <= 1e-15L * want;
      }
      if (!ok) {
        throw std::logic_error("RankedCode: type " + format_counts(space_->counts(id)) +
                               " is not covered exactly once");
      }
    }
  }

 private:
  std::shared_ptr<const TypeSpace> space_;
  std::uint32_t header_bits_;
  bool fixed_length_;
  std::vector<std::uint32_t> members_;
  std::vector<Block> blocks_;
  std::vector<Partition> partitions_;
};

// ---------------------------------------------------------------------------
// LengthDistribution
// ---------------------------------------------------------------------------

struct LengthDistribution {
  std::uint32_t n = 0;
  std::vector<double> mass;  // mass[l] = P(length == l)

  double total() const {
    CompensatedSum s;
    for (double x : mass) s.add(x);
    return s.value();
  }

  long max_length() const {
    for (std::size_t l = mass.size(); l-- > 0;) {
      if (mass[l] > 0.0) return static_cast<long>(l);
    }
    return 0;
  }

  long min_length() const {
    for (std::size_t l = 0; l < mass.size(); ++l) {
      if (mass[l] > 0.0) return static_cast<long>(l);
    }
    return 0;
  }

  /// tail[k] = P(length > k) for k = 0..size-1, compensated backward sums.
  std::vector<double> tails() const {
    std::vector<double> t(mass.size() + 1, 0.0);
    CompensatedSum s;
    for (std::size_t l = mass.size(); l-- > 0;) {
      t[l] = std::max(0.0, s.value());
      s.add(mass[l]);
    }
    return t;
  }

  double tail(long k) const {
    if (k < 0) return total();
    CompensatedSum s;
    for (std::size_t l = mass.size(); l-- > static_cast<std::size_t>(k) + 1;) s.add(mass[l]);
    return std::max(0.0, s.value());
  }
};

inline double total_variation(const LengthDistribution& a, const LengthDistribution& b) {
  CompensatedSum s;
  const std::size_t len = std::max(a.mass.size(), b.mass.size());
  for (std::size_t l = 0; l < len; ++l) {
    double x = l < a.mass.size() ? a.mass[l] : 0.0;
    double y = l < b.mass.size() ? b.mass[l] : 0.0;
    s.add(std::fabs(x - y));
  }
  return 0.5 * s.value();
}

inline nlohmann::json to_json(const LengthDistribution& ld) {
  nlohmann::json mass = nlohmann::json::array();
  for (std::size_t l = 0; l < ld.mass.size(); ++l) {
    if (ld.mass[l] > 0.0) mass.push_back({l, ld.mass[l]});
  }
  return {{"n", ld.n}, {"mass", mass}};
}

inline void check_eps(double eps) {
  if (!(eps > 0.0 && eps < 1.0)) throw std::domain_error("eps must lie in (0, 1)");
}

/// Minimum k >= 0 with P(length > k) <= eps (+ kEpsSlack).
inline long epsilon_bits(const LengthDistribution& ld, double eps) {
  check_eps(eps);
  auto t = ld.tails();
  for (std::size_t k = 0; k < t.size(); ++k) {
    if (t[k] <= eps + kEpsSlack) return static_cast<long>(k);
  }
  return static_cast<long>(t.size());
}

inline double epsilon_rate(const LengthDistribution& ld, double eps, std::uint32_t n) {
  if (n == 0) throw std::invalid_argument("epsilon_rate: n must be >= 1");
  return static_cast<double>(epsilon_bits(ld, eps)) / static_cast<double>(n);
}

namespace detail {

inline void add_mass(std::vector<CompensatedSum>& acc, long l, double w) {
  if (w == 0.0) return;
  if (static_cast<std::size_t>(l) >= acc.size()) acc.resize(l + 1);
  acc[l].add(w);
}

template <class Count>
void check_coverage(const RankedCode<Count>& code, std::span<const double> seq_log2) {
  const TypeSpace& sp = code.space();
  std::vector<char> covered(sp.size(), 0);
  for (const auto& b : code.blocks()) {
    for (auto id : code.members(b)) covered[id] = 1;
  }
  for (std::size_t id = 0; id < sp.size(); ++id) {
    if (!covered[id] && seq_log2[id] != kNegInf) {
      throw std::invalid_argument("length_distribution: code does not cover type " + format_counts(sp.counts(id)));
    }
  }
}

}  // namespace detail

/// Exact codeword-length distribution of code under P.
template <class Count>
LengthDistribution length_distribution(const RankedCode<Count>& code, const Dist& p) {
  using T = count_traits<Count>;
  const TypeSpace& sp = code.space();
  if (p.size() != sp.m()) throw std::invalid_argument("length_distribution: alphabet mismatch");
  auto seq = sp.sequence_log2_probs(p);
  detail::check_coverage(code, seq);

  std::vector<CompensatedSum> acc;
  const long header = code.header_bits();
  const Count zero = T::from_u64(0);

  for (const auto& part : code.partitions()) {
    if (code.fixed_length()) {
      const long len = code.fixed_partition_length(part);
      for (std::size_t bi = part.begin; bi < part.end; ++bi) {
        const auto& b = code.blocks()[bi];
        auto mem = code.members(b);
        for (std::uint32_t j = 0; j < b.width; ++j) {
          if (seq[mem[j]] == kNegInf) continue;
          Count c = code.slot_count(b, j, zero, b.count);
          if (T::is_zero(c)) continue;
          detail::add_mass(acc, len, weight(T::log2(c), seq[mem[j]]));
        }
      }
      continue;
    }
    code.for_each_block(part, [&](const auto& b, const Count& start) {
      auto mem = code.members(b);
      bool any = false;
      for (std::uint32_t j = 0; j < b.width; ++j) any = any || seq[mem[j]] != kNegInf;
      if (!any) return;
      const Count last = Count(start + b.count - T::from_u64(1));
      const long l0 = T::floor_log2(start);
      const long l1 = T::floor_log2(last);
      for (long l = l0; l <= l1; ++l) {
        Count lo = l == l0 ? start : T::pow2(l);
        Count hi = l == l1 ? Count(last + T::from_u64(1)) : T::pow2(l + 1);
        Count u = Count(lo - start);
        Count v = Count(hi - start);
        for (std::uint32_t j = 0; j < b.width; ++j) {
          if (seq[mem[j]] == kNegInf) continue;
          Count c = code.slot_count(b, j, u, v);
          if (T::is_zero(c)) continue;
          detail::add_mass(acc, header + l, weight(T::log2(c), seq[mem[j]]));
        }
      }
    });
  }

  LengthDistribution ld;
  ld.n = sp.n();
  ld.mass.resize(acc.size());
  for (std::size_t l = 0; l < acc.size(); ++l) ld.mass[l] = std::max(0.0, acc[l].value());
  return ld;
}

// ---------------------------------------------------------------------------
// Optimal (non-universal) code
// ---------------------------------------------------------------------------

/// Types by descending per-sequence probability, ties by ascending type id.
inline std::vector<std::uint32_t> optimal_order(const TypeSpace& sp, const Dist& p) {
  auto seq = sp.sequence_log2_probs(p);
  std::vector<std::uint32_t> ids(sp.size());
  std::iota(ids.begin(), ids.end(), 0u);
  std::stable_sort(ids.begin(), ids.end(), [&](std::uint32_t a, std::uint32_t b) { return seq[a] > seq[b]; });
  return ids;
}

template <class Count>
RankedCode<Count> optimal_code(std::shared_ptr<const TypeSpace> space, const Dist& p) {
  RankedCode<Count> code(space, 0);
  code.begin_partition(0);
  for (auto id : optimal_order(*space, p)) code.add_type(id);
  return code;
}

// ---------------------------------------------------------------------------
// Sequence-level oracle
// ---------------------------------------------------------------------------

inline constexpr std::uint64_t kBruteForceCap = 1000000;

/// All m^n sequences in lexicographic order (symbol 0 smallest), as digits.
class SequenceTable {
 public:
  SequenceTable(std::uint32_t n, std::size_t m) : n_(n), m_(m) {
    long double total = powl(static_cast<long double>(m), n);
    if (total > static_cast<long double>(kBruteForceCap)) throw std::length_error("brute force: m^n exceeds 10^6");
    count_ = static_cast<std::uint64_t>(total);
  }
  std::uint64_t size() const { return count_; }
  std::uint32_t n() const { return n_; }
  std::size_t m() const { return m_; }

  std::vector<std::uint32_t> digits(std::uint64_t index) const {
    std::vector<std::uint32_t> d(n_);
    for (std::uint32_t i = n_; i-- > 0;) {
      d[i] = static_cast<std::uint32_t>(index % m_);
      index /= m_;
    }
    return d;
  }
  std::vector<std::uint32_t> type_counts(std::uint64_t index) const {
    std::vector<std::uint32_t> c(m_, 0);
    for (auto x : digits(index)) ++c[x];
    return c;
  }
  double probability(std::uint64_t index, const Dist& p) const {
    double prod = 1.0;
    for (auto x : digits(index)) prod *= p[x];
    return prod;
  }

 private:
  std::uint32_t n_;
  std::size_t m_;
  std::uint64_t count_;
};

/// Binary string of rank r in shortest-first order: binary of r without its
/// leading one.
inline std::string string_of_rank(std::uint64_t rank) {
  if (rank == 0) throw std::invalid_argument("string_of_rank: rank must be >= 1");
  std::string s;
  for (int bit = std::bit_width(rank) - 2; bit >= 0; --bit) s.push_back(((rank >> bit) & 1) ? '1' : '0');
  return s;
}

/// Codeword string for every sequence (indexed by lexicographic position),
/// materialized from the code's block structure.
template <class Count>
std::vector<std::string> brute_force_codewords(const RankedCode<Count>& code) {
  using T = count_traits<Count>;
  const TypeSpace& sp = code.space();
  SequenceTable table(sp.n(), sp.m());
  std::vector<std::vector<std::uint64_t>> pending(sp.size());
  for (std::uint64_t s = 0; s < table.size(); ++s) pending[sp.id_of(table.type_counts(s))].push_back(s);
  std::vector<std::size_t> next(sp.size(), 0);
  std::vector<std::string> words(table.size());
  std::vector<char> done(table.size(), 0);
  const std::string header(code.header_bits(), 'h');

  for (const auto& part : code.partitions()) {
    const std::uint64_t total = T::to_u64(part.total);
    const long fixed = code.fixed_partition_length(part) - code.header_bits();
    std::uint64_t rank = 1;
    for (std::size_t bi = part.begin; bi < part.end; ++bi) {
      const auto& b = code.blocks()[bi];
      auto mem = code.members(b);
      const std::uint64_t cnt = T::to_u64(b.count);
      for (std::uint64_t i = 0; i < cnt; ++i, ++rank) {
        auto id = mem[RankedCode<Count>::slot_of_offset(b, i)];
        if (next[id] >= pending[id].size()) throw std::logic_error("brute force: type class overfilled");
        auto seqi = pending[id][next[id]++];
        if (code.fixed_length()) {
          std::string w;
          for (long bit = fixed - 1; bit >= 0; --bit) w.push_back((((rank - 1) >> bit) & 1) ? '1' : '0');
          words[seqi] = header + w;
        } else {
          words[seqi] = header + string_of_rank(rank);
        }
        done[seqi] = 1;
      }
    }
    if (rank - 1 != total) throw std::logic_error("brute force: partition size mismatch");
  }
  for (std::uint64_t s = 0; s < table.size(); ++s) {
    if (!done[s]) words[s] = std::string();  // uncovered; checked by caller
  }
  return words;
}

/// Length distribution by materializing every sequence.
template <class Count>
LengthDistribution brute_force_eval(const RankedCode<Count>& code, const Dist& p) {
  const TypeSpace& sp = code.space();
  if (p.size() != sp.m()) throw std::invalid_argument("brute_force_eval: alphabet mismatch");
  SequenceTable table(sp.n(), sp.m());
  auto words = brute_force_codewords(code);
  auto assigned = code.assigned_per_type();
  std::vector<CompensatedSum> acc;
  for (std::uint64_t s = 0; s < table.size(); ++s) {
    double pr = table.probability(s, p);
    if (pr == 0.0) continue;
    if (count_traits<Count>::is_zero(assigned[sp.id_of(table.type_counts(s))])) {
      throw std::invalid_argument("brute_force_eval: code does not cover every sequence");
    }
    detail::add_mass(acc, static_cast<long>(words[s].size()), pr);
  }
  LengthDistribution ld;
  ld.n = sp.n();
  ld.mass.resize(acc.size());
  for (std::size_t l = 0; l < acc.size(); ++l) ld.mass[l] = acc[l].value();
  return ld;
}

}  // namespace fvc
