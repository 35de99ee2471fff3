#pragma once
// guessing.hpp - guessing functions, code <-> guesser conversions and the
// tail statistic M(G; eps, P).
//
// A guesser is a RankedCode with one partition and no header whose rank is
// the guess number. Its blocks may split a type class across several runs.

#include "fvc/coding_core.hpp"
#include "fvc/count.hpp"
#include "fvc/numeric.hpp"

#include <algorithm>
#include <cstdint>
#include <memory>
#include <stdexcept>
#include <vector>

namespace fvc {

template <class Count>
class GuessingFunction {
 public:
  explicit GuessingFunction(RankedCode<Count> order) : order_(std::move(order)) {
    if (order_.partitions().size() != 1 || order_.header_bits() != 0 || order_.fixed_length()) {
      throw std::invalid_argument("GuessingFunction: order must be a single headerless rank space");
    }
  }
  const RankedCode<Count>& order() const { return order_; }
  const TypeSpace& space() const { return order_.space(); }
  /// Number of guesses (must equal m^n).
  Count size() const { return order_.partitions().front().total; }

 private:
  RankedCode<Count> order_;
};

namespace detail {

template <class Count>
struct Piece {
  long length;
  std::size_t partition;
  Count start;  // first rank inside its partition
  std::size_t block;
  Count offset;  // first offset inside the block
  Count count;
};

}  // namespace detail

/// Guesser that visits sequences in ascending codeword length; ties keep the
/// partition order and then rank order.
template <class Count>
GuessingFunction<Count> code_to_guesser(const RankedCode<Count>& code) {
  using T = count_traits<Count>;
  std::vector<detail::Piece<Count>> pieces;
  const auto& parts = code.partitions();
  for (std::size_t pi = 0; pi < parts.size(); ++pi) {
    const auto& part = parts[pi];
    Count start = T::from_u64(1);
    for (std::size_t bi = part.begin; bi < part.end; ++bi) {
      const auto& b = code.blocks()[bi];
      if (code.fixed_length()) {
        pieces.push_back({code.fixed_partition_length(part), pi, start, bi, T::from_u64(0), b.count});
      } else {
        const Count last = Count(start + b.count - T::from_u64(1));
        const long l0 = T::floor_log2(start);
        const long l1 = T::floor_log2(last);
        for (long l = l0; l <= l1; ++l) {
          Count lo = l == l0 ? start : T::pow2(l);
          Count hi = l == l1 ? Count(last + T::from_u64(1)) : T::pow2(l + 1);
          pieces.push_back({static_cast<long>(code.header_bits()) + l, pi, lo, bi, Count(lo - start), Count(hi - lo)});
        }
      }
      start += b.count;
    }
  }
  std::stable_sort(pieces.begin(), pieces.end(), [](const auto& a, const auto& b) {
    if (a.length != b.length) return a.length < b.length;
    return a.partition < b.partition;
  });

  RankedCode<Count> order(code.space_ptr(), 0);
  order.begin_partition(0);
  std::vector<std::uint32_t> mem;
  for (const auto& pc : pieces) {
    const auto& b = code.blocks()[pc.block];
    auto src = code.members(b);
    mem.assign(src.begin(), src.end());
    std::uint32_t phase = b.phase;
    if (b.width > 1) {
      // Offset o of the piece is offset pc.offset + o of the block.
      Count r = Count(pc.offset - T::floor_div(pc.offset, b.width) * T::from_u64(b.width));
      phase = static_cast<std::uint32_t>((static_cast<std::uint64_t>(T::to_u64(r)) + b.phase) % b.width);
    }
    order.add_block(mem, pc.count, phase);
  }
  return GuessingFunction<Count>(std::move(order));
}

/// Interleave the partitions of a code rank by rank: guess r*K + i is the
/// r-th ranked sequence of the i-th partition still active at depth r.
/// Requires width-1 blocks.
template <class Count>
GuessingFunction<Count> flatten_by_rank(const RankedCode<Count>& code) {
  using T = count_traits<Count>;
  const auto& parts = code.partitions();
  const auto& blocks = code.blocks();
  for (const auto& b : blocks) {
    if (b.width != 1) throw std::invalid_argument("flatten_by_rank: blocks must have width 1");
  }
  struct Cursor {
    std::size_t block;
    std::size_t end;
    Count block_end;  // ranks consumed through the current block
  };
  std::vector<Cursor> cur;
  for (const auto& p : parts) {
    if (p.begin == p.end) continue;
    cur.push_back({p.begin, p.end, blocks[p.begin].count});
  }
  RankedCode<Count> order(code.space_ptr(), 0);
  order.begin_partition(0);
  Count depth = T::from_u64(0);
  std::vector<std::uint32_t> mem;
  while (!cur.empty()) {
    Count next = cur.front().block_end;
    for (const auto& c : cur) next = std::min(next, c.block_end);
    mem.clear();
    for (const auto& c : cur) mem.push_back(code.members(blocks[c.block])[0]);
    Count span = Count(next - depth);
    order.add_block(mem, Count(span * T::from_u64(mem.size())));
    depth = next;
    std::vector<Cursor> keep;
    for (auto& c : cur) {
      if (c.block_end == depth) {
        ++c.block;
        if (c.block == c.end) continue;
        c.block_end += blocks[c.block].count;
      }
      keep.push_back(std::move(c));
    }
    cur = std::move(keep);
  }
  return GuessingFunction<Count>(std::move(order));
}

/// The code whose rank order is G's order: length(x) = floor(log2 G(x)).
template <class Count>
RankedCode<Count> guesser_to_code(const GuessingFunction<Count>& g) {
  return g.order();
}

/// M(G; eps, P) = min{M : P(G(X^n) > M) <= eps}.
template <class Count>
Count guessing_tail(const GuessingFunction<Count>& g, const Dist& p, double eps) {
  using T = count_traits<Count>;
  check_eps(eps);
  const auto& code = g.order();
  const TypeSpace& sp = code.space();
  if (p.size() != sp.m()) throw std::invalid_argument("guessing_tail: alphabet mismatch");
  auto seq = sp.sequence_log2_probs(p);
  const auto& blocks = code.blocks();
  const Count zero = T::from_u64(0);

  auto mass_of = [&](const auto& b, const Count& u, const Count& v) {
    CompensatedSum s;
    auto mem = code.members(b);
    for (std::uint32_t j = 0; j < b.width; ++j) {
      if (seq[mem[j]] == kNegInf) continue;
      Count c = code.slot_count(b, j, u, v);
      if (!T::is_zero(c)) s.add(weight(T::log2(c), seq[mem[j]]));
    }
    return s.value();
  };

  std::vector<double> after(blocks.size(), 0.0);
  CompensatedSum s;
  for (std::size_t i = blocks.size(); i-- > 0;) {
    after[i] = s.value();
    s.add(mass_of(blocks[i], zero, blocks[i].count));
  }

  Count start = T::from_u64(0);  // ranks before block i
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    const auto& b = blocks[i];
    if (after[i] <= eps + kEpsSlack) {
      // Smallest u in [0, count] with after + mass(offsets [u, count)) <= eps.
      auto ok = [&](const Count& u) { return after[i] + mass_of(b, u, b.count) <= eps + kEpsSlack; };
      Count lo = zero, hi = b.count;
      if (ok(lo)) return std::max(start, T::from_u64(1));
      while (Count(hi - lo) > T::from_u64(1)) {
        Count mid = T::midpoint(lo, hi);
        if (mid == lo || mid == hi) break;
        if (ok(mid)) {
          hi = mid;
        } else {
          lo = mid;
        }
      }
      return Count(start + hi);
    }
    start += b.count;
  }
  return start;
}

}  // namespace fvc
