#pragma once
// universal_codes.hpp - Two-Stage, Type Size and binary interleaved codes, with
// their exact rate formulas.

#include "fvc/alphabet_types.hpp"
#include "fvc/coding_core.hpp"
#include "fvc/count.hpp"
#include "fvc/numeric.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <map>
#include <memory>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace fvc {

// ---------------------------------------------------------------------------
// Two-Stage
// ---------------------------------------------------------------------------

enum class TwoStageVariant { FV, FF };

struct TwoStageRate {
  std::uint32_t n = 0;
  long s = 0;
  long k = 0;
  long bits() const { return s + k; }
  double rate() const { return static_cast<double>(s + k) / static_cast<double>(n); }
};

/// ceil(log2 binom(n + a - 1, a - 1)): bits to index an n-type over a symbols.
inline long type_index_bits(std::uint32_t n, std::size_t a) {
  return count_traits<BigNat>::ceil_log2(binomial(n + a - 1, a - 1));
}

/// Exact k_FV / k_FF with s computed over the support of P.
template <class Count>
TwoStageRate two_stage_rate(const TypeSpace& sp, const Dist& p, double eps, TwoStageVariant variant) {
  using T = count_traits<Count>;
  check_eps(eps);
  if (p.size() != sp.m()) throw std::invalid_argument("two_stage_rate: alphabet mismatch");
  TwoStageRate r;
  r.n = sp.n();
  r.s = type_index_bits(sp.n(), p.support_size());

  auto seq = sp.sequence_log2_probs(p);
  std::vector<std::uint32_t> live;
  std::vector<Count> size;
  for (std::uint32_t id = 0; id < sp.size(); ++id) {
    if (seq[id] == kNegInf) continue;
    live.push_back(id);
    size.push_back(sp.class_size<Count>(id));
  }

  if (variant == TwoStageVariant::FF) {
    // P(log2|T| > k) = P(ceil_log2|T| > k).
    std::vector<CompensatedSum> by_bits;
    for (std::size_t i = 0; i < live.size(); ++i) {
      detail::add_mass(by_bits, T::ceil_log2(size[i]), weight(sp.log2_size(live[i]), seq[live[i]]));
    }
    LengthDistribution ld;
    ld.n = sp.n();
    for (auto& b : by_bits) ld.mass.push_back(b.value());
    r.k = epsilon_bits(ld, eps);
    return r;
  }

  auto excess = [&](long k) {
    const Count cap = Count(T::pow2(k + 1) - T::from_u64(1));
    CompensatedSum s;
    for (std::size_t i = 0; i < live.size(); ++i) {
      if (size[i] > cap) s.add(weight(T::log2(Count(size[i] - cap)), seq[live[i]]));
    }
    return s.value();
  };
  long hi = 0;
  for (const auto& c : size) hi = std::max(hi, T::ceil_log2(c));
  if (excess(0) <= eps + kEpsSlack) {
    r.k = 0;
    return r;
  }
  long lo = 0;  // excess(lo) > eps, excess(hi) == 0
  while (hi - lo > 1) {
    long mid = lo + (hi - lo) / 2;
    if (excess(mid) <= eps + kEpsSlack) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  r.k = hi;
  return r;
}

/// Two-Stage code: one partition per type, s-bit type index header with s
/// computed over the full alphabet. FF sends ceil(log2|T_t|) bits for the
/// index inside the class, FV the shortest-first string of the index.
template <class Count>
RankedCode<Count> two_stage_code(std::shared_ptr<const TypeSpace> space, TwoStageVariant variant) {
  const auto s = static_cast<std::uint32_t>(type_index_bits(space->n(), space->m()));
  RankedCode<Count> code(space, s, variant == TwoStageVariant::FF);
  for (std::uint32_t id = 0; id < space->size(); ++id) {
    code.begin_partition(id);
    code.add_type(id);
  }
  return code;
}

// ---------------------------------------------------------------------------
// Type Size
// ---------------------------------------------------------------------------

/// Distinct supports of the type space in canonical order.
inline std::vector<SupportMask> canonical_supports(const TypeSpace& sp) {
  std::vector<SupportMask> keys;
  for (std::size_t id = 0; id < sp.size(); ++id) keys.push_back(sp.support(id));
  std::sort(keys.begin(), keys.end());
  keys.erase(std::unique(keys.begin(), keys.end()), keys.end());
  std::sort(keys.begin(), keys.end(), canonical_support_less);
  return keys;
}

/// Type ids grouped by support (canonical order), each group ascending by
/// class size with ties by type id.
template <class Count>
std::vector<std::pair<SupportMask, std::vector<std::uint32_t>>> type_size_order(const TypeSpace& sp) {
  auto keys = canonical_supports(sp);
  std::map<SupportMask, std::size_t> slot;
  for (std::size_t i = 0; i < keys.size(); ++i) slot[keys[i]] = i;
  std::vector<std::pair<SupportMask, std::vector<std::uint32_t>>> groups(keys.size());
  for (std::size_t i = 0; i < keys.size(); ++i) groups[i].first = keys[i];
  for (std::uint32_t id = 0; id < sp.size(); ++id) groups[slot.at(sp.support(id))].second.push_back(id);
  for (auto& [key, ids] : groups) {
    std::vector<Count> size(ids.size());
    for (std::size_t i = 0; i < ids.size(); ++i) size[i] = sp.class_size<Count>(ids[i]);
    std::vector<std::size_t> idx(ids.size());
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return size[a] < size[b]; });
    std::vector<std::uint32_t> sorted(ids.size());
    for (std::size_t i = 0; i < idx.size(); ++i) sorted[i] = ids[idx[i]];
    ids = std::move(sorted);
  }
  return groups;
}

template <class Count>
RankedCode<Count> type_size_code(std::shared_ptr<const TypeSpace> space) {
  RankedCode<Count> code(space, static_cast<std::uint32_t>(space->m()));
  for (const auto& [key, ids] : type_size_order<Count>(*space)) {
    code.begin_partition(key);
    for (auto id : ids) code.add_type(id);
  }
  return code;
}

template <class Count>
struct SupportSolution {
  SupportMask support = 0;
  double prob = 0.0;         // P(support of the type == support)
  Count total{};             // sequences with this support
  bool saturated = false;    // M covers the whole partition
  Count tau_star{};          // class size where the first M ranks end
  Count lambda_num{};        // lambda* = lambda_num / lambda_den in [0, 1)
  Count lambda_den{};
  double lambda_star = 0.0;
  double eps_code = 0.0;     // P(rank > M | support), lexicographic tie order
  double eps_spread = 0.0;   // same with lambda* spread evenly over the tie group
};

template <class Count>
struct TypeSizeSolution {
  std::uint32_t n = 0;
  std::size_t m = 0;
  Count M_star{};
  long bits = 0;  // m + floor(log2 M*)
  std::vector<SupportSolution<Count>> supports;
  double rate() const { return static_cast<double>(bits) / static_cast<double>(n); }
};

namespace detail {

/// One support's slice of the Type Size order, bound to a source.
template <class Count>
struct SupportView {
  const std::vector<Count>* end = nullptr;  // cumulative ranks through block i
  std::vector<double> seq;                  // per-sequence log2 prob
  std::vector<double> after;                // mass of blocks after i
  double prob = 0.0;
  Count total{};

  /// Unconditional P(support, rank > M).
  double beyond(const Count& M) const {
    using T = count_traits<Count>;
    if (!(M < total)) return 0.0;
    auto it = std::upper_bound(end->begin(), end->end(), M);
    std::size_t i = static_cast<std::size_t>(it - end->begin());
    return after[i] + weight(T::log2(Count((*end)[i] - M)), seq[i]);
  }
};

}  // namespace detail

/// Source-independent prefix tables of the Type Size order; solve() gives the
/// exact rate for any source.
template <class Count>
class TypeSizeTables {
 public:
  struct Group {
    SupportMask support = 0;
    std::vector<std::uint32_t> ids;
    std::vector<Count> size;
    std::vector<Count> end;
    Count total{};
  };

  explicit TypeSizeTables(const TypeSpace& sp) : sp_(&sp) {
    using T = count_traits<Count>;
    for (auto& [key, ids] : type_size_order<Count>(sp)) {
      Group g;
      g.support = key;
      g.ids = std::move(ids);
      Count run = T::from_u64(0);
      for (auto id : g.ids) {
        g.size.push_back(sp.class_size<Count>(id));
        run += g.size.back();
        g.end.push_back(run);
      }
      g.total = run;
      groups_.push_back(std::move(g));
    }
  }

  const std::vector<Group>& groups() const { return groups_; }

  /// M* = min{M : sum over supports of P(support, rank > M) <= eps}, ranks
  /// counted in the code's own order.
  TypeSizeSolution<Count> solve(const Dist& p, double eps) const {
    using T = count_traits<Count>;
    const TypeSpace& sp = *sp_;
    check_eps(eps);
    if (p.size() != sp.m()) throw std::invalid_argument("type_size_solution: alphabet mismatch");
    auto seq = sp.sequence_log2_probs(p);

    std::vector<detail::SupportView<Count>> views(groups_.size());
    std::vector<char> live(groups_.size(), 0);
    Count hi = T::from_u64(1);
    for (std::size_t gi = 0; gi < groups_.size(); ++gi) {
      const Group& g = groups_[gi];
      if ((g.support & ~p.support()) != 0) continue;
      live[gi] = 1;
      auto& v = views[gi];
      v.end = &g.end;
      v.total = g.total;
      if (g.total > hi) hi = g.total;
      v.seq.resize(g.ids.size());
      v.after.assign(g.ids.size(), 0.0);
      CompensatedSum s;
      for (std::size_t i = g.ids.size(); i-- > 0;) {
        v.seq[i] = seq[g.ids[i]];
        v.after[i] = s.value();
        s.add(weight(sp.log2_size(g.ids[i]), v.seq[i]));
      }
      v.prob = s.value();
    }

    auto ok = [&](const Count& M) {
      CompensatedSum s;
      for (std::size_t gi = 0; gi < views.size(); ++gi) {
        if (live[gi]) s.add(views[gi].beyond(M));
      }
      return s.value() <= eps + kEpsSlack;
    };

    Count M = T::from_u64(1);
    if (!ok(M)) {
      Count lo = M;
      while (Count(hi - lo) > T::from_u64(1)) {
        Count mid = T::midpoint(lo, hi);
        if (mid == lo || mid == hi) break;
        if (ok(mid)) {
          hi = mid;
        } else {
          lo = mid;
        }
      }
      M = hi;
    }

    TypeSizeSolution<Count> sol;
    sol.n = sp.n();
    sol.m = sp.m();
    sol.M_star = M;
    sol.bits = static_cast<long>(sp.m()) + T::floor_log2(M);

    for (std::size_t gi = 0; gi < groups_.size(); ++gi) {
      const Group& g = groups_[gi];
      const auto& v = views[gi];
      SupportSolution<Count> ss;
      ss.support = g.support;
      ss.total = g.total;
      if (!live[gi]) {
        ss.saturated = true;
        sol.supports.push_back(std::move(ss));
        continue;
      }
      ss.prob = v.prob;
      if (!(M < g.total)) {
        ss.saturated = true;
        ss.tau_star = g.size.back();
        ss.lambda_num = T::from_u64(0);
        ss.lambda_den = T::from_u64(1);
        sol.supports.push_back(std::move(ss));
        continue;
      }
      // tau*: smallest class size whose cumulative count exceeds M.
      auto it = std::upper_bound(g.end.begin(), g.end.end(), M);
      std::size_t i = static_cast<std::size_t>(it - g.end.begin());
      ss.tau_star = g.size[i];
      std::size_t g0 = i, g1 = i + 1;
      while (g0 > 0 && g.size[g0 - 1] == ss.tau_star) --g0;
      while (g1 < g.size.size() && g.size[g1] == ss.tau_star) ++g1;
      Count below = g0 == 0 ? T::from_u64(0) : g.end[g0 - 1];
      ss.lambda_num = Count(M - below);
      ss.lambda_den = Count(g.end[g1 - 1] - below);
      ss.lambda_star = static_cast<double>(T::to_real(ss.lambda_num) / T::to_real(ss.lambda_den));
      if (v.prob > 0.0) {
        ss.eps_code = v.beyond(M) / v.prob;
        CompensatedSum tie;
        for (std::size_t j = g0; j < g1; ++j) tie.add(weight(sp.log2_size(g.ids[j]), v.seq[j]));
        ss.eps_spread = (v.after[g1 - 1] + (1.0 - ss.lambda_star) * tie.value()) / v.prob;
      }
      sol.supports.push_back(std::move(ss));
    }
    return sol;
  }

 private:
  const TypeSpace* sp_;
  std::vector<Group> groups_;
};

template <class Count>
TypeSizeSolution<Count> type_size_solution(const TypeSpace& sp, const Dist& p, double eps) {
  return TypeSizeTables<Count>(sp).solve(p, eps);
}

// ---------------------------------------------------------------------------
// Binary interleaved code
// ---------------------------------------------------------------------------

/// Alternates the A-first order (types (n,0),(n-1,1),...) with the B-first
/// order ((0,n),(1,n-1),...); an even-n middle class is placed once.
template <class Count>
RankedCode<Count> binary_interleave_code(std::shared_ptr<const TypeSpace> space) {
  if (space->m() != 2) throw std::invalid_argument("binary_interleave_code: alphabet size must be 2");
  const std::uint32_t n = space->n();
  RankedCode<Count> code(space, 0);
  code.begin_partition(0);
  for (std::uint32_t j = 0; 2 * j < n; ++j) {
    const std::uint32_t a[2] = {n - j, j};
    const std::uint32_t b[2] = {j, n - j};
    const std::uint32_t pair[2] = {static_cast<std::uint32_t>(space->id_of(a)),
                                   static_cast<std::uint32_t>(space->id_of(b))};
    Count per = space->class_size<Count>(pair[0]);
    code.add_block(pair, Count(per + per));
  }
  if (n % 2 == 0) {
    const std::uint32_t mid[2] = {n / 2, n / 2};
    code.add_type(static_cast<std::uint32_t>(space->id_of(mid)));
  }
  return code;
}

/// Sequence-level interleaved order (indices into SequenceTable), built by
/// alternately taking the next unplaced sequence of each one-sided order.
inline std::vector<std::uint64_t> interleave_sequence_order(std::uint32_t n) {
  SequenceTable table(n, 2);
  std::vector<std::uint64_t> a_order(table.size());
  std::iota(a_order.begin(), a_order.end(), std::uint64_t{0});
  auto ones = [&](std::uint64_t s) { return std::popcount(s); };
  std::stable_sort(a_order.begin(), a_order.end(), [&](auto x, auto y) { return ones(x) < ones(y); });
  std::vector<std::uint64_t> b_order(a_order.rbegin(), a_order.rend());
  std::vector<char> placed(table.size(), 0);
  std::vector<std::uint64_t> out;
  std::size_t ia = 0, ib = 0;
  bool turn_a = true;
  while (out.size() < table.size()) {
    auto& idx = turn_a ? ia : ib;
    const auto& order = turn_a ? a_order : b_order;
    while (idx < order.size() && placed[order[idx]]) ++idx;
    if (idx < order.size()) {
      placed[order[idx]] = 1;
      out.push_back(order[idx]);
    }
    turn_a = !turn_a;
  }
  return out;
}

struct OneBitGap {
  long nR = 0;
  long nR_star = 0;
  bool holds() const { return nR <= nR_star + 1; }
};

template <class Count>
OneBitGap one_bit_gap(std::shared_ptr<const TypeSpace> space, const Dist& p, double eps) {
  OneBitGap g;
  g.nR = epsilon_bits(length_distribution(binary_interleave_code<Count>(space), p), eps);
  g.nR_star = epsilon_bits(length_distribution(optimal_code<Count>(space, p), p), eps);
  return g;
}

// ---------------------------------------------------------------------------
// Code catalog
// ---------------------------------------------------------------------------

enum class CodeKind { Optimal, TypeSize, TwoStageFV, TwoStageFF, Interleave };

inline std::string code_name(CodeKind k) {
  switch (k) {
    case CodeKind::Optimal: return "optimal";
    case CodeKind::TypeSize: return "type-size";
    case CodeKind::TwoStageFV: return "2s-fv";
    case CodeKind::TwoStageFF: return "2s-ff";
    case CodeKind::Interleave: return "interleave";
  }
  return "?";
}

inline CodeKind parse_code_kind(const std::string& s) {
  for (auto k : {CodeKind::Optimal, CodeKind::TypeSize, CodeKind::TwoStageFV, CodeKind::TwoStageFF,
                 CodeKind::Interleave}) {
    if (code_name(k) == s) return k;
  }
  throw std::invalid_argument("unknown code '" + s + "'");
}

template <class Count>
RankedCode<Count> make_code(CodeKind kind, std::shared_ptr<const TypeSpace> space, const Dist& p) {
  switch (kind) {
    case CodeKind::Optimal: return optimal_code<Count>(space, p);
    case CodeKind::TypeSize: return type_size_code<Count>(space);
    case CodeKind::TwoStageFV: return two_stage_code<Count>(space, TwoStageVariant::FV);
    case CodeKind::TwoStageFF: return two_stage_code<Count>(space, TwoStageVariant::FF);
    case CodeKind::Interleave: return binary_interleave_code<Count>(space);
  }
  throw std::invalid_argument("make_code: bad kind");
}

}  // namespace fvc
