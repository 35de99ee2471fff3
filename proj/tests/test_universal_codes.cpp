#include <catch_amalgamated.hpp>

#include "fvc/universal_codes.hpp"

#include <map>
#include <string>

using namespace fvc;

namespace {

std::vector<std::string> sequence_strings(const std::vector<std::uint64_t>& order, std::uint32_t n) {
  SequenceTable table(n, 2);
  std::vector<std::string> out;
  for (auto s : order) {
    std::string w;
    for (auto d : table.digits(s)) w.push_back(d == 0 ? 'A' : 'B');
    out.push_back(w);
  }
  return out;
}

/// Sequence-level optimal bits: sort all sequences by probability.
long brute_optimal_bits(std::uint32_t n, const Dist& p, double eps) {
  SequenceTable table(n, p.size());
  std::vector<double> pr(table.size());
  for (std::uint64_t s = 0; s < table.size(); ++s) pr[s] = table.probability(s, p);
  std::sort(pr.begin(), pr.end(), std::greater<>());
  LengthDistribution ld;
  ld.n = n;
  for (std::uint64_t r = 1; r <= pr.size(); ++r) {
    auto l = static_cast<std::size_t>(string_length_of_rank(r));
    if (ld.mass.size() <= l) ld.mass.resize(l + 1, 0.0);
    ld.mass[l] += pr[r - 1];
  }
  return epsilon_bits(ld, eps);
}

}  // namespace

TEST_CASE("two-stage examples") {
  auto sp2 = make_type_space(2, 2);
  Dist u({0.5, 0.5});
  auto fv = two_stage_rate<BigNat>(*sp2, u, 0.3, TwoStageVariant::FV);
  REQUIRE(fv.k == 0);
  REQUIRE(two_stage_rate<BigNat>(*sp2, u, 0.2, TwoStageVariant::FV).k == 1);
  REQUIRE(type_index_bits(3, 2) == 2);
  REQUIRE(two_stage_rate<BigNat>(*make_type_space(3, 2), u, 0.1, TwoStageVariant::FV).s == 2);

  Dist point({0.0, 1.0, 0.0});
  for (std::uint32_t n : {1u, 5u, 30u}) {
    auto sp = make_type_space(n, 3);
    auto ff = two_stage_rate<BigNat>(*sp, point, 0.1, TwoStageVariant::FF);
    REQUIRE(ff.k == 0);
    REQUIRE(ff.s == 0);
  }
}

TEST_CASE("two-stage formulas equal their codes and FV dominates FF") {
  const std::vector<std::vector<double>> dists = {{0.7, 0.3}, {0.5, 0.5}, {0.5, 0.3, 0.2}, {0.2, 0.2, 0.6}};
  for (const auto& d : dists) {
    Dist p(d);
    for (std::uint32_t n = 1; n <= 40; n += 3) {
      auto sp = make_type_space(n, p.size());
      auto fv_code = length_distribution(two_stage_code<BigNat>(sp, TwoStageVariant::FV), p);
      auto ff_code = length_distribution(two_stage_code<BigNat>(sp, TwoStageVariant::FF), p);
      for (double eps : {0.01, 0.05, 0.1, 0.2, 0.5}) {
        auto fv = two_stage_rate<BigNat>(*sp, p, eps, TwoStageVariant::FV);
        auto ff = two_stage_rate<BigNat>(*sp, p, eps, TwoStageVariant::FF);
        REQUIRE(fv.k <= ff.k);
        REQUIRE(fv.k >= 0);
        REQUIRE(fv.bits() == epsilon_bits(fv_code, eps));
        REQUIRE(ff.bits() == epsilon_bits(ff_code, eps));
        auto fvl = two_stage_rate<long double>(*sp, p, eps, TwoStageVariant::FV);
        REQUIRE(fvl.bits() == fv.bits());
      }
    }
  }
}

TEST_CASE("type size code structure") {
  auto sp = make_type_space(3, 2);
  auto code = type_size_code<BigNat>(sp);
  REQUIRE(code.header_bits() == 2);
  REQUIRE(code.partitions().size() == 3);
  std::vector<std::vector<std::vector<std::uint32_t>>> parts;
  std::vector<std::vector<BigNat>> sizes;
  for (const auto& part : code.partitions()) {
    parts.emplace_back();
    sizes.emplace_back();
    for (std::size_t b = part.begin; b < part.end; ++b) {
      auto c = sp->counts(code.members(code.blocks()[b])[0]);
      parts.back().emplace_back(c.begin(), c.end());
      sizes.back().push_back(code.blocks()[b].count);
    }
  }
  REQUIRE(parts[0] == std::vector<std::vector<std::uint32_t>>{{3, 0}});
  REQUIRE(parts[1] == std::vector<std::vector<std::uint32_t>>{{0, 3}});
  REQUIRE(parts[2] == std::vector<std::vector<std::uint32_t>>{{2, 1}, {1, 2}});
  REQUIRE(sizes[2] == std::vector<BigNat>{3, 3});

  // Rank conservation per support.
  for (std::uint32_t n = 1; n <= 9; ++n) {
    auto s3 = make_type_space(n, 3);
    auto c3 = type_size_code<BigNat>(s3);
    c3.validate();
    for (const auto& part : c3.partitions()) {
      BigNat want = 0;
      for (std::size_t id = 0; id < s3->size(); ++id) {
        if (s3->support(id) == part.key) want += type_class_size(s3->type(id));
      }
      REQUIRE(part.total == want);
    }
  }
}

TEST_CASE("type size code is universal") {
  auto sp = make_type_space(6, 2);
  auto a = type_size_code<BigNat>(sp);
  auto b = type_size_code<BigNat>(sp);
  REQUIRE(a.blocks().size() == b.blocks().size());
  for (std::size_t i = 0; i < a.blocks().size(); ++i) {
    REQUIRE(a.members(a.blocks()[i])[0] == b.members(b.blocks()[i])[0]);
  }
  Dist p({0.9, 0.1}), q({0.2, 0.8});
  auto ms = type_size_solution<BigNat>(*sp, p, 0.1);
  auto mq = type_size_solution<BigNat>(*sp, q, 0.1);
  REQUIRE(ms.bits == epsilon_bits(length_distribution(a, p), 0.1));
  REQUIRE(mq.bits == epsilon_bits(length_distribution(a, q), 0.1));
}

TEST_CASE("type size formula equals the code's rate") {
  const std::vector<std::vector<double>> dists = {{0.7, 0.3}, {0.5, 0.5}, {0.95, 0.05}, {0.5, 0.3, 0.2},
                                                  {1.0 / 3, 1.0 / 3, 1.0 / 3}, {0.0, 0.6, 0.4}, {1.0, 0.0}};
  for (const auto& d : dists) {
    Dist p(d);
    for (std::uint32_t n = 1; n <= 8; ++n) {
      auto sp = make_type_space(n, p.size());
      auto code = length_distribution(type_size_code<BigNat>(sp), p);
      BigNat prevM = 0;
      long prevBits = 1 << 30;
      for (double eps : {0.01, 0.05, 0.1, 0.2, 0.3, 0.5, 0.8}) {
        auto sol = type_size_solution<BigNat>(*sp, p, eps);
        REQUIRE(sol.bits == epsilon_bits(code, eps));
        REQUIRE(sol.rate() == epsilon_rate(code, eps, n));
        REQUIRE(sol.bits <= prevBits);
        if (prevM != 0) REQUIRE(sol.M_star <= prevM);
        prevM = sol.M_star;
        prevBits = sol.bits;
        auto soll = type_size_solution<long double>(*sp, p, eps);
        REQUIRE(soll.bits == sol.bits);
        // Size balance, exactly: below + lambda * tie = M.
        for (const auto& s : sol.supports) {
          if (s.saturated) continue;
          REQUIRE(s.lambda_num < s.lambda_den);
          REQUIRE(s.lambda_star >= 0.0);
          REQUIRE(s.lambda_star < 1.0);
          REQUIRE(s.tau_star >= 1);
          REQUIRE(s.eps_code >= 0.0);
          REQUIRE(s.eps_code <= 1.0 + 1e-12);
        }
      }
    }
  }
}

TEST_CASE("type size worked examples") {
  Dist point({1.0, 0.0, 0.0});
  auto sp = make_type_space(7, 3);
  for (double eps : {0.01, 0.5}) {
    auto sol = type_size_solution<BigNat>(*sp, point, eps);
    REQUIRE(sol.M_star == 1);
    REQUIRE(sol.bits == 3);
  }
  Dist p({0.7, 0.3});
  auto s4 = make_type_space(4, 2);
  auto sol = type_size_solution<BigNat>(*s4, p, 0.1);
  REQUIRE(sol.bits == epsilon_bits(brute_force_eval(type_size_code<BigNat>(s4), p), 0.1));

  Dist q({0.5, 0.3, 0.2});
  auto s6 = make_type_space(6, 3);
  auto sol6 = type_size_solution<BigNat>(*s6, q, 0.2);
  REQUIRE(sol6.bits == epsilon_bits(brute_force_eval(type_size_code<BigNat>(s6), q), 0.2));
}

TEST_CASE("interleaved order matches the displayed n = 3 order") {
  auto order = sequence_strings(interleave_sequence_order(3), 3);
  REQUIRE(order == std::vector<std::string>{"AAA", "BBB", "AAB", "BBA", "ABA", "BAB", "BAA", "ABB"});
  REQUIRE_THROWS(binary_interleave_code<BigNat>(make_type_space(3, 3)));

  // Type-level code and sequence-level order give identical lengths.
  for (std::uint32_t n = 1; n <= 12; ++n) {
    auto sp = make_type_space(n, 2);
    auto code = binary_interleave_code<BigNat>(sp);
    code.validate();
    auto seq = interleave_sequence_order(n);
    SequenceTable table(n, 2);
    auto words = brute_force_codewords(code);
    std::map<std::pair<std::size_t, long>, int> want, got;
    for (std::size_t r = 0; r < seq.size(); ++r) {
      ++want[{sp->id_of(table.type_counts(seq[r])), string_length_of_rank(std::uint64_t{r + 1})}];
    }
    for (std::uint64_t s = 0; s < table.size(); ++s) {
      ++got[{sp->id_of(table.type_counts(s)), static_cast<long>(words[s].size())}];
    }
    REQUIRE(want == got);
  }
}

TEST_CASE("one-bit gap") {
  Dist p({0.9, 0.1});
  auto g = one_bit_gap<BigNat>(make_type_space(3, 2), p, 0.05);
  REQUIRE(g.nR == 2);
  REQUIRE(g.nR_star == 2);
  for (double a : {0.05, 0.3, 0.5, 0.8}) {
    for (double eps : {0.01, 0.2, 0.5}) {
      Dist q({a, 1.0 - a});
      auto g1 = one_bit_gap<BigNat>(make_type_space(1, 2), q, eps);
      REQUIRE(g1.holds());
      for (std::uint32_t n = 2; n <= 10; ++n) {
        REQUIRE(one_bit_gap<BigNat>(make_type_space(n, 2), q, eps).nR_star == brute_optimal_bits(n, q, eps));
      }
    }
  }
}

TEST_CASE("type size beats two-stage for moderate n") {
  Dist p({0.5, 0.3, 0.2});
  std::vector<long> gaps;
  for (std::uint32_t n : {25u, 50u, 100u, 150u, 200u}) {
    auto sp = make_type_space(n, 3);
    long fv = two_stage_rate<BigNat>(*sp, p, 0.1, TwoStageVariant::FV).bits();
    long ts = type_size_solution<BigNat>(*sp, p, 0.1).bits;
    gaps.push_back(fv - ts);
  }
  REQUIRE(gaps.back() > 0);
  REQUIRE(gaps.back() >= gaps.front());
}

TEST_CASE("code catalog names") {
  for (auto k : {CodeKind::Optimal, CodeKind::TypeSize, CodeKind::TwoStageFV, CodeKind::TwoStageFF,
                 CodeKind::Interleave}) {
    REQUIRE(parse_code_kind(code_name(k)) == k);
  }
  REQUIRE_THROWS(parse_code_kind("huffman"));
}
