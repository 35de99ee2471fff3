// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on failure.

#include "fvc/asymptotics.hpp"
#include "fvc/converse_lab.hpp"
#include "fvc/guessing.hpp"
#include "fvc/universal_codes.hpp"

#include <bit>
#include <chrono>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>

using namespace fvc;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

const std::vector<double> kEps = {0.01, 0.05, 0.1, 0.2, 0.3, 0.5};

/// 10 binary and 12 ternary sources, some with zeros.
std::vector<Dist> oracle_sources() {
  std::vector<Dist> out;
  for (double a : {0.0, 0.05, 0.1, 0.2, 0.3, 0.4, 0.5, 0.65, 0.8, 0.95}) out.emplace_back(std::vector<double>{a, 1.0 - a});
  const std::vector<std::vector<double>> tri = {
      {0.5, 0.3, 0.2},    {1.0 / 3, 1.0 / 3, 1.0 / 3}, {0.1, 0.1, 0.8}, {0.0, 0.4, 0.6},  {0.6, 0.2, 0.2},
      {0.25, 0.35, 0.4},  {0.7, 0.25, 0.05},           {0.0, 0.0, 1.0}, {0.45, 0.45, 0.1}, {0.2, 0.0, 0.8},
      {0.05, 0.15, 0.8}, {0.34, 0.33, 0.33}};
  for (const auto& d : tri) out.emplace_back(d);
  return out;
}

std::vector<CodeKind> codes_for(std::size_t m) {
  std::vector<CodeKind> k = {CodeKind::Optimal, CodeKind::TypeSize, CodeKind::TwoStageFV, CodeKind::TwoStageFF};
  if (m == 2) k.push_back(CodeKind::Interleave);
  return k;
}

long bits_of_ranked_probs(const std::vector<double>& by_rank, std::uint32_t n, double eps) {
  LengthDistribution ld;
  ld.n = n;
  for (std::size_t r = 0; r < by_rank.size(); ++r) {
    auto l = static_cast<std::size_t>(std::bit_width(r + 1) - 1);
    if (ld.mass.size() <= l) ld.mass.resize(l + 1, 0.0);
    ld.mass[l] += by_rank[r];
  }
  return epsilon_bits(ld, eps);
}

Outcome sandwich() {
  long cases = 0, bad = 0;
  for (std::size_t m = 2; m <= 4; ++m) {
    for (std::uint32_t n = 1; n <= 100; ++n) {
      TypeSpace sp(n, m);
      for (std::size_t id = 0; id < sp.size(); ++id) {
        ++cases;
        double lg = static_cast<double>(count_traits<BigNat>::log2(sp.class_size<BigNat>(id)));
        double nf = n_f_bound(sp.counts(id));
        if (!(nf + c_minus(m) <= lg + 1e-12 && lg <= nf + 1e-12)) ++bad;
      }
    }
  }
  return {bad == 0, fmt("%ld types, %ld violations", cases, bad)};
}

Outcome one_extra_bit() {
  long cases = 0, bad = 0, worst = -100;
  for (int a = 1; a <= 19; ++a) {
    Dist p({a / 20.0, 1.0 - a / 20.0});
    for (std::uint32_t n = 1; n <= 14; ++n) {
      SequenceTable table(n, 2);
      std::vector<double> prob(table.size());
      for (std::uint64_t s = 0; s < table.size(); ++s) {
        int k = std::popcount(s);
        prob[s] = std::pow(p[0], n - k) * std::pow(p[1], k);
      }
      std::vector<double> sorted = prob;
      std::sort(sorted.begin(), sorted.end(), std::greater<>());
      std::vector<double> inter;
      for (auto s : interleave_sequence_order(n)) inter.push_back(prob[s]);
      for (double e : {0.01, 0.05, 0.1, 0.2, 0.5}) {
        ++cases;
        long gap = bits_of_ranked_probs(inter, n, e) - bits_of_ranked_probs(sorted, n, e);
        worst = std::max(worst, gap);
        if (gap > 1) ++bad;
      }
    }
    for (std::uint32_t n = 15; n <= 200; ++n) {
      auto sp = make_type_space(n, 2);
      for (double e : {0.01, 0.05, 0.1, 0.2, 0.5}) {
        ++cases;
        auto g = one_bit_gap<BigNat>(sp, p, e);
        worst = std::max(worst, g.nR - g.nR_star);
        if (!g.holds()) ++bad;
      }
    }
  }
  return {bad == 0, fmt("%ld points, largest gap %ld bit(s), %ld violations", cases, worst, bad)};
}

Outcome oracle_equivalence() {
  long cases = 0, bad = 0;
  double worst = 0.0;
  auto sources = oracle_sources();
  for (const auto& p : sources) {
    for (std::uint32_t n = 1; n <= 8; ++n) {
      auto sp = make_type_space(n, p.size());
      for (auto kind : codes_for(p.size())) {
        ++cases;
        auto code = make_code<BigNat>(kind, sp, p);
        double tv = total_variation(length_distribution(code, p), brute_force_eval(code, p));
        worst = std::max(worst, tv);
        if (!(tv <= 1e-9)) ++bad;
      }
    }
  }
  return {bad == 0 && sources.size() >= 20,
          fmt("%zu sources, %ld (code, n) pairs, max TV %.3g", sources.size(), cases, worst)};
}

Outcome type_size_identity() {
  long cases = 0, bad = 0;
  for (const auto& p : oracle_sources()) {
    for (std::uint32_t n = 1; n <= 8; ++n) {
      auto sp = make_type_space(n, p.size());
      auto code = type_size_code<BigNat>(sp);
      auto exact = length_distribution(code, p);
      auto brute = brute_force_eval(code, p);
      TypeSizeTables<BigNat> tables(*sp);
      for (double e : kEps) {
        ++cases;
        auto sol = tables.solve(p, e);
        if (sol.bits != epsilon_bits(brute, e) || sol.bits != epsilon_bits(exact, e) ||
            sol.rate() != epsilon_rate(exact, e, n)) {
          ++bad;
        }
      }
    }
  }
  return {bad == 0, fmt("%ld points, %ld mismatches", cases, bad)};
}

Outcome third_order_slopes() {
  Dist p({0.5, 0.3, 0.2});
  const double eps = 0.1;
  const std::vector<std::pair<CodeKind, std::pair<double, double>>> bands = {
      {CodeKind::TypeSize, {-0.35, 0.35}},
      {CodeKind::TwoStageFV, {0.65, 1.35}},
      {CodeKind::TwoStageFF, {0.65, 1.35}},
      {CodeKind::Optimal, {-0.85, -0.15}}};
  std::vector<std::vector<FitPoint>> pts(bands.size());
  for (auto n : geometric_grid(512, 4096)) {
    auto sp = make_type_space(n, 3);
    for (std::size_t i = 0; i < bands.size(); ++i) {
      pts[i].push_back({static_cast<double>(n), static_cast<double>(exact_rate_bits(bands[i].first, sp, p, eps))});
    }
  }
  bool ok = true;
  std::string d;
  for (std::size_t i = 0; i < bands.size(); ++i) {
    double s = third_order_fit(p, eps, pts[i]).slope;
    ok = ok && s >= bands[i].second.first && s <= bands[i].second.second;
    d += fmt("%s%s %.3f", i ? ", " : "", code_name(bands[i].first).c_str(), s);
  }
  return {ok, "slopes " + d};
}

Outcome entropy_deviation() {
  long cases = 0, bad = 0;
  double worst = 0.0;
  for (const auto& d : std::vector<std::vector<double>>{{0.3, 0.7}, {0.25, 0.35, 0.4}}) {
    Dist p(d);
    double beta = natural_beta(p);
    for (std::uint32_t n : {50u, 200u, 1000u}) {
      TypeSpace sp(n, p.size());
      for (double delta : {-3.0, -1.0, 0.0, 1.0, 3.0}) {
        ++cases;
        auto c = entropy_deviation_check(sp, p, delta, beta);
        worst = std::max(worst, c.deviation / c.bound);
        if (!c.holds()) ++bad;
      }
    }
  }
  return {bad == 0, fmt("%ld points, max deviation/bound %.3g", cases, worst)};
}

Outcome guessing() {
  long eq_cases = 0, le_cases = 0, bad = 0;
  for (const auto& p : oracle_sources()) {
    for (std::uint32_t n = 1; n <= 8; ++n) {
      auto sp = make_type_space(n, p.size());
      std::vector<GuessingFunction<BigNat>> guessers;
      for (auto kind : codes_for(p.size())) {
        auto code = make_code<BigNat>(kind, sp, p);
        auto g = code_to_guesser(code);
        auto ld = length_distribution(code, p);
        for (double e : kEps) {
          ++le_cases;
          if (count_traits<BigNat>::floor_log2(guessing_tail(g, p, e)) > epsilon_bits(ld, e)) ++bad;
        }
        guessers.push_back(std::move(g));
      }
      guessers.push_back(flatten_by_rank(type_size_code<BigNat>(sp)));
      for (const auto& g : guessers) {
        auto ld = length_distribution(guesser_to_code(g), p);
        for (double e : kEps) {
          ++eq_cases;
          if (count_traits<BigNat>::floor_log2(guessing_tail(g, p, e)) != epsilon_bits(ld, e)) ++bad;
        }
      }
    }
  }
  return {bad == 0, fmt("%ld equalities, %ld inequalities, %ld violations", eq_cases, le_cases, bad)};
}

Outcome converse() {
  Dist p({0.5, 0.3, 0.2});
  const double eps = 0.1;
  bool ok = true;
  std::string d;
  for (std::uint32_t n : {100u, 200u, 400u}) {
    auto grid = entropy_sphere_grid(3, 0b111, j_value(p, eps, n), eps, n, 120);
    auto sp = make_type_space(n, 3);
    TypeSizeTables<BigNat> tables(*sp);
    long k = 0;
    for (const auto& q : grid.points) k = std::max(k, tables.solve(q, eps).bits);
    MixtureTable mix(*sp, grid);
    long drop = static_cast<long>(std::ceil(2.0 * std::log2(static_cast<double>(n))));
    double at_k = converse_bound(mix, grid, k).bound;
    double below = converse_bound(mix, grid, k - drop).bound;
    ok = ok && at_k <= eps + 1e-9 && below > eps && !grid.points.empty();
    d += fmt("%sn=%u k=%ld: %.4f, k-%ld: %.4f", d.empty() ? "" : "; ", n, k, at_k, drop, below);
  }
  return {ok, d};
}

Outcome kraft() {
  long cases = 0;
  double worst = 0.0;
  for (int levels = 1; levels <= 6; ++levels) {
    for (const auto& prof : kraft_profiles(levels, 20, levels <= 4 ? 17 : 16)) {
      ++cases;
      worst = std::max(worst, std::fabs(kraft_lp_optimal(prof) - kraft_lp_bruteforce(prof)));
    }
  }
  return {cases == 100 && worst <= 1e-9, fmt("%ld profiles, max |closed - LP| %.3g", cases, worst)};
}

Outcome laplace() {
  bool ok = true;
  double gauss = 0.0;
  for (double n : {1.0, 64.0, 1024.0, 4096.0}) gauss = std::max(gauss, laplace_check(LaplaceCase::Gaussian, n).rel_err);
  ok = gauss <= 1e-10;
  std::string d = fmt("gaussian %.3g", gauss);
  for (auto c : {LaplaceCase::Quartic, LaplaceCase::Simplex, LaplaceCase::EntropyCurve}) {
    double prev = laplace_check(c, 64).rel_err, lo = 1.0, hi = 0.0;
    for (double n = 128; n <= 1024; n *= 2) {
      double cur = laplace_check(c, n).rel_err;
      lo = std::min(lo, cur / prev);
      hi = std::max(hi, cur / prev);
      prev = cur;
    }
    ok = ok && lo >= 0.3 && hi <= 0.8;
    d += fmt(", %s ratios [%.3f, %.3f]", laplace_case_name(c).c_str(), lo, hi);
  }
  return {ok, d};
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    std::function<Outcome()> run;
    double limit_s;
  };
  const std::vector<Criterion> all = {
      {"type-class size sandwich, m=2..4, n<=100", sandwich, 60.0},
      {"interleaved code within one bit of optimal", one_extra_bit, 0.0},
      {"type-level lengths equal sequence enumeration", oracle_equivalence, 0.0},
      {"type size rate formula equals its code", type_size_identity, 0.0},
      {"third-order slopes, m=3, n=512..4096", third_order_slopes, 600.0},
      {"empirical entropy deviation within B/sqrt(n)", entropy_deviation, 0.0},
      {"guessing and coding equivalence", guessing, 0.0},
      {"mixture converse consistent and active", converse, 0.0},
      {"Kraft LP closed form equals brute-force LP", kraft, 0.0},
      {"Laplace approximation catalog", laplace, 0.0},
  };
  int failed = 0;
  for (std::size_t i = 0; i < all.size(); ++i) {
    auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = all[i].run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (all[i].limit_s > 0.0 && secs > all[i].limit_s) {
      o.pass = false;
      o.detail += fmt(" (over the %.0f s limit)", all[i].limit_s);
    }
    std::printf("%s [%zu] %s: %s (%.1f s)\n", o.pass ? "PASS" : "FAIL", i + 1, all[i].name, o.detail.c_str(), secs);
    std::fflush(stdout);
    failed += !o.pass;
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(all.size()) - failed, all.size());
  return failed == 0 ? 0 : 1;
}
