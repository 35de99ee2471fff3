#pragma once
// cli.hpp - batch commands behind the fvlab tool: rates, sweep, converse,
// verify and laplace. Output is CSV or JSON, rows sorted by (n, eps, code).

#include "fvc/asymptotics.hpp"
#include "fvc/converse_lab.hpp"
#include "fvc/guessing.hpp"
#include "fvc/universal_codes.hpp"
#include "json.hpp"

#include <cstdio>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

namespace fvc::cli {

struct RunConfig {
  std::string command;
  std::size_t m = 0;
  std::vector<double> dist;
  std::string n_spec;
  std::vector<double> eps = {0.1};
  std::vector<std::string> codes;
  std::vector<double> gamma;
  std::string format = "csv";
  std::string out;
  std::uint32_t max_n = 8;
  std::size_t resolution = 120;
  std::optional<long> k_bits;
};

// ---------------------------------------------------------------------------
// Tables
// ---------------------------------------------------------------------------

using Cell = std::variant<long, double, std::string>;
using Json = nlohmann::ordered_json;

inline std::string format_real(double x) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

class Table {
 public:
  explicit Table(std::vector<std::string> columns) : columns_(std::move(columns)) {}

  void add(std::vector<Cell> row) {
    if (row.size() != columns_.size()) throw std::logic_error("Table: row width");
    rows_.push_back(std::move(row));
  }
  /// Free-form records emitted after the rows (CSV: "# name {json}").
  void note(const std::string& name, Json j) { notes_.emplace_back(name, std::move(j)); }

  std::size_t size() const { return rows_.size(); }

  void write(std::ostream& os, const std::string& format) const {
    if (format == "csv") {
      for (std::size_t i = 0; i < columns_.size(); ++i) os << (i ? "," : "") << columns_[i];
      os << "\n";
      for (const auto& r : rows_) {
        for (std::size_t i = 0; i < r.size(); ++i) os << (i ? "," : "") << csv_cell(r[i]);
        os << "\n";
      }
      for (const auto& [name, j] : notes_) os << "# " << name << " " << j.dump() << "\n";
    } else if (format == "json") {
      auto arr = Json::array();
      for (const auto& r : rows_) {
        Json o = Json::object();
        for (std::size_t i = 0; i < r.size(); ++i) o[columns_[i]] = json_cell(r[i]);
        arr.push_back(std::move(o));
      }
      for (const auto& [name, j] : notes_) {
        Json o = j;
        o["record"] = name;
        arr.push_back(std::move(o));
      }
      os << arr.dump(1) << "\n";
    } else {
      throw std::invalid_argument("unknown format '" + format + "'");
    }
  }

  static Json json_cell(const Cell& c) {
    if (auto* l = std::get_if<long>(&c)) return *l;
    if (auto* d = std::get_if<double>(&c)) return rounded(*d);
    return std::get<std::string>(c);
  }
  static Json rounded(double d) {
    if (!std::isfinite(d)) return format_real(d);
    return std::stod(format_real(d));
  }

 private:
  static std::string csv_cell(const Cell& c) {
    if (auto* l = std::get_if<long>(&c)) return std::to_string(*l);
    if (auto* d = std::get_if<double>(&c)) return format_real(*d);
    const auto& s = std::get<std::string>(c);
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char ch : s) {
      if (ch == '"') q += '"';
      q += ch;
    }
    return q + "\"";
  }

  std::vector<std::string> columns_;
  std::vector<std::vector<Cell>> rows_;
  std::vector<std::pair<std::string, Json>> notes_;
};

// ---------------------------------------------------------------------------
// Parsing helpers
// ---------------------------------------------------------------------------

/// "n", "a,b,c" or "a:b" (geometric, two points per doubling).
inline std::vector<std::uint32_t> parse_n(const std::string& s) {
  if (s.empty()) throw std::invalid_argument("--n is required");
  auto num = [](const std::string& t) {
    std::size_t pos = 0;
    long v = std::stol(t, &pos);
    if (pos != t.size() || v <= 0 || v > 1000000) throw std::invalid_argument("bad n '" + t + "'");
    return static_cast<std::uint32_t>(v);
  };
  if (auto c = s.find(':'); c != std::string::npos) return geometric_grid(num(s.substr(0, c)), num(s.substr(c + 1)));
  std::vector<std::uint32_t> out;
  std::stringstream ss(s);
  for (std::string t; std::getline(ss, t, ',');) out.push_back(num(t));
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

inline std::string dist_string(const Dist& p) {
  std::string s;
  for (std::size_t x = 0; x < p.size(); ++x) s += (x ? "," : "") + format_real(p[x]);
  return s;
}

inline Dist make_dist(const RunConfig& c) {
  if (c.dist.empty()) throw std::invalid_argument("--dist is required");
  if (c.m != 0 && c.m != c.dist.size()) throw std::invalid_argument("--m does not match the length of --dist");
  CompensatedSum s;
  for (double x : c.dist) s.add(x);
  if (std::fabs(s.value() - 1.0) > 1e-9) throw std::invalid_argument("--dist must sum to 1");
  // Renormalize within the accepted slack.
  std::vector<double> p = c.dist;
  for (double& x : p) x /= s.value();
  return Dist(std::move(p));
}

inline std::vector<CodeKind> parse_codes(const std::vector<std::string>& names, std::size_t m, bool allow_optimal = true) {
  std::vector<CodeKind> out;
  std::vector<std::string> list = names;
  if (list.empty() || (list.size() == 1 && list[0] == "all")) {
    list = {"optimal", "type-size", "2s-fv", "2s-ff"};
    if (m == 2) list.push_back("interleave");
    if (!allow_optimal) list.erase(list.begin());
  }
  for (const auto& s : list) {
    auto k = parse_code_kind(s);
    if (k == CodeKind::Interleave && m != 2) throw std::invalid_argument("interleave needs a binary alphabet");
    if (k == CodeKind::Optimal && !allow_optimal) throw std::invalid_argument("optimal is not a universal code");
    if (std::find(out.begin(), out.end(), k) == out.end()) out.push_back(k);
  }
  std::sort(out.begin(), out.end(), [](CodeKind a, CodeKind b) { return code_name(a) < code_name(b); });
  return out;
}

inline std::vector<double> sorted_eps(std::vector<double> e) {
  for (double x : e) check_eps(x);
  std::sort(e.begin(), e.end());
  e.erase(std::unique(e.begin(), e.end()), e.end());
  return e;
}

// ---------------------------------------------------------------------------
// Commands
// ---------------------------------------------------------------------------

inline int run_rates(const RunConfig& c, Table& t, std::ostream&) {
  Dist p = make_dist(c);
  auto codes = parse_codes(c.codes, p.size());
  auto eps = sorted_eps(c.eps);
  t = Table({"n", "m", "dist", "eps", "code", "nR_bits", "rate", "predicted_rate"});
  for (auto n : parse_n(c.n_spec)) {
    auto sp = make_type_space(n, p.size());
    for (double e : eps) {
      for (auto k : codes) {
        long bits = exact_rate_bits(k, sp, p, e);
        t.add({static_cast<long>(n), static_cast<long>(p.size()), dist_string(p), e, code_name(k), bits,
               static_cast<double>(bits) / n, predicted_rate(p, n, e, variant_of(k))});
      }
    }
  }
  return 0;
}

inline int run_sweep(const RunConfig& c, Table& t, std::ostream&) {
  Dist p = make_dist(c);
  auto codes = parse_codes(c.codes, p.size());
  auto eps = sorted_eps(c.eps);
  auto ns = parse_n(c.n_spec);
  t = Table({"n", "m", "dist", "eps", "code", "variant", "nR_bits", "rate", "y"});
  std::map<std::pair<double, CodeKind>, std::vector<FitPoint>> pts;
  const char* vname[] = {"optimal", "type-size", "two-stage"};
  for (auto n : ns) {
    auto sp = make_type_space(n, p.size());
    for (double e : eps) {
      for (auto k : codes) {
        long bits = exact_rate_bits(k, sp, p, e);
        pts[{e, k}].push_back({static_cast<double>(n), static_cast<double>(bits)});
        t.add({static_cast<long>(n), static_cast<long>(p.size()), dist_string(p), e, code_name(k),
               std::string(vname[static_cast<int>(variant_of(k))]), bits, static_cast<double>(bits) / n,
               third_order_residual(p, n, e, static_cast<double>(bits))});
      }
    }
  }
  if (ns.size() >= 5) {
    for (double e : eps) {
      for (auto k : codes) {
        auto f = third_order_fit(p, e, pts[{e, k}]);
        double target = third_order_coefficient(variant_of(k), p.support_size());
        t.note("fit", {{"code", code_name(k)},
                       {"variant", vname[static_cast<int>(variant_of(k))]},
                       {"eps", Table::rounded(e)},
                       {"dist", dist_string(p)},
                       {"n_min", ns.front()},
                       {"n_max", ns.back()},
                       {"slope", Table::rounded(f.slope)},
                       {"intercept", Table::rounded(f.intercept)},
                       {"residual", Table::rounded(f.residual)},
                       {"target_c", target},
                       {"pass", std::fabs(f.slope - target) <= 0.35}});
      }
    }
  }
  return 0;
}

inline int run_converse(const RunConfig& c, Table& t, std::ostream&) {
  if (c.gamma.empty() && c.dist.empty()) throw std::invalid_argument("converse needs --gamma or --dist");
  std::optional<Dist> p;
  if (!c.dist.empty()) p = make_dist(c);
  const std::size_t m = p ? p->size() : c.m;
  if (m < 2) throw std::invalid_argument("--m is required");
  auto codes = c.k_bits ? std::vector<CodeKind>{} : parse_codes(c.codes.empty() ? std::vector<std::string>{"type-size"} : c.codes, m, false);
  auto eps = sorted_eps(c.eps);
  const SupportMask full = static_cast<SupportMask>((std::uint64_t{1} << m) - 1);
  t = Table({"n", "eps", "code", "gamma", "m", "k_bits", "tau_star", "bound", "grid_points", "dropped"});
  for (auto n : parse_n(c.n_spec)) {
    auto sp = make_type_space(n, m);
    std::optional<TypeSizeTables<BigNat>> ts;
    for (double e : eps) {
      std::vector<double> gammas = c.gamma;
      if (gammas.empty()) gammas.push_back(j_value(*p, e, n));
      std::sort(gammas.begin(), gammas.end());
      for (double g : gammas) {
        auto grid = entropy_sphere_grid(m, full, g, e, n, c.resolution);
        if (grid.points.empty()) throw std::runtime_error("converse: empty grid at gamma " + format_real(g));
        MixtureTable mix(*sp, grid);
        auto emit = [&](const std::string& name, long k) {
          auto b = converse_bound(mix, grid, k);
          t.add({static_cast<long>(n), e, name, g, static_cast<long>(m), k, b.tau_star, b.bound,
                 static_cast<long>(grid.size()), static_cast<long>(grid.dropped)});
        };
        if (c.k_bits) {
          emit("given", *c.k_bits);
          continue;
        }
        for (auto kind : codes) {
          long k = 0;
          for (const auto& q : grid.points) {
            long b;
            if (kind == CodeKind::TypeSize && prefer_exact(n, m)) {
              if (!ts) ts.emplace(*sp);
              b = ts->solve(q, e).bits;
            } else {
              b = exact_rate_bits(kind, sp, q, e);
            }
            k = std::max(k, b);
          }
          emit(code_name(kind), k);
        }
      }
    }
  }
  return 0;
}

namespace detail {

struct CheckTally {
  std::string name;
  long cases = 0;
  long violations = 0;
};

}  // namespace detail

/// The invariant suite at oracle scale; n up to max_n.
inline int run_verify(const RunConfig& c, Table& t, std::ostream& err) {
  const std::uint32_t N = c.max_n;
  if (N == 0) throw std::invalid_argument("--max-n must be positive");
  const std::uint32_t small = std::min<std::uint32_t>(N, 8);
  std::vector<detail::CheckTally> all;
  auto fail = [&](detail::CheckTally& k, const std::string& what) {
    ++k.violations;
    if (k.violations <= 5) err << "violation [" << k.name << "]: " << what << "\n";
  };
  const std::vector<std::vector<double>> dists = {{0.5, 0.5}, {0.8, 0.2}, {0.05, 0.95}, {0.5, 0.3, 0.2},
                                                  {0.1, 0.1, 0.8}, {0.0, 0.4, 0.6}, {1.0 / 3, 1.0 / 3, 1.0 / 3}};
  const std::vector<double> eps_list = {0.01, 0.05, 0.1, 0.2, 0.5};

  {
    detail::CheckTally k{"type-size-sandwich"};
    for (std::size_t m = 2; m <= 4; ++m) {
      for (std::uint32_t n = 1; n <= N; ++n) {
        TypeSpace sp(n, m);
        for (std::size_t id = 0; id < sp.size(); ++id) {
          ++k.cases;
          double nf = n_f_bound(sp.counts(id));
          double lg = static_cast<double>(count_traits<BigNat>::log2(sp.class_size<BigNat>(id)));
          if (!(nf + c_minus(m) <= lg + 1e-12 && lg <= nf + 1e-12)) {
            fail(k, "type " + format_counts(sp.counts(id)));
          }
        }
      }
    }
    all.push_back(k);
  }
  {
    detail::CheckTally k{"oracle-equivalence"};
    for (const auto& d : dists) {
      Dist p(d);
      for (std::uint32_t n = 1; n <= small; ++n) {
        auto sp = make_type_space(n, p.size());
        for (auto kind : parse_codes({}, p.size())) {
          ++k.cases;
          auto code = make_code<BigNat>(kind, sp, p);
          double tv = total_variation(length_distribution(code, p), brute_force_eval(code, p));
          if (!(tv <= 1e-9)) fail(k, code_name(kind) + " n=" + std::to_string(n) + " tv=" + format_real(tv));
        }
      }
    }
    all.push_back(k);
  }
  {
    detail::CheckTally k{"type-size-formula"};
    for (const auto& d : dists) {
      Dist p(d);
      for (std::uint32_t n = 1; n <= small; ++n) {
        auto sp = make_type_space(n, p.size());
        auto ld = length_distribution(type_size_code<BigNat>(sp), p);
        for (double e : eps_list) {
          ++k.cases;
          if (type_size_solution<BigNat>(*sp, p, e).bits != epsilon_bits(ld, e)) {
            fail(k, "n=" + std::to_string(n) + " eps=" + format_real(e));
          }
        }
      }
    }
    all.push_back(k);
  }
  {
    detail::CheckTally k{"one-bit"};
    for (int a = 1; a <= 19; ++a) {
      Dist p({a / 20.0, 1.0 - a / 20.0});
      for (std::uint32_t n = 1; n <= N; ++n) {
        auto sp = make_type_space(n, 2);
        for (double e : eps_list) {
          ++k.cases;
          auto g = one_bit_gap<BigNat>(sp, p, e);
          if (!g.holds()) fail(k, "P(A)=" + format_real(p[0]) + " n=" + std::to_string(n) + " eps=" + format_real(e));
        }
      }
    }
    all.push_back(k);
  }
  {
    detail::CheckTally k{"guessing"};
    for (const auto& d : dists) {
      Dist p(d);
      for (std::uint32_t n = 1; n <= small; ++n) {
        auto sp = make_type_space(n, p.size());
        for (auto kind : parse_codes({}, p.size())) {
          auto code = make_code<BigNat>(kind, sp, p);
          auto g = code_to_guesser(code);
          auto code_ld = length_distribution(code, p);
          auto induced_ld = length_distribution(guesser_to_code(g), p);
          for (double e : eps_list) {
            ++k.cases;
            long fl = count_traits<BigNat>::floor_log2(guessing_tail(g, p, e));
            if (fl != epsilon_bits(induced_ld, e) || fl > epsilon_bits(code_ld, e)) {
              fail(k, code_name(kind) + " n=" + std::to_string(n) + " eps=" + format_real(e));
            }
          }
        }
      }
    }
    all.push_back(k);
  }
  {
    detail::CheckTally k{"kraft-lp"};
    for (int levels = 1; levels <= 6; ++levels) {
      for (const auto& prof : kraft_profiles(levels, 20, levels <= 4 ? 17 : 16)) {
        ++k.cases;
        double a = kraft_lp_optimal(prof), b = kraft_lp_bruteforce(prof);
        if (!(std::fabs(a - b) <= 1e-9)) fail(k, "closed " + format_real(a) + " vs lp " + format_real(b));
      }
    }
    all.push_back(k);
  }

  t = Table({"check", "max_n", "cases", "violations", "status"});
  int rc = 0;
  for (const auto& k : all) {
    t.add({k.name, static_cast<long>(N), k.cases, k.violations, std::string(k.violations ? "FAIL" : "PASS")});
    if (k.violations) rc = 1;
  }
  return rc;
}

inline int run_laplace(const RunConfig& c, Table& t, std::ostream& err) {
  std::vector<std::uint32_t> ns = c.n_spec.empty() ? std::vector<std::uint32_t>{64, 128, 256, 512, 1024} : parse_n(c.n_spec);
  t = Table({"case", "n", "numeric", "asymptotic", "rel_err", "ratio", "status"});
  int rc = 0;
  for (auto which : laplace_catalog()) {
    double prev = 0.0;
    std::uint32_t prev_n = 0;
    for (auto n : ns) {
      auto r = laplace_check(which, n);
      const bool exact = which == LaplaceCase::Gaussian;
      double ratio = !exact && prev_n != 0 && n == 2 * prev_n && prev > 0.0 ? r.rel_err / prev : std::nan("");
      std::string status = "PASS";
      if (exact) {
        if (!(r.rel_err <= 1e-10)) status = "FAIL";
      } else if (std::isfinite(ratio) && prev_n >= 64 && !(ratio >= 0.3 && ratio <= 0.8)) {
        status = "FAIL";
      }
      if (status == "FAIL") {
        rc = 1;
        err << "violation [laplace]: " << laplace_case_name(which) << " n=" << n << " rel_err=" << format_real(r.rel_err)
            << "\n";
      }
      t.add({laplace_case_name(which), static_cast<long>(n), r.numeric, r.asymptotic, r.rel_err,
             std::isfinite(ratio) ? Cell(ratio) : Cell(std::string("")), status});
      prev = r.rel_err;
      prev_n = n;
    }
  }
  return rc;
}

/// Runs one command; the report goes to `out`, diagnostics to `err`.
inline int run(const RunConfig& c, std::ostream& out, std::ostream& err) {
  if (c.format != "csv" && c.format != "json") throw std::invalid_argument("--format must be csv or json");
  Table t({});
  int rc;
  if (c.command == "rates") {
    rc = run_rates(c, t, err);
  } else if (c.command == "sweep") {
    rc = run_sweep(c, t, err);
  } else if (c.command == "converse") {
    rc = run_converse(c, t, err);
  } else if (c.command == "verify") {
    rc = run_verify(c, t, err);
  } else if (c.command == "laplace") {
    rc = run_laplace(c, t, err);
  } else {
    throw std::invalid_argument("unknown command '" + c.command + "'");
  }
  t.write(out, c.format);
  return rc;
}

}  // namespace fvc::cli
