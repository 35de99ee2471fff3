#pragma once
// converse_lab.hpp - mixture sources over an entropy sphere, the mixture
// converse bound, the Laplace catalog and the Kraft linear program.

#include "fvc/alphabet_types.hpp"
#include "fvc/gaussian.hpp"
#include "fvc/numeric.hpp"
#include "json.hpp"

#include <Eigen/Dense>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <boost/math/tools/roots.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace fvc {

/// J(P) = H(P) + sqrt(V(P)/n) Q^{-1}(eps), in bits.
inline double j_value(std::span<const double> p, double eps, std::uint32_t n) {
  return entropy(p) + std::sqrt(varentropy(p) / n) * q_inv(eps);
}
inline double j_value(const Dist& p, double eps, std::uint32_t n) { return j_value(p.probs(), eps, n); }

// ---------------------------------------------------------------------------
// Entropy-sphere grid
// ---------------------------------------------------------------------------

struct ManifoldGrid {
  std::vector<Dist> points;
  double gamma = 0.0;
  double eps = 0.0;
  std::uint32_t n = 0;
  double beta_floor = 0.0;
  SupportMask support = 0;
  std::size_t dim = 0;      // |support| - 2
  std::size_t dropped = 0;  // rays lost to the floor, root failures or V filter

  std::size_t size() const { return points.size(); }
};

namespace detail {

/// Orthonormal basis of {z : sum z = 0} in R^d.
inline std::vector<std::vector<double>> helmert_basis(std::size_t d) {
  std::vector<std::vector<double>> out;
  for (std::size_t k = 1; k < d; ++k) {
    std::vector<double> u(d, 0.0);
    double s = 1.0 / std::sqrt(static_cast<double>(k * (k + 1)));
    for (std::size_t i = 0; i < k; ++i) u[i] = s;
    u[k] = -static_cast<double>(k) * s;
    out.push_back(std::move(u));
  }
  return out;
}

/// Root of a continuous f on [lo, hi] with a sign change, to ~1e-15.
template <class F>
double bracket_root(F&& f, double lo, double hi) {
  std::uintmax_t it = 200;
  auto tol = [](double a, double b) { return std::fabs(a - b) <= 1e-15 * std::max(1.0, std::fabs(a)); };
  auto r = boost::math::tools::toms748_solve(f, lo, hi, tol, it);
  return 0.5 * (r.first + r.second);
}

/// First downward crossing of g(r) = 0 along r in (0, rmax], g(0) > 0.
template <class G>
std::optional<double> first_crossing(G&& g, double rmax, int steps = 2000) {
  double prev_r = 0.0, prev = g(0.0);
  for (int i = 1; i <= steps; ++i) {
    double r = rmax * i / steps;
    double v = g(r);
    if (!std::isfinite(v)) break;
    if (prev > 0.0 && v <= 0.0) {
      if (v == 0.0) return r;
      return bracket_root(g, prev_r, r);
    }
    prev_r = r;
    prev = v;
  }
  return std::nullopt;
}

/// Unit directions on the surface of the (d-1)-cube lattice, at least `want`.
inline std::vector<std::vector<double>> cube_directions(std::size_t dims, std::size_t want) {
  for (int side = 1;; ++side) {
    std::vector<std::vector<double>> out;
    std::vector<int> v(dims, -side);
    while (true) {
      int mx = 0;
      for (int c : v) mx = std::max(mx, std::abs(c));
      if (mx == side) {
        std::vector<double> u(v.begin(), v.end());
        double norm = 0.0;
        for (double c : u) norm += c * c;
        norm = std::sqrt(norm);
        for (double& c : u) c /= norm;
        out.push_back(std::move(u));
      }
      std::size_t i = 0;
      while (i < dims && v[i] == side) v[i++] = -side;
      if (i == dims) break;
      ++v[i];
    }
    if (out.size() >= want) return out;
  }
}

}  // namespace detail

/// Points P with support exactly `support`, J(P) = gamma, P(x) >= beta_floor.
inline ManifoldGrid entropy_sphere_grid(std::size_t m, SupportMask support, double gamma, double eps, std::uint32_t n,
                                        std::size_t resolution, double beta_floor = 1e-6) {
  std::vector<std::size_t> sym;
  for (std::size_t x = 0; x < m; ++x) {
    if (support >> x & 1U) sym.push_back(x);
  }
  const std::size_t d = sym.size();
  if (d < 2 || m > kMaxAlphabet || (support >> m) != 0) throw std::invalid_argument("entropy_sphere_grid: bad support");
  if (!(gamma > 0.0 && gamma < std::log2(static_cast<double>(d)) + 1e-12)) {
    throw std::invalid_argument("entropy_sphere_grid: gamma outside (0, log2 |support|)");
  }
  if (n == 0 || resolution == 0) throw std::invalid_argument("entropy_sphere_grid: bad n or resolution");
  const double qi = q_inv(eps);

  ManifoldGrid g;
  g.gamma = gamma;
  g.eps = eps;
  g.n = n;
  g.beta_floor = beta_floor;
  g.support = support;
  g.dim = d - 2;

  auto embed = [&](const std::vector<double>& local) {
    std::vector<double> full(m, 0.0);
    double s = 0.0;
    for (double v : local) s += v;
    for (std::size_t i = 0; i < d; ++i) full[sym[i]] = local[i] / s;
    return Dist(std::move(full));
  };
  auto jl = [&](const std::vector<double>& local) {
    return entropy(local) + std::sqrt(varentropy(local) / n) * qi;
  };
  auto accept = [&](const std::vector<double>& local) {
    double lo = *std::min_element(local.begin(), local.end());
    if (lo < beta_floor) return false;
    if (std::fabs(jl(local) - gamma) > 1e-10) return false;
    if (qi != 0.0 && varentropy(local) < 1e-6) return false;
    return true;
  };

  if (d == 2) {
    auto f = [&](double p) { return jl({p, 1.0 - p}) - gamma; };
    std::vector<double> roots;
    const int steps = 4000;
    double prev_p = 0.0, prev = f(0.0);
    for (int i = 1; i <= steps; ++i) {
      double p = 0.5 * i / steps;
      double v = f(p);
      if (i == steps && std::fabs(v) <= 1e-12) {
        roots.push_back(0.5);
      } else if ((prev < 0.0 && v > 0.0) || (prev > 0.0 && v < 0.0)) {
        roots.push_back(detail::bracket_root(f, prev_p, p));
      } else if (v == 0.0) {
        roots.push_back(p);
      }
      prev_p = p;
      prev = v;
    }
    for (double p : roots) {
      std::vector<double> a = {p, 1.0 - p}, b = {1.0 - p, p};
      if (!accept(a)) {
        ++g.dropped;
        continue;
      }
      g.points.push_back(embed(a));
      if (p != 0.5) g.points.push_back(embed(b));
    }
    return g;
  }

  auto basis = detail::helmert_basis(d);
  std::vector<std::vector<double>> dirs;
  if (d == 3) {
    for (std::size_t j = 0; j < resolution; ++j) {
      double th = 2.0 * M_PI * static_cast<double>(j) / static_cast<double>(resolution);
      dirs.push_back({std::cos(th), std::sin(th)});
    }
  } else {
    dirs = detail::cube_directions(d - 1, resolution);
  }
  const double c = 1.0 / static_cast<double>(d);
  for (const auto& w : dirs) {
    std::vector<double> u(d, 0.0);
    for (std::size_t k = 0; k + 1 < d; ++k) {
      for (std::size_t i = 0; i < d; ++i) u[i] += w[k] * basis[k][i];
    }
    double rmax = std::numeric_limits<double>::infinity();
    for (double ui : u) {
      if (ui < 0.0) rmax = std::min(rmax, -c / ui);
    }
    auto at = [&](double r) {
      std::vector<double> p(d);
      for (std::size_t i = 0; i < d; ++i) p[i] = std::max(0.0, c + r * u[i]);
      return p;
    };
    auto gfun = [&](double r) { return jl(at(r)) - gamma; };
    auto r = detail::first_crossing(gfun, rmax);
    if (!r || !accept(at(*r))) {
      ++g.dropped;
      continue;
    }
    g.points.push_back(embed(at(*r)));
  }
  return g;
}

/// Mean Euclidean nearest-neighbour spacing of the grid (0 for one point).
inline double mean_spacing(const ManifoldGrid& g) {
  if (g.size() < 2) return 0.0;
  double total = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < g.size(); ++j) {
      if (i == j) continue;
      double s = 0.0;
      for (std::size_t x = 0; x < g.points[i].size(); ++x) {
        double dx = g.points[i][x] - g.points[j][x];
        s += dx * dx;
      }
      best = std::min(best, std::sqrt(s));
    }
    total += best;
  }
  return total / static_cast<double>(g.size());
}

/// Discrete volume surrogate: N * (mean spacing)^dim.
inline double grid_volume(const ManifoldGrid& g) {
  double n = static_cast<double>(g.size());
  if (g.dim == 0) return n;
  return n * std::pow(mean_spacing(g), static_cast<double>(g.dim));
}

// ---------------------------------------------------------------------------
// Uniform mixtures
// ---------------------------------------------------------------------------

/// log2 of the mixture probability of one sequence with these counts.
inline double mixture_type_log2_prob(std::span<const std::uint32_t> counts, const ManifoldGrid& g) {
  if (g.points.empty()) throw std::invalid_argument("mixture_type_log2_prob: empty grid");
  if ((support_of(counts) & ~g.support) != 0) return kNegInf;
  std::vector<double> terms;
  terms.reserve(g.size());
  for (const auto& p : g.points) terms.push_back(sequence_log2_prob(counts, p));
  return log2_sum_exp2(terms) - std::log2(static_cast<double>(g.size()));
}
inline double mixture_type_log2_prob(const TypeVector& t, const ManifoldGrid& g) {
  return mixture_type_log2_prob(t.counts, g);
}

/// Mixture information -log2 P(x^n) of every type, sorted, with class masses.
class MixtureTable {
 public:
  MixtureTable(const TypeSpace& sp, const ManifoldGrid& g) : n_(sp.n()) {
    if (g.points.empty() || g.points.front().size() != sp.m()) throw std::invalid_argument("MixtureTable: grid mismatch");
    std::vector<double> terms(g.size());
    const double logN = std::log2(static_cast<double>(g.size()));
    std::vector<std::pair<double, double>> rows;  // (info, class mass)
    rows.reserve(sp.size());
    for (std::size_t id = 0; id < sp.size(); ++id) {
      auto c = sp.counts(id);
      if ((sp.support(id) & ~g.support) != 0) continue;
      for (std::size_t i = 0; i < g.size(); ++i) terms[i] = sequence_log2_prob(c, g.points[i]);
      double lp = log2_sum_exp2(terms) - logN;
      if (lp == kNegInf) continue;
      rows.emplace_back(-lp, std::exp2(sp.log2_size(id) + lp));
    }
    std::sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
    info_.reserve(rows.size());
    above_.reserve(rows.size());
    CompensatedSum s;
    for (const auto& [info, mass] : rows) {
      s.add(mass);
      info_.push_back(info);
      above_.push_back(s.value());
    }
    total_ = s.value();
  }

  std::uint32_t n() const { return n_; }
  double total() const { return total_; }

  /// Mixture probability that -log2 P(X^n) >= threshold.
  double mass_at_least(double threshold) const {
    auto it = std::upper_bound(info_.begin(), info_.end(), threshold, [](double t, double v) { return t > v; });
    std::size_t k = static_cast<std::size_t>(it - info_.begin());
    return k == 0 ? 0.0 : above_[k - 1];
  }

 private:
  std::uint32_t n_;
  std::vector<double> info_;   // descending
  std::vector<double> above_;  // prefix masses
  double total_ = 0.0;
};

/// P(-log2 P(X^n) >= k + tau) - 2^{-tau}, clamped to [0, 1].
inline double converse_epsilon_lower(const MixtureTable& t, double k_bits, double tau) {
  if (!(tau > 0.0)) throw std::invalid_argument("converse_epsilon_lower: tau must be > 0");
  double v = t.mass_at_least(k_bits + tau) - std::exp2(-tau);
  return std::clamp(v, 0.0, 1.0);
}

/// {log2(n)/2} together with a geometric grid on [1, 2 log2 n].
inline std::vector<double> tau_grid(std::uint32_t n, int per_octave = 8) {
  double top = 2.0 * std::log2(static_cast<double>(std::max<std::uint32_t>(n, 2)));
  std::vector<double> out = {0.5 * std::log2(static_cast<double>(std::max<std::uint32_t>(n, 2)))};
  for (int i = 0;; ++i) {
    double v = std::exp2(static_cast<double>(i) / per_octave);
    if (v > top) break;
    out.push_back(v);
  }
  out.push_back(top);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

struct ConverseBound {
  double gamma = 0.0;
  double eps = 0.0;
  std::uint32_t n = 0;
  long k_bits = 0;
  double tau_star = 0.0;
  double bound = 0.0;
};

inline ConverseBound converse_bound(const MixtureTable& t, const ManifoldGrid& g, long k_bits) {
  ConverseBound out;
  out.gamma = g.gamma;
  out.eps = g.eps;
  out.n = t.n();
  out.k_bits = k_bits;
  out.bound = -1.0;
  for (double tau : tau_grid(t.n())) {
    double v = converse_epsilon_lower(t, static_cast<double>(k_bits), tau);
    if (v > out.bound) {
      out.bound = v;
      out.tau_star = tau;
    }
  }
  return out;
}

inline nlohmann::json to_json(const ConverseBound& c) {
  return {{"gamma", c.gamma}, {"eps", c.eps}, {"n", c.n}, {"k_bits", c.k_bits}, {"tau_star", c.tau_star},
          {"bound", c.bound}};
}

/// log2 P(x^n) minus the mixture bound's right side; nullopt when the KL
/// projection onto the grid is not unique or p_min vanishes with dim > 0.
inline std::optional<double> mixture_bound_check(std::span<const std::uint32_t> counts, const ManifoldGrid& g,
                                                 std::size_t dim) {
  if ((support_of(counts) & ~g.support) != 0) throw std::invalid_argument("mixture_bound_check: type outside support");
  std::uint32_t n = 0;
  std::uint32_t cmin = std::numeric_limits<std::uint32_t>::max();
  for (std::size_t x = 0; x < counts.size(); ++x) {
    n += counts[x];
    if (g.support >> x & 1U) cmin = std::min(cmin, counts[x]);
  }
  if (dim > 0 && cmin == 0) return std::nullopt;

  std::vector<std::size_t> idx(g.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::vector<double> div(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) div[i] = kl(counts, g.points[i].probs());
  if (g.size() > 1) {
    std::partial_sort(idx.begin(), idx.begin() + 2, idx.end(), [&](auto a, auto b) { return div[a] < div[b]; });
    if (div[idx[1]] - div[idx[0]] <= 1e-9) {
      double s = 0.0;
      for (std::size_t x = 0; x < counts.size(); ++x) {
        double dx = g.points[idx[0]][x] - g.points[idx[1]][x];
        s += dx * dx;
      }
      if (g.dim == 0 || std::sqrt(s) > 1.5 * mean_spacing(g)) return std::nullopt;
    }
  }
  double nn = static_cast<double>(n);
  double pmin = static_cast<double>(cmin) / nn;
  double rhs = -nn * empirical_entropy(counts) - std::log2(grid_volume(g));
  if (dim > 0) rhs += 0.5 * static_cast<double>(dim) * std::log2(2.0 * M_PI / (pmin * nn));
  return mixture_type_log2_prob(counts, g) - rhs;
}

// ---------------------------------------------------------------------------
// Laplace catalog
// ---------------------------------------------------------------------------

enum class LaplaceCase { Gaussian, Quartic, Simplex, EntropyCurve };

inline std::string laplace_case_name(LaplaceCase c) {
  switch (c) {
    case LaplaceCase::Gaussian: return "gaussian";
    case LaplaceCase::Quartic: return "quartic";
    case LaplaceCase::Simplex: return "simplex";
    case LaplaceCase::EntropyCurve: return "entropy-curve";
  }
  return "?";
}

inline const std::vector<LaplaceCase>& laplace_catalog() {
  static const std::vector<LaplaceCase> all = {LaplaceCase::Gaussian, LaplaceCase::Quartic, LaplaceCase::Simplex,
                                               LaplaceCase::EntropyCurve};
  return all;
}

struct LaplaceResult {
  LaplaceCase which{};
  double n = 0.0;
  double numeric = 0.0;
  double asymptotic = 0.0;
  double rel_err = 0.0;
};

namespace detail {

inline double kl_nats(std::span<const double> t, std::span<const double> p) {
  double s = 0.0;
  for (std::size_t x = 0; x < t.size(); ++x) {
    if (t[x] > 0.0) s += t[x] * std::log(t[x] / p[x]);
  }
  return s;
}

template <class F>
double integrate(F&& f, double a, double b, double tol = 1e-13, double abs_floor = 0.0, unsigned depth = 20) {
  double err = 0.0;
  double v = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, a, b, depth, tol, &err);
  if (!std::isfinite(v) || err > 1e-9 * std::fabs(v) + abs_floor) {
    throw std::runtime_error("laplace: quadrature did not converge (estimate " + std::to_string(v) + ", error " + std::to_string(err) + ")");
  }
  return v;
}

inline constexpr double kSimplexT[3] = {0.5, 0.3, 0.2};

/// Curve of J = J(t) around the centroid, by angle in the Helmert plane.
struct EntropyCurve {
  std::vector<double> t = {0.5, 0.3, 0.2};
  double eps = 0.1;
  std::uint32_t n_grid = 500;
  double gamma = 0.0;
  double theta0 = 0.0;
  std::vector<std::vector<double>> basis = helmert_basis(3);

  EntropyCurve() {
    gamma = j_value(t, eps, n_grid);
    double a = 0.0, b = 0.0;
    for (std::size_t i = 0; i < 3; ++i) {
      a += (t[i] - 1.0 / 3) * basis[0][i];
      b += (t[i] - 1.0 / 3) * basis[1][i];
    }
    theta0 = std::atan2(b, a);
  }

  std::vector<double> dir(double th) const {
    std::vector<double> u(3);
    for (std::size_t i = 0; i < 3; ++i) u[i] = std::cos(th) * basis[0][i] + std::sin(th) * basis[1][i];
    return u;
  }
  std::vector<double> point(double th, double r) const {
    auto u = dir(th);
    for (auto& v : u) v = 1.0 / 3 + r * v;
    return u;
  }
  double radius(double th) const {
    auto u = dir(th);
    double rmax = std::numeric_limits<double>::infinity();
    for (double ui : u) {
      if (ui < 0.0) rmax = std::min(rmax, -(1.0 / 3) / ui);
    }
    auto g = [&](double r) {
      auto p = point(th, r);
      for (auto& v : p) v = std::max(v, 0.0);
      return j_value(p, eps, n_grid) - gamma;
    };
    auto r = first_crossing(g, rmax, 400);
    if (!r) throw std::runtime_error("laplace: entropy curve ray has no root");
    return *r;
  }
  /// dr/dtheta by implicit differentiation of J(c + r u(theta)) = gamma.
  double radius_derivative(double th, double r) const {
    auto p = point(th, r);
    auto u = dir(th), du = dir(th + M_PI / 2);
    double h = entropy(p), v = varentropy(p), q = q_inv(eps);
    double a = 0.0, b = 0.0;
    for (std::size_t i = 0; i < 3; ++i) {
      double l = std::log2(p[i]);
      double dh = -l - 1.0 / M_LN2;
      double dv = l * l + 2.0 * l / M_LN2 + 2.0 * h * (l + 1.0 / M_LN2);
      double dj = dh + q * dv / (2.0 * std::sqrt(n_grid * v));
      a += dj * u[i];
      b += dj * du[i];
    }
    return -r * b / a;
  }
};

}  // namespace detail

/// Numeric and Laplace-asymptotic values of int g e^{-n f} for a catalog case.
inline LaplaceResult laplace_check(LaplaceCase which, double n) {
  if (!(n > 0.0)) throw std::invalid_argument("laplace_check: n must be > 0");
  LaplaceResult r;
  r.which = which;
  r.n = n;
  const double inf = std::numeric_limits<double>::infinity();
  switch (which) {
    case LaplaceCase::Gaussian: {
      r.numeric = detail::integrate([&](double x) { return std::exp(-n * x * x / 2); }, -inf, 0.0) +
                  detail::integrate([&](double x) { return std::exp(-n * x * x / 2); }, 0.0, inf);
      r.asymptotic = std::sqrt(2.0 * M_PI / n);
      break;
    }
    case LaplaceCase::Quartic: {
      auto f = [&](double x) { return std::exp(-n * (x * x / 2 + x * x * x * x)); };
      r.numeric = detail::integrate(f, -inf, 0.0) + detail::integrate(f, 0.0, inf);
      r.asymptotic = std::sqrt(2.0 * M_PI / n);
      break;
    }
    case LaplaceCase::Simplex: {
      const double* t = detail::kSimplexT;
      auto basis = detail::helmert_basis(3);
      auto h = [&](double z1, double z2) {
        double p[3];
        for (int i = 0; i < 3; ++i) {
          p[i] = t[i] + z1 * basis[0][i] + z2 * basis[1][i];
          if (p[i] <= 0.0) return 0.0;
        }
        return std::exp(-n * detail::kl_nats({t, 3}, {p, 3}));
      };
      // Beyond |z| = L the integrand is below e^{-100}.
      const double L = std::min(1.0, std::sqrt(200.0 / n));
      auto inner = [&](double z1) {
        auto g = [&](double z2) { return h(z1, z2); };
        return detail::integrate(g, -L, 0.0, 1e-12, 1e-16, 12) + detail::integrate(g, 0.0, L, 1e-12, 1e-16, 12);
      };
      r.numeric = detail::integrate(inner, -L, 0.0, 1e-12, 0.0, 12) + detail::integrate(inner, 0.0, L, 1e-12, 0.0, 12);
      Eigen::Matrix<double, 3, 2> F;
      for (int i = 0; i < 3; ++i) {
        F(i, 0) = basis[0][i];
        F(i, 1) = basis[1][i];
      }
      Eigen::Vector3d a(1 / t[0], 1 / t[1], 1 / t[2]);
      Eigen::Matrix2d M = F.transpose() * a.asDiagonal() * F;
      r.asymptotic = (2.0 * M_PI / n) / std::sqrt(M.determinant());
      break;
    }
    case LaplaceCase::EntropyCurve: {
      static const detail::EntropyCurve curve;
      auto integrand = [&](double th) {
        double r0 = curve.radius(th);
        double dr = curve.radius_derivative(th, r0);
        auto p = curve.point(th, r0);
        return std::exp(-n * detail::kl_nats(curve.t, p)) * std::sqrt(dr * dr + r0 * r0);
      };
      double th0 = curve.theta0;
      const double W = std::min(M_PI, 8.0 * std::sqrt(200.0 / n));
      r.numeric = detail::integrate(integrand, th0 - W, th0, 1e-12, 1e-15, 15) +
                  detail::integrate(integrand, th0, th0 + W, 1e-12, 1e-15, 15);
      // Unit tangent at t: dP/dtheta = r' u + r u'.
      double r0 = curve.radius(th0);
      double dr = curve.radius_derivative(th0, r0);
      auto u = curve.dir(th0), du = curve.dir(th0 + M_PI / 2);
      Eigen::Vector3d tan;
      for (int i = 0; i < 3; ++i) tan[i] = dr * u[i] + r0 * du[i];
      tan.normalize();
      double quad = 0.0;
      for (int i = 0; i < 3; ++i) quad += tan[i] * tan[i] / curve.t[i];
      r.asymptotic = std::sqrt(2.0 * M_PI / n) / std::sqrt(quad);
      break;
    }
  }
  r.rel_err = std::fabs(r.numeric / r.asymptotic - 1.0);
  return r;
}

/// Closed form of the simplex case: a Dirichlet integral, in the plane's own
/// area measure.
inline double simplex_laplace_exact(double n) {
  const double* t = detail::kSimplexT;
  double lg = -std::lgamma(n + 3.0);
  for (int i = 0; i < 3; ++i) lg += std::lgamma(n * t[i] + 1.0) - n * t[i] * std::log(t[i]);
  return std::sqrt(3.0) * std::exp(lg);
}

// ---------------------------------------------------------------------------
// Kraft linear program
// ---------------------------------------------------------------------------

struct KraftProfile {
  std::vector<int> k;

  explicit KraftProfile(std::vector<int> lengths) : k(std::move(lengths)) {
    if (k.empty()) throw std::invalid_argument("KraftProfile: empty");
    for (std::size_t i = 1; i < k.size(); ++i) {
      if (k[i] <= k[i - 1]) throw std::invalid_argument("KraftProfile: lengths must increase");
    }
  }
};

/// t* = 1 / sum_i (1 - 2^{k_{i-1} - k_i}), with k_{-1} = -inf.
inline double kraft_lp_optimal(const KraftProfile& p) {
  double s = 1.0;
  for (std::size_t i = 1; i < p.k.size(); ++i) s += 1.0 - std::exp2(p.k[i - 1] - p.k[i]);
  return 1.0 / s;
}

/// The same LP by enumerating every vertex of its feasible polytope.
inline double kraft_lp_bruteforce(const KraftProfile& p) {
  const int L = static_cast<int>(p.k.size());
  const int vars = L + 1;  // alpha_0..alpha_{L-1}, t
  // Rows a.x >= b.
  std::vector<Eigen::VectorXd> rows;
  std::vector<double> rhs;
  for (int i = 0; i < L; ++i) {
    Eigen::VectorXd a = Eigen::VectorXd::Zero(vars);
    for (int j = 0; j <= i; ++j) a[j] = std::exp2(p.k[j] - p.k[i]);
    a[L] = -1.0;
    rows.push_back(a);
    rhs.push_back(0.0);
  }
  {
    Eigen::VectorXd a = Eigen::VectorXd::Zero(vars);
    for (int j = 0; j < L; ++j) a[j] = -1.0;
    rows.push_back(a);
    rhs.push_back(-1.0);
  }
  for (int j = 0; j <= L; ++j) {
    Eigen::VectorXd a = Eigen::VectorXd::Zero(vars);
    a[j] = 1.0;
    rows.push_back(a);
    rhs.push_back(0.0);
  }
  const int R = static_cast<int>(rows.size());
  double best = -std::numeric_limits<double>::infinity();
  std::vector<int> pick(vars);
  std::iota(pick.begin(), pick.end(), 0);
  while (true) {
    Eigen::MatrixXd A(vars, vars);
    Eigen::VectorXd b(vars);
    for (int i = 0; i < vars; ++i) {
      A.row(i) = rows[pick[i]].transpose();
      b[i] = rhs[pick[i]];
    }
    Eigen::FullPivLU<Eigen::MatrixXd> lu(A);
    if (lu.rank() == vars) {
      Eigen::VectorXd x = lu.solve(b);
      bool ok = true;
      for (int r = 0; r < R && ok; ++r) ok = rows[r].dot(x) >= rhs[r] - 1e-12;
      if (ok) best = std::max(best, x[L]);
    }
    int i = vars - 1;
    while (i >= 0 && pick[i] == R - vars + i) --i;
    if (i < 0) break;
    ++pick[i];
    for (int j = i + 1; j < vars; ++j) pick[j] = pick[j - 1] + 1;
  }
  return best;
}

/// `count` profiles of `levels` lengths from {0..k_max}, evenly spaced in the
/// lexicographic order of all such subsets.
inline std::vector<KraftProfile> kraft_profiles(int levels, int k_max, std::size_t count) {
  const int pool = k_max + 1;
  auto choose = [](int a, int b) -> std::uint64_t {
    if (b < 0 || b > a) return 0;
    std::uint64_t r = 1;
    for (int i = 1; i <= b; ++i) r = r * static_cast<std::uint64_t>(a - b + i) / static_cast<std::uint64_t>(i);
    return r;
  };
  const std::uint64_t total = choose(pool, levels);
  count = static_cast<std::size_t>(std::min<std::uint64_t>(count, total));
  std::vector<KraftProfile> out;
  for (std::size_t j = 0; j < count; ++j) {
    std::uint64_t rank = j * total / count;
    std::vector<int> k;
    int next = 0;
    for (int slot = 0; slot < levels; ++slot) {
      for (int v = next;; ++v) {
        std::uint64_t c = choose(pool - v - 1, levels - slot - 1);
        if (rank < c) {
          k.push_back(v);
          next = v + 1;
          break;
        }
        rank -= c;
      }
    }
    out.emplace_back(std::move(k));
  }
  return out;
}

}  // namespace fvc
