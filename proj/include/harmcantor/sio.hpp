#pragma once

// T_{μ^m}(1)(x) off the support: treecode and direct summation, the far-field
// comparison experiment, the boundedness sweep and the Riesz contrast.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "cantor.hpp"
#include "common.hpp"
#include "quad.hpp"

namespace harmcantor {

struct TreecodeOptions {
  double tol = 1e-6;
  double c_open = 8.0;
  std::uint64_t max_effort = 2000000000ULL;
  bool direct = false;  ///< disable the far-field shortcut
};

/// Σ over level-m balls of (1/r_m) ∫_{B̃} K(x-ξ) dm_d(ξ). A level-q subtree
/// of mass r_q^{d-1} is replaced by K(x - c)·mass when
/// C_open r_q / dist(x, B_q)^d <= tol, the per-unit-mass form of the
/// far-field error r ∫ dν/|x-ξ|^d; the total error is then <= tol.
template <int D>
QuadratureEstimate potential_eval(const CantorTree<D>& tree, int m, const KernelSpec& kernel, const Point<D>& x,
                                  const TreecodeOptions& opt = {}) {
  if (kernel.dim() != D) throw std::invalid_argument("potential_eval: dimension mismatch");
  const auto& s = tree.schedule();
  if (m < 0 || m > tree.depth()) throw std::out_of_range("potential_eval: level beyond schedule depth");
  const double rm = s.radius(m);
  const double leaf_tol = opt.tol * std::pow(rm, D);
  QuadratureEstimate q{0.0, 0.0, 0, opt.direct ? "direct" : "treecode"};
  std::uint64_t leaves = 0, shortcuts = 0;
  tree.traverse(m, [&](int level, const Point<D>& c) {
    const double dc = distance<D>(x, c);
    if (level == m) {
      if (!(dc > rm)) throw std::domain_error("potential_eval: x touches the support");
      const auto b = integrate_kernel_over_ball_exterior<D>(kernel, Ball<D>(c, rm), x, leaf_tol);
      q.value += b.value / rm;
      q.error += b.error / rm;
      q.effort += b.effort;
      ++leaves;
      if (q.effort > opt.max_effort) throw QuadratureError("potential_eval: effort cap exceeded", q);
      return false;
    }
    if (!opt.direct) {
      const double dist = dc - s.inflated_radius(level);
      if (dist > 0 && opt.c_open * s.radius(level) / std::pow(dist, D) <= opt.tol) {
        Point<D> y = x - c;
        const double mass = s.ball_mass(level);
        q.value += kernel(y.data()) * mass;
        q.error += opt.tol * mass;
        ++q.effort;
        ++shortcuts;
        return false;
      }
    }
    return true;
  });
  q.effort = std::max<std::uint64_t>(q.effort, 1);
  return q;
}

/// Same sum with no far-field shortcut.
template <int D>
QuadratureEstimate potential_direct(const CantorTree<D>& tree, int m, const KernelSpec& kernel, const Point<D>& x,
                                    double tol = 1e-6) {
  TreecodeOptions o;
  o.tol = tol;
  o.direct = true;
  return potential_eval<D>(tree, m, kernel, x, o);
}

/// Point masses with a declared support region.
template <int D>
struct DiscreteMeasure {
  std::vector<Point<D>> points;
  std::vector<double> weights;
  std::variant<Ball<D>, Cube<D>> region;

  double total() const {
    double s = 0.0;
    for (double w : weights) s += w;
    return s;
  }
  bool valid() const {
    if (points.size() != weights.size()) return false;
    for (std::size_t i = 0; i < points.size(); ++i) {
      if (weights[i] < 0) return false;
      const auto& p = points[i];
      if (const auto* b = std::get_if<Ball<D>>(&region)) {
        if (distance<D>(p, b->center) > b->radius * (1 + 1e-12)) return false;
      } else {
        const auto& c = std::get<Cube<D>>(region);
        for (int j = 0; j < D; ++j)
          if (std::abs(p[j] - c.center[j]) > c.side / 2 * (1 + 1e-12)) return false;
      }
    }
    return true;
  }
  double integrate(const KernelSpec& k, const Point<D>& x) const {
    double s = 0.0;
    for (std::size_t i = 0; i < points.size(); ++i) {
      const Point<D> y = x - points[i];
      s += weights[i] * k(y.data());
    }
    return s;
  }
  double inverse_moment(const Point<D>& x) const {
    double s = 0.0;
    for (std::size_t i = 0; i < points.size(); ++i) s += weights[i] / std::pow(distance<D>(x, points[i]), D);
    return s;
  }
};

struct FarfieldSample {
  double lhs = 0.0;
  double rhs = 0.0;
  double ratio = 0.0;
};

/// One comparison: LHS = |∫K(x-ξ)dν1 - ∫K(x-ξ)dν2| and
/// RHS = (R r^{d-1})^{1/d} ∫_Q dν1/|x-ξ|^d + r ∫_B dν2/|x-ξ|^d.
template <int D>
FarfieldSample farfield_compare(const KernelSpec& kernel, double R, double r, const DiscreteMeasure<D>& nu1,
                                const DiscreteMeasure<D>& nu2, const Point<D>& x) {
  if (!nu1.valid() || !nu2.valid()) throw std::invalid_argument("farfield_compare: measure outside its region");
  const auto* Q = std::get_if<Cube<D>>(&nu1.region);
  const auto* B = std::get_if<Ball<D>>(&nu2.region);
  if (!Q || !B) throw std::invalid_argument("farfield_compare: nu1 must live on a cube and nu2 on a ball");
  const AmbientSpace space(D);
  const double side = std::pow(space.kappa() * R * std::pow(r, D - 1), 1.0 / D);
  if (std::abs(Q->side - side) > 1e-12 * side) throw std::invalid_argument("farfield_compare: cube side mismatch");
  if (distance<D>(Q->center, B->center) > 1e-12 * side || std::abs(B->radius - 2 * r) > 1e-12 * r)
    throw std::invalid_argument("farfield_compare: B must be B(x0, 2r)");
  const double t1 = nu1.total(), t2 = nu2.total();
  if (std::abs(t1 - t2) > 1e-12 * std::max(1.0, std::max(t1, t2)))
    throw std::invalid_argument("farfield_compare: total masses differ");
  if (Q->distance_to(x) < side / 8) throw std::invalid_argument("farfield_compare: x too close to Q");
  FarfieldSample f;
  f.lhs = std::abs(nu1.integrate(kernel, x) - nu2.integrate(kernel, x));
  f.rhs = std::pow(R * std::pow(r, D - 1), 1.0 / D) * nu1.inverse_moment(x) + r * nu2.inverse_moment(x);
  f.ratio = f.rhs > 0 ? f.lhs / f.rhs : 0.0;
  return f;
}

struct FarfieldReport {
  std::uint64_t trials = 0;
  double empirical_constant = 0.0;  ///< sup LHS/RHS
  std::vector<FarfieldSample> samples;
};

/// Random configurations: up to 8 atoms on each side with equal totals,
/// x at distance in [s/8, 10 s] from Q.
template <int D>
FarfieldReport farfield_scan(const KernelSpec& kernel, double R, double r, std::uint64_t trials, std::uint64_t seed,
                             unsigned threads = default_threads()) {
  const AmbientSpace space(D);
  const double side = std::pow(space.kappa() * R * std::pow(r, D - 1), 1.0 / D);
  FarfieldReport rep;
  rep.trials = trials;
  rep.samples.resize(trials);
  parallel_for(trials, threads, [&](std::size_t t) {
    CounterRng rng(seed, t);
    Point<D> x0{};
    DiscreteMeasure<D> nu1{{}, {}, Cube<D>(x0, side)}, nu2{{}, {}, Ball<D>(x0, 2 * r)};
    const int n1 = 1 + static_cast<int>(rng.below(8)), n2 = 1 + static_cast<int>(rng.below(8));
    for (int i = 0; i < n1; ++i) {
      Point<D> p;
      for (auto& v : p) v = rng.uniform(-side / 2, side / 2);
      nu1.points.push_back(p);
      nu1.weights.push_back(rng.uniform(0.1, 1.0));
    }
    for (int i = 0; i < n2; ++i) {
      const double rad = 2 * r * std::pow(rng.uniform(), 1.0 / D);
      nu2.points.push_back(rad * rng.direction<D>());
      nu2.weights.push_back(rng.uniform(0.1, 1.0));
    }
    const double scale = nu1.total() / nu2.total();
    for (auto& w : nu2.weights) w *= scale;
    // x: a point at the requested distance from Q along a random direction.
    const double target = side / 8 * std::exp(rng.uniform(0.0, std::log(80.0)));
    const Point<D> dir = rng.direction<D>();
    double lo = 0.0, hi = target + side * D;
    for (int it = 0; it < 100; ++it) {
      const double mid = 0.5 * (lo + hi);
      (Cube<D>(x0, side).distance_to(mid * dir) < target ? lo : hi) = mid;
    }
    rep.samples[t] = farfield_compare<D>(kernel, R, r, nu1, nu2, hi * dir);
  });
  for (const auto& s : rep.samples) rep.empirical_constant = std::max(rep.empirical_constant, s.ratio);
  return rep;
}

struct SweepConfig {
  int m = -1;  ///< fixed level; < 0 selects the smallest m with r_m < ε/(2d)
  double eps_min = 1e-3;
  double eps_max = 1.0;
  int eps_count = 13;
  int points_per_eps = 50;
  std::uint64_t seed = 42;
  TreecodeOptions treecode;
  unsigned threads = default_threads();

  std::vector<double> eps_grid() const {
    std::vector<double> g;
    for (int i = 0; i < eps_count; ++i) {
      const double t = eps_count == 1 ? 0.0 : static_cast<double>(i) / (eps_count - 1);
      g.push_back(eps_max * std::pow(eps_min / eps_max, t));
    }
    return g;
  }
};

struct EvalRecord {
  std::uint64_t index = 0;
  double eps_nominal = 0.0;
  double eps_true = 0.0;
  int m = 0;
  std::vector<double> x;
  double value = 0.0;
  double error = 0.0;
  std::uint64_t effort = 0;
  bool ok = true;
  std::string failure;
};

struct EvalReport {
  std::string kernel_id;
  int d = 0;
  int k = 0;
  long M = 0;
  std::vector<EvalRecord> records;
  std::vector<double> eps_grid;
  std::vector<double> max_abs_per_eps;
  std::vector<double> max_abs_per_decade;  ///< decade 0 holds the largest ε
  double loglog_slope = 0.0;
  bool all_finite = false;
  bool hypothesis_ok = false;
  bool uniform_bound_ok = false;  ///< smallest decade <= 2 x largest decade
  bool slope_ok = false;
  bool admissible = false;
  bool pass = false;  ///< only meaningful for admissible kernels
};

/// Level used for a given ε.
template <int D>
int sweep_level(const RadiusSchedule& s, const SweepConfig& cfg, double eps) {
  if (cfg.m >= 0) return cfg.m;
  for (int m = 0; m <= s.depth(); ++m)
    if (s.radius(m) < eps / (2.0 * D)) return m;
  throw std::invalid_argument("sweep: no level within the schedule satisfies r_m < eps/(2d)");
}

/// Rejects configurations that break r_m < ε/(2d) for some ε. Returns a
/// message, empty when valid.
template <int D>
std::string validate_sweep(const CantorTree<D>& tree, const SweepConfig& cfg) {
  if (!(cfg.eps_min > 0) || !(cfg.eps_max >= cfg.eps_min)) return "eps range must satisfy 0 < eps-min <= eps-max";
  if (cfg.eps_count < 1 || cfg.points_per_eps < 1) return "eps count and points per eps must be >= 1";
  if (cfg.m > tree.depth()) return "m exceeds the schedule depth";
  for (double e : cfg.eps_grid()) {
    int m;
    try {
      m = sweep_level<D>(tree.schedule(), cfg, e);
    } catch (const std::exception& ex) {
      return ex.what();
    }
    if (!(tree.schedule().radius(m) < e / (2.0 * D))) {
      char buf[160];
      std::snprintf(buf, sizeof buf, "hypothesis violated: r_%d = %.6g is not < eps/(2d) = %.6g", m,
                    tree.schedule().radius(m), e / (2.0 * D));
      return buf;
    }
  }
  return {};
}

/// Least-squares slope of log y against log x.
inline double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  const double den = n * sxx - sx * sx;
  return den == 0 ? 0.0 : (n * sxy - sx * sy) / den;
}

/// For every ε: x = c + (r_m + ε)ω with c a random level-m center, so the
/// ball at c is at distance ε; x is redrawn while its true distance to the
/// support is below ε/2. The true distance is reported.
template <int D>
EvalReport boundedness_sweep(const CantorTree<D>& tree, const KernelSpec& kernel, const SweepConfig& cfg) {
  if (const auto msg = validate_sweep<D>(tree, cfg); !msg.empty()) throw std::invalid_argument(msg);
  EvalReport rep;
  rep.kernel_id = kernel.id();
  rep.d = D;
  rep.k = kernel.k();
  rep.M = tree.schedule().base();
  rep.admissible = kernel.admissible();
  rep.eps_grid = cfg.eps_grid();
  const std::size_t per = cfg.points_per_eps;
  const std::size_t total = per * rep.eps_grid.size();
  rep.records.resize(total);
  for (int l = 0; l < tree.depth(); ++l) tree.layout(l);
  parallel_for(total, cfg.threads, [&](std::size_t i) {
    const double eps = rep.eps_grid[i / per];
    const int m = sweep_level<D>(tree.schedule(), cfg, eps);
    EvalRecord& rec = rep.records[i];
    rec.index = i;
    rec.eps_nominal = eps;
    rec.m = m;
    CounterRng rng(cfg.seed, i);
    const double rm = tree.schedule().radius(m);
    Point<D> x{};
    double true_dist = 0.0;
    for (int attempt = 0; attempt < 1000; ++attempt) {
      Point<D> c{};
      for (int l = 0; l < m; ++l) {
        const auto& lay = tree.layout(l);
        c = c + lay.offsets[rng.below(lay.offsets.size())];
      }
      x = c + (rm + eps) * rng.direction<D>();
      true_dist = tree.distance_to_support(x, m);
      if (true_dist >= eps / 2) break;
    }
    rec.x.assign(x.begin(), x.end());
    rec.eps_true = true_dist;
    if (!(true_dist >= eps / 2)) {
      rec.ok = false;
      rec.failure = "no admissible evaluation point";
      return;
    }
    try {
      const auto q = potential_eval<D>(tree, m, kernel, x, cfg.treecode);
      rec.value = q.value;
      rec.error = q.error;
      rec.effort = q.effort;
    } catch (const std::exception& ex) {
      rec.ok = false;
      rec.failure = ex.what();
    }
  });
  // Aggregates.
  const int decades =
      std::max(1, static_cast<int>(std::floor(std::log10(cfg.eps_max / cfg.eps_min) + 1e-9)));
  rep.max_abs_per_eps.assign(rep.eps_grid.size(), 0.0);
  rep.max_abs_per_decade.assign(decades, 0.0);
  rep.all_finite = true;
  rep.hypothesis_ok = true;
  for (const auto& r : rep.records) {
    const std::size_t e = r.index / per;
    if (!r.ok || !std::isfinite(r.value)) {
      rep.all_finite = false;
      continue;
    }
    if (!(tree.schedule().radius(r.m) < r.eps_nominal / (2.0 * D))) rep.hypothesis_ok = false;
    rep.max_abs_per_eps[e] = std::max(rep.max_abs_per_eps[e], std::abs(r.value));
    int dec = static_cast<int>(std::floor(std::log10(cfg.eps_max / r.eps_nominal) + 1e-9));
    dec = std::clamp(dec, 0, decades - 1);
    rep.max_abs_per_decade[dec] = std::max(rep.max_abs_per_decade[dec], std::abs(r.value));
  }
  bool positive = true;
  for (double v : rep.max_abs_per_eps) positive = positive && v > 0;
  rep.loglog_slope = positive && rep.eps_grid.size() > 1 ? loglog_slope(rep.eps_grid, rep.max_abs_per_eps) : 0.0;
  rep.uniform_bound_ok = rep.max_abs_per_decade.back() <= 2.0 * rep.max_abs_per_decade.front();
  rep.slope_ok = rep.loglog_slope > -0.15 && rep.loglog_slope < 0.15;
  rep.pass = rep.all_finite && rep.hypothesis_ok && rep.uniform_bound_ok && rep.slope_ok && positive;
  return rep;
}

/// The same sweep with the coordinate Riesz kernel x_1/|x|^d. A measurement:
/// `pass` is cleared since no pass criterion applies.
template <int D>
EvalReport riesz_contrast(const CantorTree<D>& tree, const SweepConfig& cfg) {
  auto rep = boundedness_sweep<D>(tree, riesz_kernel(D), cfg);
  rep.pass = false;
  return rep;
}

inline nlohmann::json sweep_summary(const EvalReport& r) {
  nlohmann::json j{{"kernel_id", r.kernel_id},
                   {"d", r.d},
                   {"k", r.k},
                   {"M", r.M},
                   {"eps_grid", r.eps_grid},
                   {"max_abs_per_eps", r.max_abs_per_eps},
                   {"max_abs_per_decade", r.max_abs_per_decade},
                   {"loglog_slope", r.loglog_slope},
                   {"all_finite", r.all_finite},
                   {"hypothesis_ok", r.hypothesis_ok},
                   {"uniform_bound_ok", r.uniform_bound_ok},
                   {"slope_ok", r.slope_ok},
                   {"admissible", r.admissible}};
  if (r.admissible)
    j["pass"] = r.pass;
  else
    j["pass"] = nullptr;
  return j;
}

/// kernel_id, d, k, M, m, eps_nominal, eps_true, x coords, value, error, effort.
inline void write_sweep_csv(std::ostream& os, const EvalReport& r) {
  os << "kernel_id,d,k,M,m,eps_nominal,eps_true";
  for (int j = 0; j < r.d; ++j) os << ",x" << j;
  os << ",value,error,effort\n";
  char buf[64];
  auto put = [&](double v) {
    std::snprintf(buf, sizeof buf, "%.17g", v);
    os << ',' << buf;
  };
  for (const auto& rec : r.records) {
    os << r.kernel_id << ',' << r.d << ',' << r.k << ',' << r.M << ',' << rec.m;
    put(rec.eps_nominal);
    put(rec.eps_true);
    for (double v : rec.x) put(v);
    put(rec.ok ? rec.value : std::numeric_limits<double>::quiet_NaN());
    put(rec.error);
    os << ',' << rec.effort << '\n';
  }
}

}  // namespace harmcantor
