#pragma once

// The Cantor-type construction: radius schedules, the generation tree of
// balls and cubes, the measure slices μ^m and the checks run on them.

#include <gmpxx.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <map>
#include <memory>
#include <iterator>
#include <limits>
#include <mutex>
#include <numeric>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "common.hpp"
#include "geomspace.hpp"
#include "json.hpp"

namespace harmcantor {

enum class ScheduleMode { FixedRatio, DoublingExponent, Custom };

inline std::string to_string(ScheduleMode m) {
  switch (m) {
    case ScheduleMode::FixedRatio: return "fixed-ratio";
    case ScheduleMode::DoublingExponent: return "doubling-exponent";
    case ScheduleMode::Custom: return "custom";
  }
  return "?";
}

inline ScheduleMode schedule_mode_from_string(const std::string& s) {
  if (s == "fixed-ratio") return ScheduleMode::FixedRatio;
  if (s == "doubling-exponent") return ScheduleMode::DoublingExponent;
  if (s == "custom") return ScheduleMode::Custom;
  throw std::invalid_argument("unknown schedule mode: " + s);
}

/// Radii r_0 = 1 > r_1 > ... > r_depth with integral 1/r_k and r_{k-1}/r_k.
/// One lookahead level r_{depth+1} is kept so the deepest inflated balls
/// (which use δ_{depth+1}) are defined.
class RadiusSchedule {
 public:
  static RadiusSchedule make(const AmbientSpace& space, ScheduleMode mode, long M, int depth, bool validate = true) {
    if (depth < 1) throw std::invalid_argument("schedule depth must be >= 1");
    if (M < 2) throw std::invalid_argument("schedule base M must be >= 2");
    if (mode == ScheduleMode::Custom) throw std::invalid_argument("use RadiusSchedule::custom for custom lists");
    std::vector<mpz_class> inv{1};
    for (int k = 1; k <= depth + 1; ++k) {
      mpz_class v;
      if (mode == ScheduleMode::FixedRatio) {
        mpz_ui_pow_ui(v.get_mpz_t(), static_cast<unsigned long>(M), static_cast<unsigned long>(k));
      } else {
        // r_k = M^{-(2^k - 1)}
        mpz_ui_pow_ui(v.get_mpz_t(), static_cast<unsigned long>(M), (1UL << k) - 1);
      }
      inv.push_back(v);
    }
    return RadiusSchedule(space, mode, M, std::move(inv), depth, validate);
  }

  /// Custom list of inverse radii 1/r_0 = 1, 1/r_1, ..., 1/r_depth. The
  /// lookahead level repeats the last ratio.
  static RadiusSchedule custom(const AmbientSpace& space, std::vector<mpz_class> inverse_radii, bool validate = true) {
    if (inverse_radii.size() < 2) throw std::invalid_argument("custom schedule needs at least r_0 and r_1");
    if (inverse_radii.front() != 1) throw std::invalid_argument("custom schedule must start at r_0 = 1");
    const int depth = static_cast<int>(inverse_radii.size()) - 1;
    for (int k = 1; k <= depth; ++k) {
      if (inverse_radii[k] <= inverse_radii[k - 1] || inverse_radii[k] % inverse_radii[k - 1] != 0)
        throw std::invalid_argument("custom schedule: r_{k-1}/r_k must be an integer > 1");
    }
    const mpz_class last = inverse_radii[depth] / inverse_radii[depth - 1];
    inverse_radii.push_back(inverse_radii[depth] * last);
    return RadiusSchedule(space, ScheduleMode::Custom, 0, std::move(inverse_radii), depth, validate);
  }

  int d() const { return d_; }
  int depth() const { return depth_; }
  ScheduleMode mode() const { return mode_; }
  long base() const { return base_; }
  bool validated() const { return validated_; }

  /// 1/r_k for k in [0, depth+1].
  const mpz_class& inverse_radius(int k) const { return inv_.at(k); }
  double radius(int k) const { return radius_.at(k); }
  HighFloat radius_hp(int k) const { return HighFloat(1) / HighFloat(inv_.at(k).get_str()); }
  /// r_{k-1}/r_k for k in [1, depth+1].
  mpz_class ratio(int k) const { return inv_.at(k) / inv_.at(k - 1); }
  /// δ_k = A (r_k/r_{k-1})^{(d-1)/d}, k in [1, depth+1].
  double delta(int k) const { return delta_.at(k); }
  /// Level-k cube side (κ_d r_k^{d-1} r_{k-1})^{1/d}, k >= 1.
  double cube_side(int k) const { return cube_side_.at(k); }
  /// (1 + δ_{k+1}) r_k, k in [0, depth].
  double inflated_radius(int k) const { return (1.0 + delta(k + 1)) * radius(k); }
  /// μ^m(B^k_j) = r_k^{d-1}.
  double ball_mass(int k) const { return std::pow(radius(k), d_ - 1); }

  /// Number of generation-k balls, 1/r_k^{d-1}.
  mpz_class node_count(int k) const {
    mpz_class n;
    mpz_pow_ui(n.get_mpz_t(), inv_.at(k).get_mpz_t(), static_cast<unsigned long>(d_ - 1));
    return n;
  }
  /// Children per generation-(k-1) node, ratio_k^{d-1}.
  mpz_class children_per_node(int k) const {
    mpz_class n;
    mpz_pow_ui(n.get_mpz_t(), ratio(k).get_mpz_t(), static_cast<unsigned long>(d_ - 1));
    return n;
  }

  /// κ^{1/d}/2 - (1/ratio_k)^{1/d} - A/ratio_k - κ^{1/d}/4; the threshold holds iff >= 0.
  double separation_margin(int k) const {
    const double q = ratio(k).get_d();
    return kappa_root_ / 2 - std::pow(1.0 / q, 1.0 / d_) - a_const_ / q - kappa_root_ / 4;
  }
  bool threshold_ok() const {
    for (int k = 1; k <= depth_; ++k)
      if (separation_margin(k) < 0) return false;
    return true;
  }

  nlohmann::json describe() const {
    std::vector<std::string> inv;
    for (const auto& v : inv_) inv.push_back(v.get_str());
    return {{"d", d_}, {"mode", to_string(mode_)}, {"M", base_}, {"depth", depth_}, {"inverse_radii", inv}};
  }

 private:
  RadiusSchedule(const AmbientSpace& space, ScheduleMode mode, long M, std::vector<mpz_class> inv, int depth,
                 bool validate)
      : d_(space.d()), depth_(depth), mode_(mode), base_(M), inv_(std::move(inv)) {
    kappa_root_ = space.kappa_root();
    a_const_ = space.inflation_constant();
    const int levels = depth_ + 2;
    radius_.resize(levels);
    delta_.assign(levels, 0.0);
    cube_side_.assign(levels, 0.0);
    for (int k = 0; k < levels; ++k) radius_[k] = 1.0 / inv_[k].get_d();
    for (int k = 1; k < levels; ++k) {
      const double q = ratio(k).get_d();
      delta_[k] = a_const_ * std::pow(1.0 / q, static_cast<double>(d_ - 1) / d_);
      cube_side_[k] = static_cast<double>(packing_side(space, radius_hp(k - 1), radius_hp(k)));
    }
    validated_ = threshold_ok();
    if (validate && !validated_) {
      int bad = 1;
      while (bad <= depth_ && separation_margin(bad) >= 0) ++bad;
      throw std::invalid_argument("schedule fails the separation threshold at level " + std::to_string(bad) +
                                  " (ratio " + ratio(bad).get_str() + ")");
    }
  }

  int d_;
  int depth_;
  ScheduleMode mode_;
  long base_;
  std::vector<mpz_class> inv_;
  std::vector<double> radius_;
  std::vector<double> delta_;
  std::vector<double> cube_side_;
  double kappa_root_ = 0.0;
  double a_const_ = 0.0;
  bool validated_ = false;
};

/// Asserted defaults: M = 16 for d = 2, M = 32 for d = 3.
inline long default_base(int d) { return d == 2 ? 16 : 32; }

struct SummabilityReport {
  bool passed = false;
  bool finite_prefix_only = false;      ///< custom lists: only the given prefix was examined
  int domination_from = -1;             ///< first k with δ_{k+1}^{1/d}/δ_k^{1/d} <= 1/2 from then on
  std::vector<double> term_ratios;      ///< δ_{k+1}^{1/d} / δ_k^{1/d}
  std::vector<double> partial_sums;     ///< Σ_{j<=k} δ_j^{1/d}
};

/// Geometric-domination test for Σ δ_k^{1/d} < ∞.
inline SummabilityReport summability_check(const RadiusSchedule& s, int horizon = 48) {
  SummabilityReport rep;
  const int d = s.d();
  const double log_a = std::log(s.delta(1)) + (static_cast<double>(d - 1) / d) * std::log(s.ratio(1).get_d());
  // log ratio_k, closed forms evaluated in log space so deep levels cannot overflow.
  auto log_ratio = [&](int k) -> double {
    switch (s.mode()) {
      case ScheduleMode::FixedRatio: return std::log(static_cast<double>(s.base()));
      case ScheduleMode::DoublingExponent: return std::ldexp(1.0, k - 1) * std::log(static_cast<double>(s.base()));
      case ScheduleMode::Custom: return std::log(s.ratio(k).get_d());
    }
    return 0.0;
  };
  const int n = s.mode() == ScheduleMode::Custom ? s.depth() : horizon;
  std::vector<double> log_root;  // log δ_k^{1/d}
  for (int k = 1; k <= n; ++k) log_root.push_back((log_a - (static_cast<double>(d - 1) / d) * log_ratio(k)) / d);
  double sum = 0.0;
  for (int k = 0; k < n; ++k) {
    sum += std::exp(log_root[k]);
    rep.partial_sums.push_back(sum);
    if (k + 1 < n) rep.term_ratios.push_back(std::exp(log_root[k + 1] - log_root[k]));
  }
  if (s.mode() == ScheduleMode::Custom) {
    rep.finite_prefix_only = true;
    rep.passed = std::isfinite(sum);
    return rep;
  }
  // Domination must hold on the whole tail of the horizon.
  for (int k = static_cast<int>(rep.term_ratios.size()) - 1; k >= 0; --k) {
    if (rep.term_ratios[k] > 0.5) break;
    rep.domination_from = k + 1;
  }
  rep.passed = rep.domination_from > 0 && rep.domination_from <= n / 2;
  return rep;
}

template <int D>
struct CantorNode {
  int level = 0;
  std::vector<std::uint32_t> path;  ///< child indices from the root
  Point<D> center{};
  double r_tilde = 1.0;     ///< B̃: radius r_k
  double r_inflated = 1.0;  ///< B: radius (1 + δ_{k+1}) r_k
  double cube_side = 0.0;   ///< Q^k (same center); 0 at level 0

  Ball<D> ball_tilde() const { return Ball<D>(center, r_tilde); }
  Ball<D> ball_inflated() const { return Ball<D>(center, r_inflated); }
  std::optional<Cube<D>> cube() const {
    if (level == 0) return std::nullopt;
    return Cube<D>(center, cube_side);
  }
};

template <int D>
nlohmann::json to_json(const CantorNode<D>& n) {
  return {{"level", n.level},      {"path", n.path},           {"center", n.center},
          {"r_tilde", n.r_tilde}, {"r_inflated", n.r_inflated}, {"cube_side", n.cube_side}};
}

/// The child layout of a level: offsets of the children's centers relative
/// to the parent's. The packing is translation invariant, so one layout
/// serves every node of a level.
template <int D>
struct ChildLayout {
  double side = 0.0;
  std::vector<GridIndex<D>> indices;
  std::vector<Point<D>> offsets;

  bool symmetric() const {
    auto a = indices;
    std::sort(a.begin(), a.end());
    for (const auto& i : indices) {
      GridIndex<D> neg;
      for (int j = 0; j < D; ++j) neg[j] = -i[j];
      if (!std::binary_search(a.begin(), a.end(), neg)) return false;
    }
    return true;
  }
};

template <int D>
class CantorTree {
 public:
  static constexpr std::size_t kDefaultBudget = 1000000;

  CantorTree(AmbientSpace space, RadiusSchedule schedule, std::size_t budget = kDefaultBudget)
      : space_(std::move(space)), schedule_(std::move(schedule)), budget_(budget) {
    if (space_.d() != D || schedule_.d() != D) throw std::invalid_argument("CantorTree: dimension mismatch");
    layouts_.resize(schedule_.depth());
    generations_.resize(schedule_.depth() + 1);
  }

  const AmbientSpace& space() const { return space_; }
  const RadiusSchedule& schedule() const { return schedule_; }
  int depth() const { return schedule_.depth(); }
  std::size_t budget() const { return budget_; }

  CantorNode<D> root() const { return make_node(0, {}, Point<D>{}); }

  /// Layout used to expand level-k nodes into level k+1. Memoized.
  const ChildLayout<D>& layout(int k) const {
    if (k < 0 || k >= depth()) throw std::out_of_range("layout: level beyond schedule depth");
    std::lock_guard lock(mutex_);
    auto& slot = layouts_[k];
    if (!slot) slot = std::make_unique<ChildLayout<D>>(build_layout(k));
    return *slot;
  }

  std::vector<CantorNode<D>> expand_node(const CantorNode<D>& node) const {
    if (node.level + 1 > depth()) throw std::out_of_range("expand_node: depth limit of the schedule reached");
    const auto& lay = layout(node.level);
    std::vector<CantorNode<D>> out;
    out.reserve(lay.offsets.size());
    for (std::size_t i = 0; i < lay.offsets.size(); ++i) {
      auto path = node.path;
      path.push_back(static_cast<std::uint32_t>(i));
      out.push_back(make_node(node.level + 1, std::move(path), node.center + lay.offsets[i]));
    }
    return out;
  }

  /// All generation-k nodes, materialized once. Throws beyond the budget.
  const std::vector<CantorNode<D>>& generation(int k) const {
    if (k < 0 || k > depth()) throw std::out_of_range("generation: level beyond schedule depth");
    const mpz_class count = schedule_.node_count(k);
    if (count > mpz_class(static_cast<unsigned long>(budget_)))
      throw std::length_error("generation " + std::to_string(k) + " has " + count.get_str() +
                              " nodes, above the materialization budget");
    {
      std::lock_guard lock(mutex_);
      if (generations_[k]) return *generations_[k];
    }
    std::vector<CantorNode<D>> nodes;
    if (k == 0) {
      nodes.push_back(root());
    } else {
      const auto& parents = generation(k - 1);
      nodes.reserve(count.get_ui());
      for (const auto& p : parents) {
        auto ch = expand_node(p);
        std::move(ch.begin(), ch.end(), std::back_inserter(nodes));
      }
    }
    std::lock_guard lock(mutex_);
    if (!generations_[k]) generations_[k] = std::make_unique<std::vector<CantorNode<D>>>(std::move(nodes));
    return *generations_[k];
  }

  /// Depth-first traversal without materialization. visit(level, center)
  /// returns whether to descend; levels stop at `max_level`.
  template <class Visit>
  void traverse(int max_level, Visit&& visit) const {
    if (max_level > depth()) throw std::out_of_range("traverse: level beyond schedule depth");
    traverse_from(0, Point<D>{}, max_level, visit);
  }
  template <class Visit>
  void traverse_from(int level, const Point<D>& center, int max_level, Visit& visit) const {
    if (!visit(level, center) || level == max_level) return;
    const auto& lay = layout(level);
    for (const auto& off : lay.offsets) traverse_from(level + 1, center + off, max_level, visit);
  }

  /// Center of the node reached by `path`.
  Point<D> center_of(const std::vector<std::uint32_t>& path) const {
    Point<D> c{};
    for (std::size_t l = 0; l < path.size(); ++l) c = c + layout(static_cast<int>(l)).offsets.at(path[l]);
    return c;
  }

  /// Distance from x to ∪_j B̃^m_j (the support of μ^m), by branch and bound.
  double distance_to_support(const Point<D>& x, int m) const {
    double best = std::numeric_limits<double>::infinity();
    traverse(m, [&](int level, const Point<D>& c) {
      const double dc = distance<D>(x, c);
      if (level == m) {
        best = std::min(best, dc - schedule_.radius(m));
        return false;
      }
      return dc - schedule_.inflated_radius(level) < best;
    });
    return best;
  }

  /// Distance from x to E^m = ∪_j B^m_j.
  double distance_to_inflated(const Point<D>& x, int m) const {
    double best = std::numeric_limits<double>::infinity();
    traverse(m, [&](int level, const Point<D>& c) {
      const double dc = distance<D>(x, c) - schedule_.inflated_radius(level);
      if (level == m) {
        best = std::min(best, dc);
        return false;
      }
      return dc < best;
    });
    return best;
  }

 private:
  CantorNode<D> make_node(int level, std::vector<std::uint32_t> path, const Point<D>& center) const {
    CantorNode<D> n;
    n.level = level;
    n.path = std::move(path);
    n.center = center;
    n.r_tilde = schedule_.radius(level);
    n.r_inflated = schedule_.inflated_radius(level);
    n.cube_side = level == 0 ? 0.0 : schedule_.cube_side(level);
    return n;
  }

  ChildLayout<D> build_layout(int k) const {
    const mpz_class ratio = schedule_.ratio(k + 1);
    if (!ratio.fits_slong_p()) throw std::overflow_error("layout: ratio too large");
    const mpz_class need_z = schedule_.children_per_node(k + 1);
    if (need_z > mpz_class(static_cast<unsigned long>(budget_)))
      throw std::length_error("layout: too many children per node");
    const std::size_t need = need_z.get_ui();
    auto packing = pack_cubes<D>(space_, Point<D>{}, schedule_.radius_hp(k), ratio.get_si());
    if (packing.size() < need) throw std::logic_error("layout: packing produced too few cubes");
    // Keep the cubes closest to the parent center; ties by grid index.
    auto key = [](const GridIndex<D>& i) {
      long s = 0;
      for (auto v : i) s += v * v;
      return s;
    };
    auto& idx = packing.indices;
    std::stable_sort(idx.begin(), idx.end(), [&](const GridIndex<D>& a, const GridIndex<D>& b) {
      const long ka = key(a), kb = key(b);
      return ka != kb ? ka < kb : a < b;
    });
    idx.resize(need);
    ChildLayout<D> lay;
    lay.side = packing.side;
    lay.indices = idx;
    for (const auto& i : idx) lay.offsets.push_back(packing.center_of(i));
    return lay;
  }

  AmbientSpace space_;
  RadiusSchedule schedule_;
  std::size_t budget_;
  mutable std::mutex mutex_;
  mutable std::vector<std::unique_ptr<ChildLayout<D>>> layouts_;
  mutable std::vector<std::unique_ptr<std::vector<CantorNode<D>>>> generations_;
};

/// Worst margins of the four structural properties at generation k >= 1.
/// A property holds iff its margin is >= 0.
struct StructureReport {
  int level = 0;
  std::size_t nodes = 0;
  bool count_ok = false;  ///< nodes == 1/r_k^{d-1}
  double margin_cubes_in_parent = 0.0;    ///< (1) Q^k_j ⊂ B^{k-1}(parent)
  double margin_ball_in_cube = 0.0;       ///< (2) B^k_j ⊂ Q^k_j
  double margin_boundary_clearance = 0.0; ///< (3) dist(B^k_j, ∂Q^k_j) - s_k/4
  double margin_separation = 0.0;         ///< (4) min_{i≠j} dist(B^k_i, B^k_j) - s_k/2

  bool property(int i) const {
    switch (i) {
      case 1: return margin_cubes_in_parent >= 0;
      case 2: return margin_ball_in_cube >= 0;
      case 3: return margin_boundary_clearance >= 0;
      case 4: return margin_separation >= 0;
    }
    return false;
  }
  bool passed() const { return count_ok && property(1) && property(2) && property(3) && property(4); }
};

template <int D>
StructureReport structure_check(const CantorTree<D>& tree, int k) {
  if (k < 1 || k > tree.depth()) throw std::out_of_range("structure_check: level must be in [1, depth]");
  const auto& s = tree.schedule();
  const auto& nodes = tree.generation(k);
  const auto& parents = tree.generation(k - 1);
  StructureReport rep;
  rep.level = k;
  rep.nodes = nodes.size();
  rep.count_ok = mpz_class(static_cast<unsigned long>(nodes.size())) == s.node_count(k);

  const double side = s.cube_side(k);
  const double rin = s.inflated_radius(k);
  const double rpar = s.inflated_radius(k - 1);
  rep.margin_cubes_in_parent = std::numeric_limits<double>::infinity();
  rep.margin_ball_in_cube = std::numeric_limits<double>::infinity();
  rep.margin_boundary_clearance = std::numeric_limits<double>::infinity();
  const std::size_t per = s.children_per_node(k).get_ui();
  for (std::size_t n = 0; n < nodes.size(); ++n) {
    const auto& node = nodes[n];
    const auto& parent = parents[n / per];
    double far2 = 0.0;
    for (int j = 0; j < D; ++j) {
      const double f = std::abs(node.center[j] - parent.center[j]) + side / 2;
      far2 += f * f;
    }
    rep.margin_cubes_in_parent = std::min(rep.margin_cubes_in_parent, rpar - std::sqrt(far2));
    const auto cube = *node.cube();
    const double clearance = cube.depth_of(node.center) - rin;  // dist(B, ∂Q)
    rep.margin_ball_in_cube = std::min(rep.margin_ball_in_cube, clearance);
    rep.margin_boundary_clearance = std::min(rep.margin_boundary_clearance, clearance - side / 4);
  }
  // Pairwise separation: sweep along the first axis.
  std::vector<std::size_t> order(nodes.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return nodes[a].center[0] < nodes[b].center[0]; });
  const double need = side / 2;
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t a = 0; a < order.size(); ++a) {
    const auto& ca = nodes[order[a]].center;
    for (std::size_t b = a + 1; b < order.size(); ++b) {
      const auto& cb = nodes[order[b]].center;
      if (cb[0] - ca[0] - 2 * rin >= best + need) break;
      best = std::min(best, distance<D>(ca, cb) - 2 * rin - need);
    }
  }
  rep.margin_separation = nodes.size() < 2 ? 0.0 : best;
  return rep;
}

/// μ^m = Σ_j (1/r_m) χ_{B̃^m_j} m_d.
template <int D>
struct MeasureSlice {
  const CantorTree<D>* tree = nullptr;
  int level = 0;

  MeasureSlice(const CantorTree<D>& t, int m) : tree(&t), level(m) {
    if (m < 0 || m > t.depth()) throw std::out_of_range("MeasureSlice: level beyond schedule depth");
  }
  double density() const { return 1.0 / tree->schedule().radius(level); }
};

/// μ^m(region), pruning subtrees whose inflated balls miss the region and
/// counting whole subtrees whose inflated balls lie inside it.
template <int D>
QuadratureEstimate slice_mass(const MeasureSlice<D>& slice, const Ball<D>& region) {
  const auto& tree = *slice.tree;
  const auto& s = tree.schedule();
  const int m = slice.level;
  QuadratureEstimate q{0.0, 0.0, 0, "tree"};
  tree.traverse(m, [&](int level, const Point<D>& c) {
    ++q.effort;
    const double dc = distance<D>(c, region.center);
    const double rin = s.inflated_radius(level);
    if (dc >= rin + region.radius) return false;
    if (dc + rin <= region.radius) {
      q.value += s.ball_mass(level);
      return false;
    }
    if (level == m) {
      const auto v = ball_ball_intersection_volume<D>(tree.space(), Ball<D>(c, s.radius(m)), region);
      q.value += slice.density() * v.value;
      q.error += slice.density() * v.error;
      return false;
    }
    return true;
  });
  q.effort = std::max<std::uint64_t>(q.effort, 1);
  return q;
}

template <int D>
struct GrowthSample {
  std::uint64_t index = 0;
  Point<D> z{};
  double r = 0.0;
  double mass = 0.0;
  double ratio = 0.0;  ///< mass / r^{d-1}
};

template <int D>
struct GrowthReport {
  std::uint64_t seed = 0;
  double max_ratio = 0.0;
  GrowthSample<D> worst;
  std::vector<GrowthSample<D>> samples;
};

/// Random center near or on a random generation-m ball; r log-uniform in
/// (r_{m+1}, r_max]. Each sample draws from its own counter-based stream.
template <int D>
GrowthSample<D> growth_sample(const MeasureSlice<D>& slice, std::uint64_t seed, std::uint64_t index,
                              double r_max = 2.0) {
  const auto& tree = *slice.tree;
  const auto& s = tree.schedule();
  const int m = slice.level;
  CounterRng rng(seed, index);
  Point<D> c{};
  for (int l = 0; l < m; ++l) {
    const auto& lay = tree.layout(l);
    c = c + lay.offsets[rng.below(lay.offsets.size())];
  }
  const double lo = std::log(s.radius(m + 1)), hi = std::log(r_max);
  GrowthSample<D> g;
  g.index = index;
  g.r = std::exp(rng.uniform(lo, hi));
  // Half of the centers on the support, half within r of it.
  const double reach = (index % 2 == 0) ? s.radius(m) : s.radius(m) + g.r;
  g.z = c + (reach * rng.uniform()) * rng.direction<D>();
  g.mass = slice_mass<D>(slice, Ball<D>(g.z, g.r)).value;
  g.ratio = g.mass / std::pow(g.r, D - 1);
  return g;
}

template <int D>
GrowthReport<D> growth_scan(const MeasureSlice<D>& slice, std::uint64_t num_samples, std::uint64_t seed,
                            unsigned threads = default_threads(), double r_max = 2.0) {
  GrowthReport<D> rep;
  rep.seed = seed;
  rep.samples.resize(num_samples);
  // Materialize layouts before workers start.
  for (int l = 0; l < slice.level; ++l) slice.tree->layout(l);
  parallel_for(num_samples, threads,
               [&](std::size_t i) { rep.samples[i] = growth_sample<D>(slice, seed, i, r_max); });
  for (const auto& g : rep.samples)
    if (g.ratio > rep.max_ratio) {
      rep.max_ratio = g.ratio;
      rep.worst = g;
    }
  return rep;
}

/// CSV: seed, z, r, mass, ratio.
template <int D>
void write_growth_csv(std::ostream& os, const GrowthReport<D>& rep) {
  os << "seed";
  for (int j = 0; j < D; ++j) os << ",z" << j;
  os << ",r,mass,ratio\n";
  char buf[64];
  auto put = [&](double v) {
    std::snprintf(buf, sizeof buf, "%.17g", v);
    os << ',' << buf;
  };
  for (const auto& g : rep.samples) {
    os << rep.seed;
    for (int j = 0; j < D; ++j) put(g.z[j]);
    put(g.r);
    put(g.mass);
    put(g.ratio);
    os << '\n';
  }
}

/// JSON lines, one node per line, generations 0..k.
template <int D>
void dump_tree(std::ostream& os, const CantorTree<D>& tree, int k) {
  for (int l = 0; l <= k; ++l)
    for (const auto& n : tree.generation(l)) os << to_json(n).dump() << '\n';
}

}  // namespace harmcantor
