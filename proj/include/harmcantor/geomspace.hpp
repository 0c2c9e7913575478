#pragma once

// Ambient constants, balls and cubes, and the grid cube packing of a ball.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <ostream>
#include <stdexcept>
#include <vector>

#include <boost/math/constants/constants.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>

#include "common.hpp"
#include "json.hpp"

namespace harmcantor {

using HighFloat = boost::multiprecision::cpp_bin_float_50;

/// R^d with Lebesgue measure normalized so the unit ball has mass 1.
class AmbientSpace {
 public:
  explicit AmbientSpace(int d) : d_(d) {
    if (d < 1) throw std::invalid_argument("dimension must be >= 1");
    const HighFloat pi = boost::math::constants::pi<HighFloat>();
    // Γ(d/2+1) at half-integers in closed form.
    HighFloat k;
    if (d % 2 == 0) {
      const int m = d / 2;
      HighFloat fact = 1;
      for (int i = 2; i <= m; ++i) fact *= i;
      k = pow(pi, m) / fact;
    } else {
      const int m = (d - 1) / 2;
      HighFloat dfact = 1;
      for (int i = d; i > 1; i -= 2) dfact *= i;
      k = pow(HighFloat(2), m + 1) * pow(pi, m) / dfact;
    }
    kappa_hp_ = k;
    kappa_ = static_cast<double>(k);
    kappa_root_ = static_cast<double>(pow(k, HighFloat(1) / d));
    a_const_ = std::sqrt(static_cast<double>(d)) * kappa_root_;
  }

  int d() const { return d_; }
  /// Lebesgue volume of the unit ball.
  double kappa() const { return kappa_; }
  const HighFloat& kappa_hp() const { return kappa_hp_; }
  /// κ_d^{1/d}: side of the cube of unit normalized measure.
  double kappa_root() const { return kappa_root_; }
  /// A = √d κ_d^{1/d}.
  double inflation_constant() const { return a_const_; }
  /// Normalized measure of a Lebesgue volume.
  double normalized(double lebesgue) const { return lebesgue / kappa_; }

 private:
  int d_;
  HighFloat kappa_hp_;
  double kappa_ = 0.0;
  double kappa_root_ = 0.0;
  double a_const_ = 0.0;
};

template <int D>
struct Ball {
  Point<D> center{};
  double radius = 1.0;

  Ball() = default;
  Ball(const Point<D>& c, double r) : center(c), radius(r) {
    if (!(r > 0.0)) throw std::invalid_argument("ball radius must be positive");
  }
  bool contains(const Point<D>& x) const { return distance<D>(x, center) <= radius; }
  double normalized_volume() const { return std::pow(radius, D); }
};

template <int D>
struct Cube {
  Point<D> center{};
  double side = 1.0;

  Cube() = default;
  Cube(const Point<D>& c, double s) : center(c), side(s) {
    if (!(s > 0.0)) throw std::invalid_argument("cube side must be positive");
  }
  /// Euclidean distance from x to the closed cube.
  double distance_to(const Point<D>& x) const {
    double s = 0.0;
    for (int i = 0; i < D; ++i) {
      const double g = std::abs(x[i] - center[i]) - 0.5 * side;
      if (g > 0) s += g * g;
    }
    return std::sqrt(s);
  }
  /// Distance from an interior point to the boundary (negative outside).
  double depth_of(const Point<D>& x) const {
    double m = 0.5 * side;
    for (int i = 0; i < D; ++i) m = std::min(m, 0.5 * side - std::abs(x[i] - center[i]));
    return m;
  }
  double lebesgue_volume() const { return std::pow(side, D); }
};

template <int D>
nlohmann::json to_json(const Ball<D>& b) {
  return {{"center", b.center}, {"radius", b.radius}};
}
template <int D>
nlohmann::json to_json(const Cube<D>& c) {
  return {{"center", c.center}, {"side", c.side}};
}

template <int D>
using GridIndex = std::array<long, D>;

/// Axis-aligned cubes on a cell-centered grid: cube i has center
/// anchor + i * side.
template <int D>
struct Packing {
  Point<D> anchor{};
  double side = 0.0;
  HighFloat side_hp = 0;
  std::vector<GridIndex<D>> indices;

  std::size_t size() const { return indices.size(); }
  Point<D> center_of(const GridIndex<D>& i) const {
    Point<D> c = anchor;
    for (int j = 0; j < D; ++j) c[j] += static_cast<double>(i[j]) * side;
    return c;
  }
  Cube<D> cube(std::size_t n) const { return Cube<D>(center_of(indices[n]), side); }
};

/// Side (κ_d r^{d-1} R)^{1/d} of the packing cubes, high precision.
inline HighFloat packing_side(const AmbientSpace& space, const HighFloat& R, const HighFloat& r) {
  const int d = space.d();
  return pow(space.kappa_hp() * pow(r, d - 1) * R, HighFloat(1) / d);
}

/// Every grid cube of side (κ_d r^{d-1} R)^{1/d}, grid centered at `center`,
/// that meets the closed ball B(center, R). `ratio` = R/r.
template <int D>
Packing<D> pack_cubes(const AmbientSpace& space, const Point<D>& center, const HighFloat& R, long ratio) {
  if (space.d() != D) throw std::invalid_argument("pack_cubes: dimension mismatch");
  if (ratio < 2) throw std::invalid_argument("pack_cubes: requires r < R with R/r integral");
  const HighFloat r = R / ratio;
  Packing<D> p;
  p.anchor = center;
  p.side_hp = packing_side(space, R, r);
  p.side = static_cast<double>(p.side_hp);
  // Cube i meets the ball iff Σ max(0, |i_j| - 1/2)^2 <= (R/side)^2.
  const HighFloat reach_sq = (R / p.side_hp) * (R / p.side_hp);
  const long lim = static_cast<long>(std::ceil(static_cast<double>(R / p.side_hp))) + 1;
  GridIndex<D> idx;
  idx.fill(-lim);
  while (true) {
    HighFloat s = 0;
    for (int j = 0; j < D; ++j) {
      const long a = std::abs(idx[j]);
      if (a > 0) {
        const HighFloat g = HighFloat(a) - HighFloat(0.5);
        s += g * g;
      }
    }
    if (s <= reach_sq) p.indices.push_back(idx);
    int j = D - 1;
    while (j >= 0 && idx[j] == lim) idx[j--] = -lim;
    if (j < 0) break;
    ++idx[j];
  }
  return p;
}

/// Overload with floating R, r; R/r must be an integer >= 2.
template <int D>
Packing<D> pack_cubes(const AmbientSpace& space, const Point<D>& center, double R, double r) {
  if (!(r > 0.0) || !(r < R)) throw std::invalid_argument("pack_cubes: requires 0 < r < R");
  const double q = R / r;
  const double n = std::round(q);
  if (std::abs(q - n) > 1e-9 * n) throw std::invalid_argument("pack_cubes: R/r must be an integer");
  return pack_cubes<D>(space, center, HighFloat(R), static_cast<long>(n));
}

struct PackingReport {
  bool disjoint = false;
  bool contained = false;
  bool count_ok = false;
  std::size_t count = 0;
  std::size_t required = 0;
  /// min over cubes of (inflated radius - farthest corner distance)
  double worst_containment_margin = 0.0;
  std::vector<bool> inside;  ///< per cube

  bool passed() const { return disjoint && contained && count_ok; }
};

/// (i) interiors pairwise disjoint (exact, on grid indices), (ii) every cube
/// corner inside `inflated`, (iii) count > required_count (strict).
template <int D>
PackingReport verify_packing(const Packing<D>& packing, const Ball<D>& /*ball*/, const Ball<D>& inflated,
                             std::size_t required_count) {
  PackingReport rep;
  rep.count = packing.size();
  rep.required = required_count;
  rep.count_ok = rep.count > required_count;

  auto sorted = packing.indices;
  std::sort(sorted.begin(), sorted.end());
  rep.disjoint = std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end();

  rep.contained = true;
  rep.worst_containment_margin = inflated.radius;
  const HighFloat rad = inflated.radius;
  const HighFloat half = packing.side_hp / 2;
  rep.inside.reserve(rep.count);
  for (const auto& idx : packing.indices) {
    // Farthest corner from the inflated center, per axis.
    HighFloat s = 0;
    for (int j = 0; j < D; ++j) {
      const HighFloat c = HighFloat(packing.anchor[j]) + HighFloat(idx[j]) * packing.side_hp -
                          HighFloat(inflated.center[j]);
      const HighFloat far = abs(c) + half;
      s += far * far;
    }
    const bool in = s <= rad * rad;
    rep.inside.push_back(in);
    rep.contained = rep.contained && in;
    rep.worst_containment_margin = std::min(rep.worst_containment_margin, static_cast<double>(rad - sqrt(s)));
  }
  return rep;
}

/// Radius R(1 + √d (κ_d r^{d-1}/R^{d-1})^{1/d}) of the ball holding the packing.
inline double packing_enclosing_radius(const AmbientSpace& space, double R, double r) {
  const int d = space.d();
  return R * (1.0 + std::sqrt(static_cast<double>(d)) * std::pow(space.kappa() * std::pow(r / R, d - 1), 1.0 / d));
}

/// CSV: index, center coords, side, inside_inflated, count_ok.
template <int D>
void write_packing_csv(std::ostream& os, const Packing<D>& p, const PackingReport& rep) {
  os << "index";
  for (int j = 0; j < D; ++j) os << ",c" << j;
  os << ",side,inside_inflated,count_ok\n";
  char buf[64];
  for (std::size_t n = 0; n < p.size(); ++n) {
    os << n;
    const auto c = p.center_of(p.indices[n]);
    for (int j = 0; j < D; ++j) {
      std::snprintf(buf, sizeof buf, "%.17g", c[j]);
      os << ',' << buf;
    }
    std::snprintf(buf, sizeof buf, "%.17g", p.side);
    os << ',' << buf << ',' << (rep.inside.size() > n && rep.inside[n] ? 1 : 0) << ',' << (rep.count_ok ? 1 : 0)
       << '\n';
  }
}

/// Normalized measure of b1 ∩ b2: closed form for d = 2, 3, Monte Carlo otherwise.
template <int D>
QuadratureEstimate ball_ball_intersection_volume(const AmbientSpace& space, const Ball<D>& b1, const Ball<D>& b2,
                                                 std::uint64_t samples = 200000, std::uint64_t seed = 1) {
  const double c = distance<D>(b1.center, b2.center);
  const double r1 = b1.radius, r2 = b2.radius;
  const double rmin = std::min(r1, r2);
  if (c >= r1 + r2) return {0.0, 0.0, 1, "disjoint"};
  if (c <= std::abs(r1 - r2)) return {std::pow(rmin, D), 0.0, 1, "nested"};
  if constexpr (D == 2) {
    const double pi = boost::math::constants::pi<double>();
    const double a1 = std::clamp((c * c + r1 * r1 - r2 * r2) / (2 * c * r1), -1.0, 1.0);
    const double a2 = std::clamp((c * c + r2 * r2 - r1 * r1) / (2 * c * r2), -1.0, 1.0);
    const double k = (-c + r1 + r2) * (c + r1 - r2) * (c - r1 + r2) * (c + r1 + r2);
    const double area = r1 * r1 * std::acos(a1) + r2 * r2 * std::acos(a2) - 0.5 * std::sqrt(std::max(k, 0.0));
    return {area / pi, 0.0, 1, "lens-2d"};
  } else if constexpr (D == 3) {
    const double pi = boost::math::constants::pi<double>();
    const double t = r1 + r2 - c;
    const double v = pi * t * t * (c * c + 2 * c * r2 - 3 * r2 * r2 + 2 * c * r1 + 6 * r1 * r2 - 3 * r1 * r1) / (12 * c);
    return {space.normalized(v), 0.0, 1, "lens-3d"};
  } else {
    // Sample the smaller ball uniformly, count hits in the other one.
    const Ball<D>& small = r1 <= r2 ? b1 : b2;
    const Ball<D>& other = r1 <= r2 ? b2 : b1;
    CounterRng rng(seed, 0);
    std::uint64_t hits = 0;
    for (std::uint64_t s = 0; s < samples; ++s) {
      const auto dir = rng.direction<D>();
      const double rho = small.radius * std::pow(rng.uniform(), 1.0 / D);
      if (other.contains(small.center + rho * dir)) ++hits;
    }
    const double p = static_cast<double>(hits) / static_cast<double>(samples);
    const double vol = std::pow(rmin, D);
    return {vol * p, vol * std::sqrt(p * (1 - p) / static_cast<double>(samples)), samples, "monte-carlo"};
  }
}

}  // namespace harmcantor
