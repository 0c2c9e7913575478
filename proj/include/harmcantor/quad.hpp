#pragma once

// Quadrature for the kernel over cubes and balls, the interior (zero
// integral) evaluation by polar reduction, ∫|K| over finite-measure regions,
// and the iterated Newtonian potential of the unit ball.

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "common.hpp"
#include "gauss.hpp"
#include "geomspace.hpp"
#include "polyharm.hpp"

namespace harmcantor {

/// Thrown when a refinement loop hits its effort cap; carries what was reached.
class QuadratureError : public std::runtime_error {
 public:
  QuadratureError(const std::string& what, QuadratureEstimate partial)
      : std::runtime_error(what), partial_(std::move(partial)) {}
  const QuadratureEstimate& partial() const { return partial_; }

 private:
  QuadratureEstimate partial_;
};

namespace detail {

/// Orthonormal frame whose third axis is `axis` (any frame if axis = 0).
inline std::array<Point<3>, 3> frame_along(const Point<3>& axis) {
  const double n = norm<3>(axis);
  if (n == 0.0) return {Point<3>{1, 0, 0}, Point<3>{0, 1, 0}, Point<3>{0, 0, 1}};
  const Point<3> e3 = (1.0 / n) * axis;
  Point<3> t = std::abs(e3[0]) < 0.9 ? Point<3>{1, 0, 0} : Point<3>{0, 1, 0};
  const double p = dot<3>(t, e3);
  Point<3> e1 = t - p * e3;
  e1 = (1.0 / norm<3>(e1)) * e1;
  const Point<3> e2{e3[1] * e1[2] - e3[2] * e1[1], e3[2] * e1[0] - e3[0] * e1[2], e3[0] * e1[1] - e3[1] * e1[0]};
  return {e1, e2, e3};
}

template <int D>
void require_sphere_dim() {
  static_assert(D == 2 || D == 3, "spherical rules are implemented for d = 2 and d = 3");
}

/// Product rule on S^{d-1}: trapezoid for d = 2; Gauss in cos θ times
/// trapezoid in φ for d = 3. Calls f(ω, weight); weights sum to |S^{d-1}|.
template <int D, class F>
void sphere_rule(int n, const std::array<Point<3>, 3>& frame, F&& f, bool gauss_angle = false) {
  require_sphere_dim<D>();
  constexpr double two_pi = 2.0 * std::numbers::pi;
  if constexpr (D == 2) {
    (void)frame;
    if (gauss_angle) {
      const auto& g = gauss_legendre(n);
      for (int i = 0; i < n; ++i) {
        const double th = std::numbers::pi * (g.nodes[i] + 1.0);
        f(Point<2>{std::cos(th), std::sin(th)}, std::numbers::pi * g.weights[i]);
      }
    } else {
      const double w = two_pi / n;
      for (int i = 0; i < n; ++i) {
        const double th = w * i;
        f(Point<2>{std::cos(th), std::sin(th)}, w);
      }
    }
  } else {
    const auto& g = gauss_legendre(n);
    const int nphi = 2 * n;
    const double wphi = two_pi / nphi;
    for (int i = 0; i < n; ++i) {
      const double mu = g.nodes[i];
      const double st = std::sqrt(std::max(0.0, 1.0 - mu * mu));
      for (int j = 0; j < nphi; ++j) {
        const double ph = wphi * (j + 0.5 * (i % 2));
        const double a = st * std::cos(ph), b = st * std::sin(ph);
        Point<3> w;
        for (int c = 0; c < 3; ++c) w[c] = a * frame[0][c] + b * frame[1][c] + mu * frame[2][c];
        f(w, g.weights[i] * wphi);
      }
    }
  }
}

}  // namespace detail

/// ∫_Q K(x-ξ) dm_d(ξ) by adaptive tensor Gauss-Legendre (orders 5 and 10 per box).
template <int D>
QuadratureEstimate integrate_kernel_over_cube(const KernelSpec& kernel, const Cube<D>& cube, const Point<D>& x,
                                              double tol, std::uint64_t max_effort = 50000000) {
  if (kernel.dim() != D) throw std::invalid_argument("integrate_kernel_over_cube: dimension mismatch");
  if (!(cube.distance_to(x) > 0.0)) throw std::domain_error("integrate_kernel_over_cube: x lies in the closed cube");
  if (!(tol > 0.0)) throw std::invalid_argument("integrate_kernel_over_cube: tol must be positive");
  const AmbientSpace space(D);
  const double total_vol = cube.lebesgue_volume();
  struct Box {
    Point<D> c;
    double h;  // half side
  };
  auto tensor = [&](const Box& b, int n) {
    const auto& g = gauss_legendre(n);
    std::array<int, D> idx{};
    double s = 0.0;
    while (true) {
      Point<D> y;
      double w = 1.0;
      for (int j = 0; j < D; ++j) {
        y[j] = x[j] - (b.c[j] + b.h * g.nodes[idx[j]]);
        w *= g.weights[idx[j]];
      }
      s += w * kernel(y.data());
      int j = 0;
      while (j < D && ++idx[j] == n) idx[j++] = 0;
      if (j == D) break;
    }
    return s * std::pow(b.h, D);
  };
  QuadratureEstimate q{0.0, 0.0, 0, "adaptive-tensor-gauss"};
  std::vector<Box> stack{{cube.center, cube.side / 2}};
  const std::uint64_t per_box = static_cast<std::uint64_t>(std::pow(5, D) + std::pow(10, D));
  while (!stack.empty()) {
    const Box b = stack.back();
    stack.pop_back();
    const double lo = tensor(b, 5), hi = tensor(b, 10);
    q.effort += per_box;
    const double err = std::abs(hi - lo);
    const double share = tol * space.kappa() * std::pow(2 * b.h, D) / total_vol;
    if (err <= share || q.effort > max_effort) {
      q.value += hi;
      q.error += err;
      if (q.effort > max_effort && err > share) {
        for (const auto& r : stack) q.value += tensor(r, 10);
        q.value /= space.kappa();
        q.error /= space.kappa();
        throw QuadratureError("integrate_kernel_over_cube: effort cap reached", q);
      }
      continue;
    }
    const double h2 = b.h / 2;
    for (int m = 0; m < (1 << D); ++m) {
      Box child{b.c, h2};
      for (int j = 0; j < D; ++j) child.c[j] += ((m >> j) & 1) ? h2 : -h2;
      stack.push_back(child);
    }
  }
  q.value /= space.kappa();
  q.error /= space.kappa();
  return q;
}

enum class SphereRule { Trapezoid, Gauss };

/// ∫_B K(x-ξ) dm_d(ξ) for x outside the closed ball: radial Gauss times a
/// spherical rule about the ball center, node counts doubled until two
/// successive values agree within tol.
template <int D>
QuadratureEstimate integrate_kernel_over_ball_exterior(const KernelSpec& kernel, const Ball<D>& ball,
                                                       const Point<D>& x, double tol,
                                                       SphereRule rule = SphereRule::Trapezoid, int max_nodes = 512) {
  detail::require_sphere_dim<D>();
  if (kernel.dim() != D) throw std::invalid_argument("integrate_kernel_over_ball_exterior: dimension mismatch");
  const Point<D> v = x - ball.center;
  if (!(norm<D>(v) > ball.radius)) throw std::domain_error("integrate_kernel_over_ball_exterior: x is not outside the ball");
  static const double inv_kappa = 1.0 / AmbientSpace(D).kappa();
  std::array<Point<3>, 3> frame{};
  if constexpr (D == 3) frame = detail::frame_along(v);
  std::uint64_t effort = 0;
  auto eval = [&](int n) {
    const auto& g = gauss_legendre(n);
    double s = 0.0;
    const double h = ball.radius / 2;
    for (int i = 0; i < n; ++i) {
      const double rad = h * (g.nodes[i] + 1.0);
      const double wr = h * g.weights[i] * std::pow(rad, D - 1);
      detail::sphere_rule<D>(
          D == 2 ? 2 * n : n, frame,
          [&](const Point<D>& w, double ww) {
            Point<D> y;
            for (int j = 0; j < D; ++j) y[j] = v[j] - rad * w[j];
            s += wr * ww * kernel(y.data());
            ++effort;
          },
          rule == SphereRule::Gauss);
    }
    return s * inv_kappa;
  };
  int n = 4;
  double prev = eval(n);
  while (true) {
    const int n2 = 2 * n;
    const double cur = eval(n2);
    const double err = std::abs(cur - prev);
    if (err <= tol) return {cur, err, effort, rule == SphereRule::Gauss ? "radial-gauss/gauss" : "radial-gauss/trapezoid"};
    if (n2 >= max_nodes)
      throw QuadratureError("integrate_kernel_over_ball_exterior: no convergence", {cur, err, effort, "unconverged"});
    prev = cur;
    n = n2;
  }
}

/// ∫_B K(x-ξ) dm_d(ξ) for x inside B. With ξ = x + tω the radial integral
/// collapses by homogeneity:
///   ∫_B K(x-ξ) dm_d(ξ) = -(1/κ_d) ∫_S P(ω) ρ_x(ω) dσ(ω),
/// ρ_x(ω) = -ω·v + sqrt((ω·v)^2 + R^2 - |v|^2), v = x - c.
template <int D>
QuadratureEstimate reflectionless_residual(const KernelSpec& kernel, const Ball<D>& ball, const Point<D>& x,
                                           double tol = 1e-14, int max_nodes = 1 << 16) {
  detail::require_sphere_dim<D>();
  if (kernel.dim() != D) throw std::invalid_argument("reflectionless_residual: dimension mismatch");
  const Point<D> v = x - ball.center;
  const double v2 = dot<D>(v, v), R2 = ball.radius * ball.radius;
  if (!(v2 < R2)) throw std::domain_error("reflectionless_residual: x is not inside the ball");
  static const double inv_kappa = 1.0 / AmbientSpace(D).kappa();
  const int deg = kernel.degree();
  auto rho = [&](double wv) { return -wv + std::sqrt(wv * wv + (R2 - v2)); };
  std::uint64_t effort = 0;
  auto eval = [&](int n) -> double {
    double s = 0.0;
    if constexpr (D == 2) {
      const double w = 2.0 * std::numbers::pi / n;
      for (int i = 0; i < n; ++i) {
        const double th = w * i;
        const double om[2] = {std::cos(th), std::sin(th)};
        s += kernel.numerator_at(om) * rho(om[0] * v[0] + om[1] * v[1]);
      }
      effort += n;
      return -s * w * inv_kappa;
    } else {
      // Axis along v: ρ depends on cos θ only, and a trapezoid in φ with
      // more than deg nodes is exact for the numerator.
      const auto fr = detail::frame_along(v);
      const double vn = std::sqrt(v2);
      const auto& g = gauss_legendre(n);
      const int nphi = 2 * deg + 4;
      const double wphi = 2.0 * std::numbers::pi / nphi;
      for (int i = 0; i < n; ++i) {
        const double mu = g.nodes[i], st = std::sqrt(std::max(0.0, 1.0 - mu * mu));
        double ring = 0.0;
        for (int j = 0; j < nphi; ++j) {
          const double a = st * std::cos(wphi * j), b = st * std::sin(wphi * j);
          double om[3];
          for (int c = 0; c < 3; ++c) om[c] = a * fr[0][c] + b * fr[1][c] + mu * fr[2][c];
          ring += kernel.numerator_at(om);
        }
        s += g.weights[i] * ring * rho(mu * vn);
      }
      effort += static_cast<std::uint64_t>(n) * nphi;
      return -s * wphi * inv_kappa;
    }
  };
  int n = D == 2 ? 16 : 8;
  double prev = eval(n);
  while (true) {
    const int n2 = 2 * n;
    const double cur = eval(n2);
    const double err = std::abs(cur - prev);
    if (err <= tol || n2 >= max_nodes) return {cur, err, effort, err <= tol ? "polar-reduction" : "polar-reduction-unconverged"};
    prev = cur;
    n = n2;
  }
}

/// Mean of p over the unit sphere; zero for harmonic p of degree >= 1.
template <int D>
QuadratureEstimate sphere_mean(const HomogeneousPolynomial& p, double tol = 1e-14) {
  detail::require_sphere_dim<D>();
  if (p.dim() != D) throw std::invalid_argument("sphere_mean: dimension mismatch");
  const auto frame = detail::frame_along(Point<3>{0, 0, 1});
  auto eval = [&](int n) {
    double s = 0.0, wsum = 0.0;
    detail::sphere_rule<D>(n, frame, [&](const Point<D>& w, double ww) {
      s += ww * p.evaluate(std::span<const double>(w.data(), D));
      wsum += ww;
    });
    return s / wsum;
  };
  int n = p.degree() + 2;
  double prev = eval(n);
  std::uint64_t effort = n;
  while (true) {
    const double cur = eval(2 * n);
    effort += 2 * n;
    if (std::abs(cur - prev) <= tol || n > 4096) return {cur, std::abs(cur - prev), effort, "sphere-product"};
    prev = cur;
    n *= 2;
  }
}

/// Region for ∫|K|: a ball, a cube, or a union of balls.
template <int D>
using Region = std::variant<Ball<D>, Cube<D>, std::vector<Ball<D>>>;

namespace detail {

/// Parameter intervals {t >= 0 : tω ∈ region}, disjoint and sorted.
template <int D>
std::vector<std::pair<double, double>> ray_intervals(const Region<D>& region, const Point<D>& w) {
  std::vector<std::pair<double, double>> out;
  auto ball_iv = [&](const Ball<D>& b) {
    const double wc = dot<D>(w, b.center);
    const double disc = wc * wc - dot<D>(b.center, b.center) + b.radius * b.radius;
    if (disc <= 0) return;
    const double sq = std::sqrt(disc);
    const double t1 = wc + sq;
    if (t1 <= 0) return;
    out.emplace_back(std::max(0.0, wc - sq), t1);
  };
  if (const auto* b = std::get_if<Ball<D>>(&region)) {
    ball_iv(*b);
  } else if (const auto* c = std::get_if<Cube<D>>(&region)) {
    double lo = 0.0, hi = std::numeric_limits<double>::infinity();
    for (int j = 0; j < D; ++j) {
      const double a = c->center[j] - c->side / 2, bb = c->center[j] + c->side / 2;
      if (w[j] == 0.0) {
        if (0.0 < a || 0.0 > bb) return out;
        continue;
      }
      double t0 = a / w[j], t1 = bb / w[j];
      if (t0 > t1) std::swap(t0, t1);
      lo = std::max(lo, t0);
      hi = std::min(hi, t1);
    }
    if (hi > lo) out.emplace_back(lo, hi);
  } else {
    for (const auto& b : std::get<std::vector<Ball<D>>>(region)) ball_iv(b);
    std::sort(out.begin(), out.end());
    std::vector<std::pair<double, double>> merged;
    for (const auto& iv : out) {
      if (!merged.empty() && iv.first <= merged.back().second)
        merged.back().second = std::max(merged.back().second, iv.second);
      else
        merged.push_back(iv);
    }
    out = std::move(merged);
  }
  return out;
}

/// Angles (d = 2) where the ray length may have a kink.
inline void kink_angles(const Region<2>& region, std::vector<double>& out) {
  auto ball_k = [&](const Ball<2>& b) {
    const double c = norm<2>(b.center);
    if (c > b.radius) {
      const double a = std::atan2(b.center[1], b.center[0]), h = std::asin(b.radius / c);
      out.push_back(a - h);
      out.push_back(a + h);
    }
  };
  if (const auto* b = std::get_if<Ball<2>>(&region)) {
    ball_k(*b);
  } else if (const auto* c = std::get_if<Cube<2>>(&region)) {
    for (int sx = -1; sx <= 1; sx += 2)
      for (int sy = -1; sy <= 1; sy += 2)
        out.push_back(std::atan2(c->center[1] + sy * c->side / 2, c->center[0] + sx * c->side / 2));
  } else {
    for (const auto& b : std::get<std::vector<Ball<2>>>(region)) ball_k(b);
  }
}

/// Sign changes of g on [a, b], refined by bisection.
template <class G>
void zeros_on(G&& g, double a, double b, int samples, std::vector<double>& out) {
  double x0 = a, g0 = g(a);
  for (int i = 1; i <= samples; ++i) {
    const double x1 = a + (b - a) * i / samples, g1 = g(x1);
    if (g0 == 0.0) out.push_back(x0);
    if ((g0 < 0) != (g1 < 0) && g0 != 0.0 && g1 != 0.0) {
      double lo = x0, hi = x1, glo = g0;
      for (int it = 0; it < 200 && hi - lo > 1e-15 * (1 + std::abs(lo)); ++it) {
        const double mid = 0.5 * (lo + hi), gm = g(mid);
        if ((gm < 0) == (glo < 0)) {
          lo = mid;
          glo = gm;
        } else {
          hi = mid;
        }
      }
      out.push_back(0.5 * (lo + hi));
    }
    x0 = x1;
    g0 = g1;
  }
}

/// ∫ over [a, b] with interior breakpoints, adaptive Gauss-Kronrod per piece.
template <class F>
QuadratureEstimate piecewise_gk(F&& f, double a, double b, std::vector<double> breaks, double tol) {
  breaks.push_back(a);
  breaks.push_back(b);
  std::sort(breaks.begin(), breaks.end());
  QuadratureEstimate q{0.0, 0.0, 0, "gauss-kronrod"};
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
    const double lo = std::max(a, breaks[i]), hi = std::min(b, breaks[i + 1]);
    if (!(hi > lo)) continue;
    double err = 0.0, l1 = 0.0;
    const double v =
        boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, lo, hi, 12, tol, &err, &l1);
    q.value += v;
    q.error += err;
    q.effort += 61;
  }
  q.effort = std::max<std::uint64_t>(q.effort, 1);
  return q;
}

}  // namespace detail

struct AbsIntegralReport {
  QuadratureEstimate estimate;  ///< ∫_A |K| dm_d
  double measure = 0.0;         ///< m_d(A)
  double ratio = 0.0;           ///< estimate / m_d(A)^{1/d}
  double lebesgue_ratio = 0.0;  ///< same with unnormalized Lebesgue measure on both sides
};

/// ∫_A |K(ξ)| dm_d(ξ). Along each ray from the origin |K| t^{d-1} = |P(ω)|,
/// so the integral is (1/κ_d) ∫_S |P(ω)| L_A(ω) dσ with L_A the ray length in A.
template <int D>
AbsIntegralReport abs_kernel_integral(const KernelSpec& kernel, const Region<D>& region, double tol = 1e-12) {
  detail::require_sphere_dim<D>();
  if (kernel.dim() != D) throw std::invalid_argument("abs_kernel_integral: dimension mismatch");
  const AmbientSpace space(D);
  constexpr double two_pi = 2.0 * std::numbers::pi;
  auto length = [&](const Point<D>& w, bool moment) {
    double s = 0.0;
    for (const auto& [t0, t1] : detail::ray_intervals<D>(region, w))
      s += moment ? (std::pow(t1, D) - std::pow(t0, D)) / D : t1 - t0;
    return s;
  };
  AbsIntegralReport rep;
  // Measure: closed forms where available, ray moments for unions.
  const bool closed_measure = !std::holds_alternative<std::vector<Ball<D>>>(region);
  if (const auto* b = std::get_if<Ball<D>>(&region)) rep.measure = b->normalized_volume();
  if (const auto* c = std::get_if<Cube<D>>(&region)) rep.measure = c->lebesgue_volume() / space.kappa();

  if constexpr (D == 2) {
    auto pw = [&](double th) {
      const double om[2] = {std::cos(th), std::sin(th)};
      return kernel.numerator_at(om);
    };
    std::vector<double> br;
    detail::zeros_on(pw, 0.0, two_pi, 64 * (kernel.degree() + 1), br);
    std::vector<double> kinks;
    detail::kink_angles(region, kinks);
    for (double a : kinks) br.push_back(std::fmod(std::fmod(a, two_pi) + two_pi, two_pi));
    auto f = [&](double th) {
      const Point<2> w{std::cos(th), std::sin(th)};
      return std::abs(pw(th)) * length(w, false);
    };
    rep.estimate = detail::piecewise_gk(f, 0.0, two_pi, br, tol);
    if (!closed_measure) {
      auto g = [&](double th) { return length(Point<2>{std::cos(th), std::sin(th)}, true); };
      rep.measure = detail::piecewise_gk(g, 0.0, two_pi, br, tol).value / space.kappa();
    }
  } else {
    auto ring = [&](double mu, bool moment) {
      const double st = std::sqrt(std::max(0.0, 1.0 - mu * mu));
      auto om = [&](double ph) { return Point<3>{st * std::cos(ph), st * std::sin(ph), mu}; };
      auto pw = [&](double ph) {
        const auto w = om(ph);
        return kernel.numerator_at(w.data());
      };
      std::vector<double> br;
      if (!moment) detail::zeros_on(pw, 0.0, two_pi, 16 * (kernel.degree() + 1), br);
      auto f = [&](double ph) {
        const auto w = om(ph);
        return (moment ? 1.0 : std::abs(pw(ph))) * length(w, moment);
      };
      return detail::piecewise_gk(f, 0.0, two_pi, br, tol);
    };
    std::uint64_t effort = 0;
    double inner_err = 0.0;
    auto outer = [&](bool moment) {
      auto g = [&](double mu) {
        const auto q = ring(mu, moment);
        effort += q.effort;
        inner_err = std::max(inner_err, q.error);
        return q.value;
      };
      double err = 0.0, l1 = 0.0;
      const double v = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(g, -1.0, 1.0, 10, tol, &err, &l1);
      return std::make_pair(v, err);
    };
    const auto [v, e] = outer(false);
    rep.estimate = {v, e + 2.0 * inner_err, std::max<std::uint64_t>(effort, 1), "nested-gauss-kronrod"};
    if (!closed_measure) rep.measure = outer(true).first / space.kappa();
  }
  rep.estimate.value /= space.kappa();
  rep.estimate.error /= space.kappa();
  rep.ratio = rep.estimate.value / std::pow(rep.measure, 1.0 / D);
  rep.lebesgue_ratio = rep.estimate.value * space.kappa() / std::pow(rep.measure * space.kappa(), 1.0 / D);
  return rep;
}

/// E(x) = -(1/2π) log|x| for d = 2, 1/(d(d-2)κ_d |x|^{d-2}) for d >= 3.
class FundamentalSolution {
 public:
  explicit FundamentalSolution(int d) : d_(d), kappa_(AmbientSpace(d).kappa()) {
    if (d < 2) throw std::invalid_argument("FundamentalSolution: d >= 2");
  }
  int d() const { return d_; }
  double radial(double t) const {
    if (d_ == 2) return -std::log(t) / (2.0 * std::numbers::pi);
    return 1.0 / (d_ * (d_ - 2) * kappa_ * std::pow(t, d_ - 2));
  }
  template <int D>
  double operator()(const Point<D>& x) const {
    return radial(norm<D>(x));
  }

 private:
  int d_;
  double kappa_;
};

struct NewtonFit {
  int d = 0;
  int k = 0;
  int resolution = 0;
  std::vector<double> coefficients;  ///< Ã_0 .. Ã_{k+1}, in powers of |x|^2
  double residual = 0.0;             ///< max |fit - profile| on the grid
  std::vector<double> radii;
  std::vector<double> profile;
};

/// Radial profile of the (k+1)-fold iterate u_{j+1} = E * (χ_B u_j), u_0 = 1,
/// with B the unit ball and m_d normalized. Uses the sphere mean of E(x-y)
/// over |y| = s, which is Ē(max(|x|, s)):
///   u_{j+1}(r) = d ∫_0^1 u_j(s) Ē(max(r, s)) s^{d-1} ds.
inline double newton_profile(int d, int iterations, double r, int resolution) {
  const FundamentalSolution E(d);
  if (iterations == 0) return 1.0;
  const auto& g = gauss_legendre(resolution);
  auto integrate = [&](double a, double b, auto&& f) {
    const double h = 0.5 * (b - a), m = 0.5 * (a + b);
    double s = 0.0;
    for (int i = 0; i < resolution; ++i) s += g.weights[i] * f(m + h * g.nodes[i]);
    return s * h;
  };
  auto below = [&](double s) { return newton_profile(d, iterations - 1, s, resolution) * std::pow(s, d - 1); };
  auto above = [&](double s) { return newton_profile(d, iterations - 1, s, resolution) * E.radial(s) * std::pow(s, d - 1); };
  double inner = 0.0;
  if (r > 0.0) inner = E.radial(r) * integrate(0.0, r, below);
  const double outer = r < 1.0 ? integrate(r, 1.0, above) : 0.0;
  return d * (inner + outer);
}

/// Least-squares fit of the (k+1)-fold iterate by a polynomial of degree
/// k+1 in |x|^2 on `samples` radii spread over [0.05, 0.95].
inline NewtonFit newton_iterate_fit(const AmbientSpace& space, int k, int samples, int resolution = 48) {
  const int d = space.d();
  if (d != 2 && d != 3) throw std::invalid_argument("newton_iterate_fit: d must be 2 or 3");
  if (k < 0 || k > 2) throw std::invalid_argument("newton_iterate_fit: k must be in [0, 2]");
  const int nc = k + 2;
  if (samples < 2 * nc) throw std::invalid_argument("newton_iterate_fit: need samples >= 2(k+2)");
  NewtonFit fit;
  fit.d = d;
  fit.k = k;
  fit.resolution = resolution;
  for (int i = 0; i < samples; ++i) {
    const double r = 0.05 + 0.9 * i / (samples - 1);
    fit.radii.push_back(r);
    fit.profile.push_back(newton_profile(d, k + 1, r, resolution));
  }
  // Normal equations in long double; nc <= 4.
  std::vector<long double> a(nc * nc, 0.0L), b(nc, 0.0L);
  for (int i = 0; i < samples; ++i) {
    const long double t = static_cast<long double>(fit.radii[i]) * fit.radii[i];
    std::vector<long double> row(nc);
    row[0] = 1.0L;
    for (int c = 1; c < nc; ++c) row[c] = row[c - 1] * t;
    for (int r = 0; r < nc; ++r) {
      b[r] += row[r] * fit.profile[i];
      for (int c = 0; c < nc; ++c) a[r * nc + c] += row[r] * row[c];
    }
  }
  for (int c = 0; c < nc; ++c) {
    int piv = c;
    for (int r = c + 1; r < nc; ++r)
      if (std::abs(a[r * nc + c]) > std::abs(a[piv * nc + c])) piv = r;
    for (int j = 0; j < nc; ++j) std::swap(a[c * nc + j], a[piv * nc + j]);
    std::swap(b[c], b[piv]);
    for (int r = c + 1; r < nc; ++r) {
      const long double f = a[r * nc + c] / a[c * nc + c];
      for (int j = c; j < nc; ++j) a[r * nc + j] -= f * a[c * nc + j];
      b[r] -= f * b[c];
    }
  }
  std::vector<long double> x(nc);
  for (int r = nc - 1; r >= 0; --r) {
    long double s = b[r];
    for (int j = r + 1; j < nc; ++j) s -= a[r * nc + j] * x[j];
    x[r] = s / a[r * nc + r];
  }
  for (auto v : x) fit.coefficients.push_back(static_cast<double>(v));
  for (int i = 0; i < samples; ++i) {
    const double t = fit.radii[i] * fit.radii[i];
    double p = 0.0;
    for (int c = nc - 1; c >= 0; --c) p = p * t + fit.coefficients[c];
    fit.residual = std::max(fit.residual, std::abs(p - fit.profile[i]));
  }
  return fit;
}

}  // namespace harmcantor
