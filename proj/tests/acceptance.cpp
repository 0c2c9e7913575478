// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any
// failure. Each criterion also has a wall-clock budget.

#include <chrono>
#include <complex>
#include <cstdio>
#include <functional>
#include <numbers>
#include <string>

#include "harmcantor/appendix2d.hpp"
#include "harmcantor/cantor.hpp"
#include "harmcantor/quad.hpp"
#include "harmcantor/sio.hpp"

using namespace harmcantor;

namespace {

struct Outcome {
  bool ok = false;
  std::string detail;
};

int failures = 0;

void criterion(int id, const char* name, double budget_s, const std::function<Outcome()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const bool in_time = s < budget_s;
  const bool pass = o.ok && in_time;
  if (!pass) ++failures;
  std::printf("%s %2d %-28s %8.2fs / %.0fs  %s%s\n", pass ? "PASS" : "FAIL", id, name, s, budget_s, o.detail.c_str(),
              in_time ? "" : " [over time budget]");
  std::fflush(stdout);
}

std::string fmt(const char* f, double a, double b = 0, double c = 0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

HomogeneousPolynomial random_odd(int d, int deg, CounterRng& rng) {
  HomogeneousPolynomial p(d, deg);
  for (const auto& e : monomial_basis(d, deg))
    if (rng.uniform() < 0.5)
      p.add_term(e, mpq_class(static_cast<long>(rng.below(19)) - 9, 1 + static_cast<long>(rng.below(7))));
  if (p.is_zero()) p.add_term(monomial_basis(d, deg).front(), 1);
  return p;
}

const CantorTree<2>& tree16() {
  static const CantorTree<2> t(AmbientSpace(2),
                               RadiusSchedule::make(AmbientSpace(2), ScheduleMode::DoublingExponent, 16, 2));
  return t;
}

}  // namespace

int main() {
  criterion(1, "exact annihilation", 10, [] {
    int checks = 0;
    for (int d : {2, 3})
      for (int k : {1, 2, 3})
        for (const auto& ker : kernel_catalog(d, k))
          for (int j = 1; j <= 2 * k; ++j) {
            if (!annihilation_check(ker, j)) return Outcome{false, ker.id() + " j=" + std::to_string(j)};
            ++checks;
          }
    return Outcome{true, std::to_string(checks) + " exact zeros"};
  });

  criterion(2, "decomposition round-trip", 30, [] {
    const HomogeneousPolynomial x3 = HomogeneousPolynomial::monomial(2, {3, 0});
    const auto w = harmonic_decompose(x3);
    const auto expect0 = mpq_class(1, 4) * complex_power_part(3, true);
    const auto expect1 = HomogeneousPolynomial::monomial(2, {1, 0}, mpq_class(3, 4));
    if (w.size() != 2 || !(w[0] == expect0) || !(w[1] == expect1)) return Outcome{false, "worked example differs"};
    CounterRng rng(2, 0);
    for (int t = 0; t < 200; ++t) {
      const int d = 2 + static_cast<int>(rng.below(3));
      const int deg = 3 + 2 * static_cast<int>(rng.below(4));
      const auto p = random_odd(d, deg, rng);
      const auto comps = harmonic_decompose(p);
      for (const auto& h : comps)
        if (!laplacian(h).is_zero()) return Outcome{false, "non-harmonic component at trial " + std::to_string(t)};
      if (!(reassemble(comps) == p)) return Outcome{false, "reassembly differs at trial " + std::to_string(t)};
    }
    return Outcome{true, "200 polynomials, x^3 = (1/4)Re z^3 + (3/4)x|z|^2"};
  });

  criterion(3, "reflectionless residual", 60, [] {
    double worst = 0.0;
    CounterRng rng(3, 0);
    for (int k : {1, 2}) {
      const auto k2 = kernel_catalog(2, k).front();
      const auto k3 = kernel_catalog(3, k).front();
      for (int t = 0; t < 100; ++t) {
        const Ball<2> b(Point<2>{rng.uniform(-3, 3), rng.uniform(-3, 3)}, rng.uniform(0.05, 4));
        const Point<2> x = b.center + (b.radius * 0.9999 * std::sqrt(rng.uniform())) * rng.direction<2>();
        worst = std::max(worst, std::abs(reflectionless_residual<2>(k2, b, x).value));
        const Ball<3> b3(Point<3>{rng.uniform(-3, 3), rng.uniform(-3, 3), rng.uniform(-3, 3)}, rng.uniform(0.05, 4));
        const Point<3> x3 = b3.center + (b3.radius * 0.9999 * std::cbrt(rng.uniform())) * rng.direction<3>();
        worst = std::max(worst, std::abs(reflectionless_residual<3>(k3, b3, x3).value));
      }
    }
    return Outcome{worst <= 1e-8, fmt("max |residual| = %.3g over 400 pairs", worst)};
  });

  criterion(4, "cube packing", 10, [] {
    for (int q = 2; q <= 12; ++q) {
      const AmbientSpace s2(2), s3(3);
      const auto p2 = pack_cubes<2>(s2, Point<2>{}, HighFloat(1), q);
      const auto v2 = verify_packing<2>(p2, Ball<2>(Point<2>{}, 1.0),
                                        Ball<2>(Point<2>{}, packing_enclosing_radius(s2, 1.0, 1.0 / q)), q);
      const auto p3 = pack_cubes<3>(s3, Point<3>{}, HighFloat(1), q);
      const auto v3 = verify_packing<3>(p3, Ball<3>(Point<3>{}, 1.0),
                                        Ball<3>(Point<3>{}, packing_enclosing_radius(s3, 1.0, 1.0 / q)), q * q);
      if (!v2.passed() || !v3.passed()) return Outcome{false, "R/r = " + std::to_string(q)};
    }
    return Outcome{true, "d=2,3 and R/r = 2..12"};
  });

  criterion(5, "construction structure", 120, [] {
    const auto& t = tree16();
    std::string detail;
    for (int k : {1, 2}) {
      const auto r = structure_check(t, k);
      if (!r.passed()) return Outcome{false, "generation " + std::to_string(k)};
      detail += "gen" + std::to_string(k) + " n=" + std::to_string(r.nodes) +
                fmt(" min margin %.3g; ", std::min({r.margin_cubes_in_parent, r.margin_ball_in_cube,
                                                    r.margin_boundary_clearance, r.margin_separation}));
    }
    if (t.generation(1).size() != 16 || t.generation(2).size() != 4096) return Outcome{false, "node counts"};
    const double mass = slice_mass<2>(MeasureSlice<2>(t, 2), Ball<2>(Point<2>{}, 3.0)).value;
    return Outcome{std::abs(mass - 1.0) <= 1e-12, detail + fmt("mass %.15f", mass)};
  });

  criterion(6, "(d-1)-growth", 300, [] {
    const MeasureSlice<2> sl(tree16(), 2);
    const auto a = growth_scan<2>(sl, 10000, 42);
    const auto b = growth_scan<2>(sl, 10000, 42);
    const bool same = a.max_ratio == b.max_ratio;
    return Outcome{a.max_ratio <= 10.0 && same,
                   fmt("max ratio %.6g, rerun %.6g", a.max_ratio, b.max_ratio)};
  });

  criterion(7, "summability hypothesis", 1, [] {
    const AmbientSpace sp(2);
    const auto good = summability_check(RadiusSchedule::make(sp, ScheduleMode::DoublingExponent, 16, 2));
    const auto bad = summability_check(RadiusSchedule::make(sp, ScheduleMode::FixedRatio, 16, 2));
    return Outcome{good.passed && !bad.passed, std::string("doubling ") + (good.passed ? "passes" : "fails") +
                                                   ", fixed-ratio " + (bad.passed ? "passes" : "fails")};
  });

  criterion(8, "treecode vs direct", 120, [] {
    const auto& t = tree16();
    const auto k = catalog_kernel("d2.re3");
    const double tol = 1e-6;
    TreecodeOptions opt;
    opt.tol = tol;
    CounterRng rng(8, 0);
    double worst = 0.0;
    int opened = 0;
    // Ten points near the support and ten far enough out for the far-field
    // shortcut to fire (C_open r_1 / dist^2 <= tol needs dist >~ 700).
    for (int i = 0; i < 20; ++i) {
      Point<2> x;
      if (i < 10) {
        do {
          x = Point<2>{rng.uniform(-1.2, 1.2), rng.uniform(-1.2, 1.2)};
        } while (t.distance_to_support(x, 2) < 1e-3);
      } else {
        x = std::exp(rng.uniform(std::log(800.0), std::log(4000.0))) * rng.direction<2>();
      }
      const auto a = potential_eval<2>(t, 2, k, x, opt);
      const auto b = potential_direct<2>(t, 2, k, x, tol);
      if (a.effort < b.effort) ++opened;
      worst = std::max(worst, std::abs(a.value - b.value));
    }
    return Outcome{worst <= 2 * tol && opened > 0,
                   fmt("max |treecode - direct| = %.3g, shortcut used at %.0f of 20 points", worst, opened)};
  });

  criterion(9, "boundedness sweep", 900, [] {
    SweepConfig cfg;
    cfg.m = 2;
    cfg.eps_min = 1e-3;
    cfg.eps_max = 1.0;
    cfg.eps_count = 13;
    cfg.points_per_eps = 50;
    const auto r = boundedness_sweep<2>(tree16(), catalog_kernel("d2.re3"), cfg);
    return Outcome{r.pass && r.all_finite && r.uniform_bound_ok && r.slope_ok,
                   fmt("slope %.4f, largest decade %.4g, smallest decade %.4g", r.loglog_slope,
                       r.max_abs_per_decade.front(), r.max_abs_per_decade.back())};
  });

  criterion(10, "appendix exactness", 60, [] {
    for (int n = 2; n <= 200; ++n)
      if (combinatorial_sum(n) != 0) return Outcome{false, "sum nonzero at n=" + std::to_string(n)};
    for (int n = 2; n <= 50; ++n) {
      const auto g = gen_function_check(n);
      if (!g.coefficients_match || g.G_at_1 != 0) return Outcome{false, "coefficients at n=" + std::to_string(n)};
    }
    CounterRng rng(10, 0);
    double worst = 0.0;
    for (int n : {2, 3, 4})
      for (int t = 0; t < 50; ++t) {
        const auto w = std::polar(0.9 * std::sqrt(rng.uniform()), rng.uniform(0, 2 * std::numbers::pi));
        const auto rep = disc_reflectionless_2d(n, w);
        if (!rep.exact_zero || !rep.S_matches_sum) return Outcome{false, "exact path at n=" + std::to_string(n)};
        worst = std::max(worst, rep.numeric_residual());
      }
    return Outcome{worst <= 1e-8, fmt("max numeric residual %.3g", worst)};
  });

  criterion(11, "Newtonian iterate", 60, [] {
    const double pi = std::numbers::pi;
    const auto f3 = newton_iterate_fit(AmbientSpace(3), 0, 40);
    const auto f2 = newton_iterate_fit(AmbientSpace(2), 0, 40);
    const bool c3 = std::abs(f3.coefficients[0] - 3 / (8 * pi)) <= 1e-6 && std::abs(f3.coefficients[1] + 1 / (8 * pi)) <= 1e-6;
    const bool c2 = std::abs(f2.coefficients[0] - 1 / (4 * pi)) <= 1e-6 && std::abs(f2.coefficients[1] + 1 / (4 * pi)) <= 1e-6;
    const auto a = newton_iterate_fit(AmbientSpace(2), 1, 40, 32);
    const auto b = newton_iterate_fit(AmbientSpace(2), 1, 40, 48);
    double diff = 0.0;
    for (std::size_t i = 0; i < a.coefficients.size(); ++i)
      diff = std::max(diff, std::abs(a.coefficients[i] - b.coefficients[i]));
    const bool c21 = a.residual <= 1e-6 && b.residual <= 1e-6 && diff <= 1e-6;
    return Outcome{c3 && c2 && c21, fmt("k=1 residuals %.3g/%.3g, grid difference %.3g", a.residual, b.residual, diff)};
  });

  std::printf("%s: %d failure(s)\n", failures ? "FAIL" : "PASS", failures);
  return failures ? 1 : 0;
}
