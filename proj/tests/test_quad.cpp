#include <gtest/gtest.h>

#include <numbers>

#include "harmcantor/gauss.hpp"
#include "harmcantor/quad.hpp"

using namespace harmcantor;

TEST(Gauss, IntegratesPolynomialsExactly) {
  const auto& g = gauss_legendre(8);
  double s = 0.0, w = 0.0;
  for (int i = 0; i < 8; ++i) {
    s += g.weights[i] * std::pow(g.nodes[i], 14);
    w += g.weights[i];
  }
  EXPECT_NEAR(w, 2.0, 1e-15);
  EXPECT_NEAR(s, 2.0 / 15.0, 1e-15);
}

TEST(CubeIntegral, FarPointSeesPointMass) {
  const AmbientSpace sp(2);
  const auto k = catalog_kernel("d2.re3");
  const Cube<2> c(Point<2>{}, sp.kappa_root());  // unit normalized mass
  const auto q = integrate_kernel_over_cube<2>(k, c, {10, 0}, 1e-10);
  // Point mass 0.1 plus the second-moment term (1/2)(π/12)ΔK with ΔK = -8/1000.
  EXPECT_NEAR(q.value, 0.1 - std::numbers::pi / 12 * 0.004, 2e-5);
  EXPECT_NEAR(q.value, 0.1, 1.1e-3);
  EXPECT_THROW(integrate_kernel_over_cube<2>(k, c, {0.1, 0}, 1e-8), std::domain_error);
}

TEST(CubeIntegral, ConvergesNearTheCube) {
  const auto k = catalog_kernel("d2.im3");
  const Cube<2> c(Point<2>{}, 1.0);
  const auto a = integrate_kernel_over_cube<2>(k, c, {0.55, 0.3}, 1e-8);
  const auto b = integrate_kernel_over_cube<2>(k, c, {0.55, 0.3}, 1e-11);
  EXPECT_NEAR(a.value, b.value, 1e-7);
}

TEST(BallExterior, MeanValueForHarmonicKernel) {
  // x1/|x|^2 is harmonic off the origin, so the ball integral is m_d(B) K(x - c).
  const auto k = riesz_kernel(2);
  const Ball<2> b(Point<2>{0.2, -0.1}, 0.3);
  const Point<2> x{0.9, 0.4};
  const auto q = integrate_kernel_over_ball_exterior<2>(k, b, x, 1e-13);
  const Point<2> v = x - b.center;
  EXPECT_NEAR(q.value, 0.09 * k(v.data()), 1e-12);
  const auto k3 = riesz_kernel(3);
  const Ball<3> b3(Point<3>{0, 0, 0}, 0.5);
  const Point<3> x3{0.3, 0.7, -0.2};
  EXPECT_NEAR(integrate_kernel_over_ball_exterior<3>(k3, b3, x3, 1e-13).value, 0.125 * k3(x3.data()), 1e-12);
}

TEST(BallExterior, RulesAgreeAndRejectInterior) {
  const auto k = catalog_kernel("d3.xyz3");
  const Ball<3> b(Point<3>{0, 0, 0}, 1.0);
  const Point<3> x{1.05, 0.4, 0.3};
  const auto t = integrate_kernel_over_ball_exterior<3>(k, b, x, 1e-11, SphereRule::Trapezoid);
  const auto g = integrate_kernel_over_ball_exterior<3>(k, b, x, 1e-11, SphereRule::Gauss);
  EXPECT_NEAR(t.value, g.value, 1e-9);
  EXPECT_THROW(integrate_kernel_over_ball_exterior<3>(k, b, Point<3>{0.5, 0, 0}, 1e-8), std::domain_error);
}

TEST(Reflectionless, ExamplesAndRandomPairs) {
  const auto k2 = catalog_kernel("d2.re3");
  EXPECT_LE(std::abs(reflectionless_residual<2>(k2, Ball<2>(Point<2>{}, 1.0), {0.3, 0.2}).value), 1e-12);
  EXPECT_LE(std::abs(reflectionless_residual<2>(k2, Ball<2>(Point<2>{}, 1.0), {0.999, 0}).value), 1e-10);
  CounterRng rng(17, 0);
  for (int kk : {1, 2}) {
    for (const auto& ker : kernel_catalog(2, kk))
      for (int t = 0; t < 10; ++t) {
        const Ball<2> b(Point<2>{rng.uniform(-2, 2), rng.uniform(-2, 2)}, rng.uniform(0.1, 3));
        const Point<2> x = b.center + (b.radius * std::sqrt(rng.uniform()) * 0.999) * rng.direction<2>();
        EXPECT_LE(std::abs(reflectionless_residual<2>(ker, b, x).value), 1e-8 * b.radius);
      }
    for (const auto& ker : kernel_catalog(3, kk))
      for (int t = 0; t < 5; ++t) {
        const Ball<3> b(Point<3>{rng.uniform(-2, 2), rng.uniform(-2, 2), rng.uniform(-2, 2)}, rng.uniform(0.1, 3));
        const Point<3> x = b.center + (b.radius * std::cbrt(rng.uniform()) * 0.999) * rng.direction<3>();
        EXPECT_LE(std::abs(reflectionless_residual<3>(ker, b, x).value), 1e-8 * b.radius);
      }
  }
}

TEST(Reflectionless, RieszKernelIsNotReflectionless) {
  // Negative control: degree-one numerators leave a nonzero residual off center.
  const auto q = reflectionless_residual<2>(riesz_kernel(2), Ball<2>(Point<2>{}, 1.0), {0.5, 0});
  EXPECT_GT(std::abs(q.value), 1e-3);
  const auto c = reflectionless_residual<2>(riesz_kernel(2), Ball<2>(Point<2>{}, 1.0), {0, 0});
  EXPECT_LE(std::abs(c.value), 1e-14);
}

TEST(AbsIntegral, CenteredBallRatioIsScaleFree) {
  const auto k = catalog_kernel("d2.re3");
  const auto a = abs_kernel_integral<2>(k, Region<2>(Ball<2>(Point<2>{}, 1.0)), 1e-10);
  const auto b = abs_kernel_integral<2>(k, Region<2>(Ball<2>(Point<2>{}, 2.0)), 1e-10);
  EXPECT_NEAR(a.ratio, 4.0 / std::numbers::pi, 1e-8);
  EXPECT_NEAR(b.ratio, 4.0 / std::numbers::pi, 1e-8);
  EXPECT_NEAR(b.lebesgue_ratio, 4.0 / std::sqrt(std::numbers::pi), 1e-8);
  EXPECT_NEAR(b.measure, 4.0, 1e-12);
}

TEST(AbsIntegral, UnionOfDisjointBallsIsAdditive) {
  const auto k = riesz_kernel(2);
  const Ball<2> b1(Point<2>{1.0, 0.0}, 0.3), b2(Point<2>{-0.5, 1.0}, 0.2);
  const auto u = abs_kernel_integral<2>(k, Region<2>(std::vector<Ball<2>>{b1, b2}), 1e-11);
  const auto s1 = abs_kernel_integral<2>(k, Region<2>(b1), 1e-11);
  const auto s2 = abs_kernel_integral<2>(k, Region<2>(b2), 1e-11);
  EXPECT_NEAR(u.estimate.value, s1.estimate.value + s2.estimate.value, 1e-9);
  EXPECT_NEAR(u.measure, 0.09 + 0.04, 1e-9);
}

TEST(Newton, FundamentalSolutionValues) {
  EXPECT_NEAR(FundamentalSolution(2).radial(std::exp(1.0)), -1.0 / (2 * std::numbers::pi), 1e-15);
  EXPECT_NEAR(FundamentalSolution(3).radial(2.0), 1.0 / (4 * std::numbers::pi * 2.0), 1e-15);
}

TEST(Newton, ClosedFormsForKZero) {
  const auto f3 = newton_iterate_fit(AmbientSpace(3), 0, 20);
  EXPECT_NEAR(f3.coefficients[0], 3.0 / (8 * std::numbers::pi), 1e-6);
  EXPECT_NEAR(f3.coefficients[1], -1.0 / (8 * std::numbers::pi), 1e-6);
  const auto f2 = newton_iterate_fit(AmbientSpace(2), 0, 20);
  EXPECT_NEAR(f2.coefficients[0], 1.0 / (4 * std::numbers::pi), 1e-6);
  EXPECT_NEAR(f2.coefficients[1], -1.0 / (4 * std::numbers::pi), 1e-6);
  EXPECT_THROW(newton_iterate_fit(AmbientSpace(4), 0, 20), std::invalid_argument);
}

TEST(Newton, SecondIterateIsPolynomialInRadiusSquared) {
  const auto a = newton_iterate_fit(AmbientSpace(2), 1, 16, 32);
  const auto b = newton_iterate_fit(AmbientSpace(2), 1, 16, 48);
  EXPECT_LE(a.residual, 1e-6);
  EXPECT_LE(b.residual, 1e-6);
  for (std::size_t i = 0; i < a.coefficients.size(); ++i) EXPECT_NEAR(a.coefficients[i], b.coefficients[i], 1e-6);
}
