#include <gtest/gtest.h>

#include <sstream>

#include "harmcantor/sio.hpp"

using namespace harmcantor;

namespace {

const CantorTree<2>& tree2() {
  static const CantorTree<2> t(AmbientSpace(2),
                               RadiusSchedule::make(AmbientSpace(2), ScheduleMode::DoublingExponent, 16, 2));
  return t;
}

SweepConfig small_sweep() {
  SweepConfig c;
  c.m = 2;
  c.eps_min = 1e-2;
  c.eps_max = 1.0;
  c.eps_count = 5;
  c.points_per_eps = 3;
  c.threads = 1;
  return c;
}

}  // namespace

TEST(Treecode, AgreesWithDirectSummation) {
  const auto& t = tree2();
  const auto k = catalog_kernel("d2.re3");
  CounterRng rng(8, 0);
  for (int i = 0; i < 6; ++i) {
    Point<2> x;
    do {
      x = Point<2>{rng.uniform(-1.1, 1.1), rng.uniform(-1.1, 1.1)};
    } while (t.distance_to_support(x, 2) < 1e-3);
    const auto tc = potential_eval<2>(t, 2, k, x);
    const auto dr = potential_direct<2>(t, 2, k, x);
    EXPECT_NEAR(tc.value, dr.value, 2e-6) << x[0] << "," << x[1];
    EXPECT_LE(tc.effort, dr.effort);
  }
}

TEST(Treecode, FarPointApproachesPointMass) {
  // Far away the whole measure (mass 1) acts like a point mass at the origin.
  // The child layouts are not centrally symmetric, so the first moment is
  // nonzero and the relative gap shrinks like 1/|x|.
  const auto k = catalog_kernel("d2.re3");
  const Point<2> x{50, 0}, y{500, 0};
  const auto q = potential_eval<2>(tree2(), 2, k, x);
  TreecodeOptions fine;
  fine.tol = 1e-11;  // the default absolute tolerance would swamp the gap at y
  const auto qy = potential_eval<2>(tree2(), 2, k, y, fine);
  const double gx = std::abs(q.value / k(x.data()) - 1), gy = std::abs(qy.value / k(y.data()) - 1);
  EXPECT_LT(gx, 1e-2);
  EXPECT_LT(gy, 1e-3);
  EXPECT_GT(gx / gy, 9.0);  // 10 plus the second-order share at x
  EXPECT_LT(gx / gy, 15.0);
  EXPECT_NEAR(q.value, potential_direct<2>(tree2(), 2, k, x).value, 2e-6);
  EXPECT_EQ(q.method, "treecode");
}

TEST(Treecode, RejectsPointsOnTheSupport) {
  const auto k = catalog_kernel("d2.re3");
  const auto c = tree2().generation(2).front().center;
  EXPECT_THROW(potential_direct<2>(tree2(), 2, k, c), std::domain_error);
}

TEST(Farfield, InequalityHoldsWithModestConstant) {
  const auto k = catalog_kernel("d2.re3");
  const auto rep = farfield_scan<2>(k, 1.0, 1.0 / 64, 2000, 42, 1);
  EXPECT_GT(rep.empirical_constant, 0.0);
  EXPECT_LT(rep.empirical_constant, 1000.0);
  const auto again = farfield_scan<2>(k, 1.0, 1.0 / 64, 2000, 42, 2);
  EXPECT_EQ(rep.empirical_constant, again.empirical_constant);
}

TEST(Farfield, PreconditionsAreChecked) {
  const auto k = catalog_kernel("d2.re3");
  const AmbientSpace sp(2);
  const double R = 1.0, r = 0.25;
  const double side = std::sqrt(sp.kappa() * R * r);
  DiscreteMeasure<2> nu1{{{0, 0}}, {1.0}, Cube<2>(Point<2>{}, side)};
  DiscreteMeasure<2> nu2{{{0.1, 0}}, {1.0}, Ball<2>(Point<2>{}, 2 * r)};
  EXPECT_NO_THROW(farfield_compare<2>(k, R, r, nu1, nu2, {5, 1}));
  auto heavy = nu2;
  heavy.weights[0] = 2.0;
  EXPECT_THROW(farfield_compare<2>(k, R, r, nu1, heavy, {5, 1}), std::invalid_argument);
  auto outside = nu2;
  outside.points[0] = {1.0, 0};
  EXPECT_THROW(farfield_compare<2>(k, R, r, nu1, outside, {5, 1}), std::invalid_argument);
  EXPECT_THROW(farfield_compare<2>(k, R, r, nu1, nu2, {side / 2 + 1e-3, 0}), std::invalid_argument);
}

TEST(Sweep, LevelSelectionAndValidation) {
  const auto& t = tree2();
  auto c = small_sweep();
  EXPECT_TRUE(validate_sweep<2>(t, c).empty());
  c.m = 1;  // r_1 = 1/16 is not < 1e-2/4
  EXPECT_NE(validate_sweep<2>(t, c).find("hypothesis violated"), std::string::npos);
  c.m = -1;
  EXPECT_EQ(sweep_level<2>(t.schedule(), c, 1.0), 1);
  EXPECT_EQ(sweep_level<2>(t.schedule(), c, 0.01), 2);
  c.eps_min = 1e-4;
  EXPECT_FALSE(validate_sweep<2>(t, c).empty());
  EXPECT_THROW(boundedness_sweep<2>(t, catalog_kernel("d2.re3"), c), std::invalid_argument);
}

TEST(Sweep, SlopeOfPowerLaw) {
  const std::vector<double> x{1, 10, 100};
  const std::vector<double> y{1, 0.1, 0.01};
  EXPECT_NEAR(loglog_slope(x, y), -1.0, 1e-14);
}

TEST(Sweep, DeterministicAcrossThreadCounts) {
  const auto k = catalog_kernel("d2.re3");
  auto c = small_sweep();
  const auto a = boundedness_sweep<2>(tree2(), k, c);
  c.threads = 3;
  const auto b = boundedness_sweep<2>(tree2(), k, c);
  std::ostringstream oa, ob;
  write_sweep_csv(oa, a);
  write_sweep_csv(ob, b);
  EXPECT_EQ(oa.str(), ob.str());
  EXPECT_TRUE(a.all_finite);
  EXPECT_TRUE(a.hypothesis_ok);
  for (const auto& r : a.records) EXPECT_GE(r.eps_true, r.eps_nominal / 2);
  EXPECT_EQ(a.max_abs_per_decade.size(), 2u);
}

TEST(Sweep, SummaryMarksNonAdmissibleKernels) {
  auto c = small_sweep();
  c.points_per_eps = 1;
  const auto r = riesz_contrast<2>(tree2(), c);
  EXPECT_FALSE(r.admissible);
  EXPECT_TRUE(sweep_summary(r)["pass"].is_null());
  const auto a = boundedness_sweep<2>(tree2(), catalog_kernel("d2.im3"), c);
  EXPECT_TRUE(sweep_summary(a)["pass"].is_boolean());
}
