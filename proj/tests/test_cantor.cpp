#include <gtest/gtest.h>

#include <sstream>

#include "harmcantor/cantor.hpp"

using namespace harmcantor;

namespace {

RadiusSchedule doubling2(int depth = 2) {
  return RadiusSchedule::make(AmbientSpace(2), ScheduleMode::DoublingExponent, 16, depth);
}

}  // namespace

TEST(Schedule, DoublingExponentRadii) {
  const auto s = doubling2(3);
  EXPECT_EQ(s.inverse_radius(0), 1);
  EXPECT_EQ(s.inverse_radius(1), 16);
  EXPECT_EQ(s.inverse_radius(2), 4096);
  EXPECT_EQ(s.inverse_radius(3), mpz_class("268435456"));  // 16^7
  EXPECT_EQ(s.node_count(2), 4096);
  EXPECT_EQ(s.children_per_node(1), 16);
  EXPECT_EQ(s.children_per_node(2), 256);
  EXPECT_TRUE(s.threshold_ok());
}

TEST(Schedule, FixedRatioAndDelta) {
  const AmbientSpace sp(2);
  const auto s = RadiusSchedule::make(sp, ScheduleMode::FixedRatio, 16, 3);
  EXPECT_EQ(s.inverse_radius(3), 4096);
  // δ_{k+1} = A (r_{k+1}/r_k)^{(d-1)/d}
  EXPECT_NEAR(s.delta(1), sp.inflation_constant() * std::pow(1.0 / 16, 0.5), 1e-15);
  EXPECT_NEAR(s.delta(2), s.delta(1), 1e-15);
}

TEST(Schedule, ValidationRejectsBadInput) {
  const AmbientSpace sp(2);
  EXPECT_THROW(RadiusSchedule::make(sp, ScheduleMode::FixedRatio, 4, 2), std::invalid_argument);
  EXPECT_NO_THROW(RadiusSchedule::make(sp, ScheduleMode::FixedRatio, 4, 2, false));
  EXPECT_THROW(RadiusSchedule::custom(sp, {1, 16, 100}), std::invalid_argument);  // not a multiple
  EXPECT_THROW(RadiusSchedule::custom(sp, {1, 16, 16}), std::invalid_argument);   // not increasing
  const auto c = RadiusSchedule::custom(sp, {1, 16, 512});
  EXPECT_EQ(c.ratio(2), 32);
  EXPECT_EQ(schedule_mode_from_string(to_string(ScheduleMode::Custom)), ScheduleMode::Custom);
  EXPECT_THROW(schedule_mode_from_string("nope"), std::invalid_argument);
}

TEST(Summability, DoublingPassesFixedFails) {
  const AmbientSpace sp(2);
  const auto good = summability_check(doubling2());
  EXPECT_TRUE(good.passed);
  EXPECT_GE(good.domination_from, 0);
  const auto bad = summability_check(RadiusSchedule::make(sp, ScheduleMode::FixedRatio, 16, 2));
  EXPECT_FALSE(bad.passed);
  const auto three = summability_check(RadiusSchedule::make(AmbientSpace(3), ScheduleMode::DoublingExponent, 32, 2));
  EXPECT_TRUE(three.passed);
}

TEST(Tree, GenerationCountsAndLevels) {
  const CantorTree<2> tree(AmbientSpace(2), doubling2());
  EXPECT_EQ(tree.generation(0).size(), 1u);
  EXPECT_EQ(tree.generation(1).size(), 16u);
  EXPECT_EQ(tree.generation(2).size(), 4096u);
  for (const auto& n : tree.generation(2)) {
    EXPECT_EQ(n.level, 2);
    EXPECT_EQ(n.path.size(), 2u);
    EXPECT_EQ(tree.center_of(n.path), n.center);
  }
  EXPECT_THROW(tree.expand_node(tree.generation(2).front()), std::out_of_range);
  EXPECT_FALSE(tree.root().cube().has_value());
}

TEST(Tree, BudgetIsEnforced) {
  const CantorTree<2> tree(AmbientSpace(2), doubling2(), 1000);
  EXPECT_NO_THROW(tree.generation(1));
  EXPECT_THROW(tree.generation(2), std::length_error);
}

TEST(Structure, GenerationsOneAndTwoPass) {
  const CantorTree<2> tree(AmbientSpace(2), doubling2());
  for (int k : {1, 2}) {
    const auto rep = structure_check(tree, k);
    EXPECT_TRUE(rep.passed()) << "k=" << k;
    EXPECT_TRUE(rep.count_ok);
    EXPECT_GT(rep.margin_cubes_in_parent, 0.0);
    EXPECT_GT(rep.margin_ball_in_cube, 0.0);
    EXPECT_GT(rep.margin_boundary_clearance, 0.0);
    EXPECT_GT(rep.margin_separation, 0.0);
  }
}

TEST(Structure, ThreeDimensionalFirstGeneration) {
  const AmbientSpace sp(3);
  const CantorTree<3> tree(sp, RadiusSchedule::make(sp, ScheduleMode::DoublingExponent, 32, 1));
  const auto rep = structure_check(tree, 1);
  EXPECT_EQ(rep.nodes, 1024u);
  EXPECT_TRUE(rep.passed());
}

TEST(Measure, TotalMassIsOne) {
  const CantorTree<2> tree(AmbientSpace(2), doubling2());
  for (int m : {0, 1, 2}) {
    const MeasureSlice<2> sl(tree, m);
    EXPECT_NEAR(slice_mass<2>(sl, Ball<2>(Point<2>{}, 3.0)).value, 1.0, 1e-12) << "m=" << m;
  }
  EXPECT_THROW(MeasureSlice<2>(tree, 3), std::out_of_range);
}

TEST(Measure, SliceMassMatchesBruteForce) {
  const CantorTree<2> tree(AmbientSpace(2), doubling2());
  const MeasureSlice<2> sl(tree, 2);
  const auto& s = tree.schedule();
  const AmbientSpace sp(2);
  CounterRng rng(11, 0);
  for (int t = 0; t < 10; ++t) {
    const Ball<2> region(Point<2>{rng.uniform(-1, 1), rng.uniform(-1, 1)}, rng.uniform(0.01, 0.5));
    double brute = 0.0;
    for (const auto& n : tree.generation(2))
      brute += ball_ball_intersection_volume<2>(sp, n.ball_tilde(), region).value / s.radius(2);
    EXPECT_NEAR(slice_mass<2>(sl, region).value, brute, 1e-12);
  }
}

TEST(Tree, DistanceToSupportMatchesBruteForce) {
  const CantorTree<2> tree(AmbientSpace(2), doubling2());
  CounterRng rng(3, 0);
  for (int t = 0; t < 20; ++t) {
    const Point<2> x{rng.uniform(-1.2, 1.2), rng.uniform(-1.2, 1.2)};
    double best = 1e300;
    for (const auto& n : tree.generation(2)) best = std::min(best, std::max(0.0, distance<2>(x, n.center) - n.r_tilde));
    EXPECT_NEAR(tree.distance_to_support(x, 2), best, 1e-14);
  }
}

TEST(Growth, BoundedAndDeterministic) {
  const CantorTree<2> tree(AmbientSpace(2), doubling2());
  const MeasureSlice<2> sl(tree, 2);
  const auto a = growth_scan<2>(sl, 500, 42, 1);
  const auto b = growth_scan<2>(sl, 500, 42, 3);
  EXPECT_LE(a.max_ratio, 10.0);
  EXPECT_GT(a.max_ratio, 0.0);
  EXPECT_EQ(a.max_ratio, b.max_ratio);
  std::ostringstream oa, ob;
  write_growth_csv<2>(oa, a);
  write_growth_csv<2>(ob, b);
  EXPECT_EQ(oa.str(), ob.str());
  const auto c = growth_scan<2>(sl, 500, 43, 1);
  EXPECT_NE(a.max_ratio, c.max_ratio);
}

TEST(Dump, OneJsonObjectPerNode) {
  const CantorTree<2> tree(AmbientSpace(2), doubling2());
  std::ostringstream os;
  dump_tree<2>(os, tree, 1);
  std::istringstream in(os.str());
  std::string line;
  int n = 0;
  while (std::getline(in, line)) {
    const auto j = nlohmann::json::parse(line);
    EXPECT_TRUE(j.contains("center"));
    ++n;
  }
  EXPECT_EQ(n, 17);
}
