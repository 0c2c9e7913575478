#include <gtest/gtest.h>

#include <cmath>
#include <set>
#include <sstream>

#include "harmcantor/geomspace.hpp"

using namespace harmcantor;

TEST(AmbientSpace, KappaValues) {
  const double pi = boost::math::constants::pi<double>();
  EXPECT_NEAR(AmbientSpace(1).kappa(), 2.0, 1e-15);
  EXPECT_NEAR(AmbientSpace(2).kappa(), pi, 1e-15);
  EXPECT_NEAR(AmbientSpace(3).kappa(), 4.0 * pi / 3.0, 1e-14);
  EXPECT_NEAR(AmbientSpace(4).kappa(), pi * pi / 2.0, 1e-14);
  EXPECT_NEAR(AmbientSpace(2).inflation_constant(), std::sqrt(2.0 * pi), 1e-14);
  EXPECT_THROW(AmbientSpace(0), std::invalid_argument);
}

TEST(Cube, DistanceAndDepth) {
  const Cube<2> c(Point<2>{0, 0}, 2.0);
  EXPECT_DOUBLE_EQ(c.distance_to({3, 0}), 2.0);
  EXPECT_DOUBLE_EQ(c.distance_to({4, 5}), 5.0);
  EXPECT_DOUBLE_EQ(c.distance_to({0.5, 0.5}), 0.0);
  EXPECT_DOUBLE_EQ(c.depth_of({0.5, 0.25}), 0.5);
  EXPECT_THROW(Cube<2>(Point<2>{}, 0.0), std::invalid_argument);
  EXPECT_THROW(Ball<2>(Point<2>{}, -1.0), std::invalid_argument);
}

TEST(Packing, SideFormula) {
  const AmbientSpace sp(2);
  const auto p = pack_cubes<2>(sp, Point<2>{}, HighFloat(1), 4);
  EXPECT_NEAR(p.side, std::sqrt(sp.kappa() * 0.25), 1e-15);
  EXPECT_THROW(pack_cubes<2>(sp, Point<2>{}, 1.0, 0.3), std::invalid_argument);
  EXPECT_THROW(pack_cubes<2>(sp, Point<2>{}, 1.0, 2.0), std::invalid_argument);
}

TEST(Packing, PassesForAllRatios) {
  for (int q = 2; q <= 12; ++q) {
    {
      const AmbientSpace sp(2);
      const auto p = pack_cubes<2>(sp, Point<2>{}, HighFloat(1), q);
      const Ball<2> b(Point<2>{}, 1.0), inf(Point<2>{}, packing_enclosing_radius(sp, 1.0, 1.0 / q));
      const auto rep = verify_packing<2>(p, b, inf, static_cast<std::size_t>(q));
      EXPECT_TRUE(rep.passed()) << "d=2 q=" << q;
      EXPECT_GE(rep.worst_containment_margin, 0.0);
    }
    {
      const AmbientSpace sp(3);
      const auto p = pack_cubes<3>(sp, Point<3>{}, HighFloat(1), q);
      const Ball<3> b(Point<3>{}, 1.0), inf(Point<3>{}, packing_enclosing_radius(sp, 1.0, 1.0 / q));
      const auto rep = verify_packing<3>(p, b, inf, static_cast<std::size_t>(q * q));
      EXPECT_TRUE(rep.passed()) << "d=3 q=" << q;
    }
  }
}

TEST(Packing, EveryCubeMeetsBallAndNoCubeIsMissed) {
  const AmbientSpace sp(2);
  const auto p = pack_cubes<2>(sp, Point<2>{0.3, -0.2}, HighFloat(1), 7);
  for (std::size_t n = 0; n < p.size(); ++n) EXPECT_LE(p.cube(n).distance_to({0.3, -0.2}), 1.0 + 1e-12);
  // Neighbours just outside the accepted set lie outside the ball.
  std::set<GridIndex<2>> have(p.indices.begin(), p.indices.end());
  for (const auto& idx : p.indices)
    for (int dx = -1; dx <= 1; ++dx)
      for (int dy = -1; dy <= 1; ++dy) {
        GridIndex<2> nb{idx[0] + dx, idx[1] + dy};
        if (have.count(nb)) continue;
        EXPECT_GT(Cube<2>(p.center_of(nb), p.side).distance_to({0.3, -0.2}), 1.0 - 1e-12);
      }
}

TEST(Packing, NegativeControls) {
  const AmbientSpace sp(2);
  auto p = pack_cubes<2>(sp, Point<2>{}, HighFloat(1), 5);
  const Ball<2> b(Point<2>{}, 1.0), inf(Point<2>{}, packing_enclosing_radius(sp, 1.0, 0.2));
  // A too-small container fails containment.
  EXPECT_FALSE(verify_packing<2>(p, b, Ball<2>(Point<2>{}, 1.0), 5).contained);
  // A required count equal to the count fails strictness.
  EXPECT_FALSE(verify_packing<2>(p, b, inf, p.size()).count_ok);
  // A duplicated cube fails disjointness.
  p.indices.push_back(p.indices.front());
  EXPECT_FALSE(verify_packing<2>(p, b, inf, 5).disjoint);
}

TEST(Packing, CsvUsesFullPrecision) {
  const AmbientSpace sp(2);
  const auto p = pack_cubes<2>(sp, Point<2>{}, HighFloat(1), 3);
  const Ball<2> b(Point<2>{}, 1.0), inf(Point<2>{}, packing_enclosing_radius(sp, 1.0, 1.0 / 3));
  std::ostringstream os;
  write_packing_csv<2>(os, p, verify_packing<2>(p, b, inf, 3));
  const auto text = os.str();
  EXPECT_EQ(text.substr(0, text.find('\n')), "index,c0,c1,side,inside_inflated,count_ok");
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", p.side);
  EXPECT_NE(text.find(buf), std::string::npos);
}

TEST(Intersection, ClosedFormsAndMonteCarlo) {
  const AmbientSpace s2(2), s3(3), s4(4);
  EXPECT_DOUBLE_EQ(ball_ball_intersection_volume<2>(s2, Ball<2>({0, 0}, 1), Ball<2>({3, 0}, 1)).value, 0.0);
  EXPECT_NEAR(ball_ball_intersection_volume<2>(s2, Ball<2>({0, 0}, 1), Ball<2>({0.1, 0}, 0.5)).value, 0.25, 1e-15);
  // Two unit disks at distance 1: lens area 2π/3 - √3/2.
  const double pi = boost::math::constants::pi<double>();
  EXPECT_NEAR(ball_ball_intersection_volume<2>(s2, Ball<2>({0, 0}, 1), Ball<2>({1, 0}, 1)).value,
              (2 * pi / 3 - std::sqrt(3.0) / 2) / pi, 1e-14);
  // Two unit balls at distance 1 in R^3: volume 5π/12.
  EXPECT_NEAR(ball_ball_intersection_volume<3>(s3, Ball<3>({0, 0, 0}, 1), Ball<3>({1, 0, 0}, 1)).value,
              (5 * pi / 12) / s3.kappa(), 1e-14);
  const auto mc = ball_ball_intersection_volume<4>(s4, Ball<4>({0, 0, 0, 0}, 1), Ball<4>({1, 0, 0, 0}, 1));
  EXPECT_GT(mc.value, 0.0);
  EXPECT_LT(mc.value, 1.0);
  EXPECT_GT(mc.error, 0.0);
}
