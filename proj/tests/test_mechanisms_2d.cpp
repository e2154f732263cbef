#include <gtest/gtest.h>

#include <random>

#include "dpfl/mechanisms_2d.hpp"
#include "dpfl/oracle.hpp"
#include "support/reference.hpp"

using namespace dpfl;

namespace {

Instance plane(const std::vector<std::tuple<double, double, double>>& xyb, double B, Norm norm = Norm::L1) {
  std::vector<Agent> a;
  for (const auto& [x, y, b] : xyb) a.push_back({{x, y}, b, static_cast<int>(a.size())});
  return Instance(std::move(a), 2, norm, B);
}

// Three agents X, Y, Z laid out as in the usual split-line illustration.
Instance xyz() { return plane({{0, 0, 12}, {10, -2, 7}, {4, -20, 9}}, 12); }

double pointwise_median(const std::vector<Polyline>& chains, double t) {
  std::vector<double> v;
  for (const auto& c : chains) v.push_back(c(t));
  return median_value(v);
}

bool on_diamond(const Point& p, const Agent& a, double tol = 1e-9) {
  return std::abs(distance(p, a.location, Norm::L1) - a.b) <= tol;
}

struct Chains {
  std::vector<Polyline> v, h;
};

Chains chains_of(const Instance& inst) {
  const MedianKeys med = coordinate_median_keys(inst);
  const Box box = working_box(inst);
  Chains c;
  for (const auto& a : inst.agents()) {
    c.v.push_back(v_ehd(a, med.x, box.ymin, box.ymax));
    c.h.push_back(h_ehd(a, med.y, box.xmin, box.xmax));
  }
  return c;
}

}  // namespace

TEST(CoordMedian, Examples) {
  EXPECT_EQ(mech_coord_median(plane({{0, 0, 1}, {2, 4, 0}, {6, 2, 3}}, 4)), (Point{2, 2}));
  EXPECT_EQ(mech_coord_median(plane({{1, 1, 1}, {1, 1, 0}, {1, 1, 3}}, 4)), (Point{1, 1}));
  EXPECT_THROW(mech_coord_median(Instance::line({{0, 0}}, 1)), std::invalid_argument);
}

TEST(GeometricMedian, CoincidentAgents) {
  const Point p = mech_geometric_median(plane({{2, 3, 1}, {2, 3, 0}, {2, 3, 1}}, 1, Norm::L2), 1e-9);
  EXPECT_NEAR(p.x, 2, 1e-9);
  EXPECT_NEAR(p.y, 3, 1e-9);
}

TEST(GeometricMedian, EquilateralTriangle) {
  const double h = std::sqrt(3.0);
  const Instance inst = plane({{0, 0, 0}, {2, 0, 0}, {1, h, 0}}, 1, Norm::L2);
  const double tol = 1e-7;
  const Point p = mech_geometric_median(inst, tol);
  EXPECT_NEAR(p.x, 1.0, 10 * tol);
  EXPECT_NEAR(p.y, h / 3, 10 * tol);
  const ref::GridMin g = ref::dense_grid(inst, p.x - 1e-4, p.x + 1e-4, p.y - 1e-4, p.y + 1e-4, tol / 10 * 100);
  EXPECT_LE(social_cost(p, inst), g.value + 1e-9);
}

TEST(GeometricMedian, TwoAgentsAnywhereOnSegment) {
  const Point p = mech_geometric_median(plane({{0, 0, 0}, {4, 2, 0}}, 1, Norm::L2), 1e-9);
  EXPECT_NEAR(distance(p, {0, 0}, Norm::L2) + distance(p, {4, 2}, Norm::L2), std::hypot(4.0, 2.0), 1e-9);
}

TEST(GeometricMedian, OptimumAtAnAgent) {
  // Agent 0 carries three copies, so the minimiser is its location.
  const Point p =
      mech_geometric_median(plane({{0, 0, 0}, {0, 0, 0}, {0, 0, 0}, {5, 0, 0}, {0, 5, 0}}, 1, Norm::L2), 1e-9);
  EXPECT_NEAR(p.x, 0, 1e-7);
  EXPECT_NEAR(p.y, 0, 1e-7);
}

TEST(GeometricMedian, ObtuseVertexIsExact) {
  // The angle at (0, 0) exceeds 120 degrees, so the minimiser is that agent.
  const Point p = mech_geometric_median(plane({{0, 0, 0}, {10, 1, 0}, {-10, 1, 0}}, 1, Norm::L2), 1e-12);
  EXPECT_EQ(p, (Point{0, 0}));
}

TEST(GeometricMedian, NearlyCollinearConverges) {
  const Instance inst = plane({{-1138.4457688512698, 618.18686398423051, 0},
                               {-1361.4875894227957, -3445.7267800834775, 0},
                               {-820.52308111283673, 3531.6565861077479, 0},
                               {-961.09362309494918, 2812.2133849990614, 0}},
                              960, Norm::L2);
  const Point p = mech_geometric_median(inst, 1e-9);
  auto total = [&](Point q) {
    double s = 0;
    for (const auto& a : inst.agents()) s += std::hypot(q.x - a.location.x, q.y - a.location.y);
    return s;
  };
  for (double dx : {-1.0, 1.0})
    for (double dy : {-1.0, 1.0}) EXPECT_LE(total(p), total({p.x + 1e-3 * dx, p.y + 1e-3 * dy}) + 1e-9);
}

TEST(GeometricMedian, NonConvergenceCarriesBestIterate) {
  const Instance inst = plane({{0, 0, 0}, {9, 1, 0}, {3, 7, 0}, {-4, 5, 0}}, 1, Norm::L2);
  try {
    mech_geometric_median(inst, 1e-15, 2);
    FAIL();
  } catch (const GeometricMedianError& e) {
    const Point best = e.best_iterate();
    EXPECT_TRUE(std::isfinite(best.x) && std::isfinite(best.y));
  }
}

TEST(Ehd, VerticalRightHalf) {
  const Polyline v = v_ehd({{0, 0}, 1, 0}, Ranked{0, 0}, -5, 5);
  EXPECT_EQ(v.orientation(), Orientation::x_of_y);
  for (double y : {-5.0, -1.0, -0.5, 0.0, 0.25, 1.0, 3.0}) EXPECT_DOUBLE_EQ(v(y), std::max(0.0, 1 - std::abs(y)));
}

TEST(Ehd, VerticalLeftHalfWhenRightOfMedian) {
  const Polyline v = v_ehd({{3, 1}, 2, 4}, Ranked{0, 0}, -5, 5);
  for (double y : {-5.0, 0.0, 1.0, 2.5, 5.0}) EXPECT_DOUBLE_EQ(v(y), 3 - std::max(0.0, 2 - std::abs(y - 1)));
}

TEST(Ehd, ZeroDistanceIsStraight) {
  const Polyline v = v_ehd({{2, 0}, 0, 0}, Ranked{5, 0}, -5, 5);
  ASSERT_EQ(v.knots().size(), 2u);
  EXPECT_EQ(v(-5), 2.0);
  EXPECT_EQ(v(5), 2.0);
  const Polyline h = h_ehd({{0, -1}, 0, 0}, Ranked{5, 0}, -5, 5);
  EXPECT_EQ(h(3), -1.0);
}

TEST(Ehd, HorizontalHalves) {
  const Polyline up = h_ehd({{0, 0}, 1, 0}, Ranked{0, 0}, -5, 5);
  EXPECT_EQ(up.orientation(), Orientation::y_of_x);
  for (double x : {-2.0, -0.5, 0.0, 0.75}) EXPECT_DOUBLE_EQ(up(x), std::max(0.0, 1 - std::abs(x)));
  const Polyline down = h_ehd({{0, 3}, 1, 1}, Ranked{0, 0}, -5, 5);
  for (double x : {-2.0, -0.5, 0.0, 0.75}) EXPECT_DOUBLE_EQ(down(x), 3 - std::max(0.0, 1 - std::abs(x)));
}

TEST(Ehd, TieAtMedianCoordinateUsesIdOrder) {
  // Same y as the median agent: id 0 <= key (0, 1) faces up, id 2 faces down.
  EXPECT_GT(h_ehd({{0, 0}, 1, 0}, Ranked{0, 1}, -5, 5)(0), 0.0);
  EXPECT_LT(h_ehd({{0, 0}, 1, 2}, Ranked{0, 1}, -5, 5)(0), 0.0);
}

TEST(SplitLine, SingleChainIsItself) {
  const Polyline v = v_ehd({{1, 2}, 3, 0}, Ranked{1, 0}, -10, 10);
  const Polyline s = split_line({v});
  EXPECT_EQ(s.knots(), v.knots());
}

TEST(SplitLine, IdenticalChains) {
  const Polyline v = v_ehd({{1, 2}, 3, 0}, Ranked{1, 0}, -10, 10);
  EXPECT_EQ(split_line({v, v, v, v}).knots(), v.knots());
}

TEST(SplitLine, ThreeAgentLayoutMatchesPointwiseMedian) {
  const Instance inst = xyz();
  const Chains c = chains_of(inst);
  const Polyline V = split_line(c.v), H = split_line(c.h);
  const Box box = working_box(inst);
  for (int k = 0; k <= 1000; ++k) {
    const double y = box.ymin + (box.ymax - box.ymin) * k / 1000.0;
    const double x = box.xmin + (box.xmax - box.xmin) * k / 1000.0;
    ASSERT_NEAR(V(y), pointwise_median(c.v, y), 1e-9) << y;
    ASSERT_NEAR(H(x), pointwise_median(c.h, x), 1e-9) << x;
  }
  // Far from every diamond the chains sit at 0, 4 and 10, so the median is Z's x.
  const std::vector<Point> vert = V.vertices();
  EXPECT_EQ(vert.front(), (Point{4, box.ymin}));
  EXPECT_EQ(vert.back(), (Point{4, box.ymax}));
  EXPECT_GT(vert.size(), 4u);
}

TEST(SplitLine, RejectsMixedOrientation) {
  const Polyline v = v_ehd({{0, 0}, 1, 0}, Ranked{0, 0}, -5, 5);
  const Polyline h = h_ehd({{0, 0}, 1, 0}, Ranked{0, 0}, -5, 5);
  EXPECT_THROW(split_line({v, h}), std::invalid_argument);
  EXPECT_THROW(split_line({}), std::invalid_argument);
}

TEST(SplitLine, RandomInstancesMatchPointwiseMedian) {
  std::mt19937_64 rng(30);
  for (int t = 0; t < 200; ++t) {
    const Instance inst = ref::random_instance(rng, 1 + t % 9, 4, 2, Norm::L1, t % 2 == 0);
    const Chains c = chains_of(inst);
    const Polyline V = split_line(c.v);
    std::uniform_real_distribution<double> u(V.t_min(), V.t_max());
    for (int s = 0; s < 200; ++s) {
      const double y = u(rng);
      ASSERT_NEAR(V(y), pointwise_median(c.v, y), 1e-9);
    }
  }
}

TEST(SplitIntersection, SingleAgentIsDiagonalSegment) {
  const Instance inst = plane({{0, 0, 1}}, 1);
  const MedianPlus2d r = median_plus_2d_details(inst);
  ASSERT_EQ(r.meet.kind, SplitIntersection::Kind::segment);
  EXPECT_NEAR(r.meet.a.x, 0, 1e-12);
  EXPECT_NEAR(r.meet.a.y, 1, 1e-12);
  EXPECT_NEAR(r.meet.b.x, 1, 1e-12);
  EXPECT_NEAR(r.meet.b.y, 0, 1e-12);
  EXPECT_EQ(r.meet.slope, -1.0);
}

TEST(SplitIntersection, ZeroDistancesMeetAtCoordinateMedian) {
  const Instance inst = plane({{0, 0, 0}, {2, 4, 0}, {6, 2, 0}, {-3, 1, 0}, {5, -2, 0}}, 1);
  const MedianPlus2d r = median_plus_2d_details(inst);
  EXPECT_EQ(r.meet.kind, SplitIntersection::Kind::point);
  EXPECT_EQ(r.meet.a, mech_coord_median(inst));
}

TEST(SplitIntersection, ThreeAgentLayoutMeetsOnFirstDiamondEdge) {
  const Instance inst = xyz();
  const MedianPlus2d r = median_plus_2d_details(inst);
  ASSERT_EQ(r.meet.kind, SplitIntersection::Kind::segment);
  EXPECT_TRUE(on_diamond(r.meet.a, inst.agent(0)));
  EXPECT_TRUE(on_diamond(r.meet.b, inst.agent(0)));
  EXPECT_EQ(std::abs(r.meet.slope), 1.0);
}

TEST(SplitIntersection, NoMeetingIsReported) {
  // Parallel vertical/horizontal chains that never cross inside the domain.
  const Polyline V(Orientation::x_of_y, {{0, 100}, {10, 100}});
  const Polyline H(Orientation::y_of_x, {{-5, 50}, {5, 50}});
  try {
    split_intersection(V, H);
    FAIL();
  } catch (const std::runtime_error& e) {
    EXPECT_STREQ(e.what(), "split lines do not meet in working domain");
  }
}

TEST(MedianPlus2d, SingleAgentPicksMidpoint) {
  const Point p = mech_2d_median_plus(plane({{0, 0, 1}}, 1));
  EXPECT_NEAR(p.x, 0.5, 1e-12);
  EXPECT_NEAR(p.y, 0.5, 1e-12);
}

TEST(MedianPlus2d, ZeroDistancesGiveCoordinateMedian) {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> u(-10, 10);
  for (int t = 0; t < 100; ++t) {
    std::vector<std::tuple<double, double, double>> xyb;
    for (int i = 0; i < 1 + t % 8; ++i) xyb.push_back({u(rng), u(rng), 0.0});
    const Instance inst = plane(xyb, 1);
    ASSERT_EQ(mech_2d_median_plus(inst), mech_coord_median(inst));
  }
}

TEST(MedianPlus2d, RequiresL1) {
  EXPECT_THROW(mech_2d_median_plus(plane({{0, 0, 1}}, 1, Norm::L2)), std::invalid_argument);
}

TEST(MedianPlus2d, SixAgentsBeatCoordinateMedian) {
  std::mt19937_64 rng(32);
  const Instance inst = ref::random_instance(rng, 6, 4, 2, Norm::L1);
  const Point p = mech_2d_median_plus(inst);
  EXPECT_LE(social_cost(p, inst), social_cost(mech_coord_median(inst), inst) + 1e-9);
  EXPECT_TRUE(working_box(inst).contains(p));
}

TEST(MedianPlus2d, FuzzedGeometryInvariants) {
  std::mt19937_64 rng(33);
  int segments = 0;
  for (int t = 0; t < 1000; ++t) {
    const Instance inst = ref::random_instance(rng, 1 + t % 9, 4, 2, Norm::L1, t % 2 == 1);
    const MedianPlus2d r = median_plus_2d_details(inst);
    if (r.meet.kind == SplitIntersection::Kind::segment) {
      ++segments;
      ASSERT_EQ(std::abs(r.meet.slope), 1.0);
      ASSERT_NE(r.meet.a, r.meet.b);
      ASSERT_NEAR(std::abs(r.meet.b.y - r.meet.a.y), std::abs(r.meet.b.x - r.meet.a.x), 1e-9);
      bool shared = false;
      for (const auto& a : inst.agents()) shared = shared || (on_diamond(r.meet.a, a) && on_diamond(r.meet.b, a));
      ASSERT_TRUE(shared) << "trial " << t;
    }
    ASSERT_TRUE(r.box.contains(r.output));
    const double sc = social_cost(r.output, inst);
    ASSERT_LE(sc, social_cost(r.med.point(), inst) + 1e-9) << "trial " << t;

    const std::vector<Point> path = alternating_moves(r.V, r.H, r.med.point(), r.output);
    ASSERT_EQ(path.back(), r.output);
    for (std::size_t k = 1; k < path.size(); ++k)
      ASSERT_LE(social_cost(path[k], inst), social_cost(path[k - 1], inst) + 1e-9) << "trial " << t << " move " << k;
  }
  EXPECT_GT(segments, 0);
}

TEST(MedianPlus2d, UnconstrainedSnappingCanRaiseCost) {
  // Snapping x to V(y) from (6, -5) moves back toward the median and into
  // agent 5's diamond, which costs one unit more.
  const Instance inst = plane({{-6, -10, 1}, {-4, 6, 2}, {12, 15, 0}, {-6, -5, 0}, {9, -4, 3}, {8, -4, 4}, {16, -14, 2}}, 4);
  const MedianPlus2d r = median_plus_2d_details(inst);
  EXPECT_EQ(r.med.point(), (Point{8, -4}));
  const std::vector<Point> snap = snapping_moves(r.V, r.H, r.med.point(), 3);
  ASSERT_EQ(snap.size(), 4u);
  EXPECT_EQ(snap[2], (Point{6, -5}));
  EXPECT_EQ(snap[3], (Point{7, -5}));
  EXPECT_EQ(social_cost(snap[2], inst), 92.0);
  EXPECT_EQ(social_cost(snap[3], inst), 93.0);

  EXPECT_EQ(r.output, (Point{7, -5}));
  const std::vector<Point> walk = alternating_moves(r.V, r.H, r.med.point(), r.output);
  for (std::size_t k = 1; k < walk.size(); ++k) EXPECT_LE(social_cost(walk[k], inst), social_cost(walk[k - 1], inst));
}

TEST(MedianPlus2d, StrategyProofOnFuzzedInstances) {
  std::mt19937_64 rng(34);
  for (int t = 0; t < 1000; ++t) {
    const double B = 8;
    const Instance inst = ref::random_instance(rng, 1 + t % 7, B, 2, Norm::L1, t % 2 == 0);
    const Point out = mech_2d_median_plus(inst);
    for (const auto& a : inst.agents()) {
      const double honest = cost_2d(out, a, Norm::L1);
      for (int s = 0; s <= 8; ++s) {
        const Point dev = mech_2d_median_plus(inst.with_report(a.id, B * s / 8));
        ASSERT_GE(cost_2d(dev, a, Norm::L1) - honest, -1e-9) << "trial " << t << " agent " << a.id;
      }
    }
  }
}

TEST(AdditiveBound2d, CoordinateAndGeometricMedian) {
  std::mt19937_64 rng(35);
  for (int t = 0; t < 60; ++t) {
    const double B = 4;
    const int n = 1 + t % 9;
    const Instance l1 = ref::random_instance(rng, n, B, 2, Norm::L1);
    ASSERT_LE(social_cost(mech_coord_median(l1), l1), opt_2d_l1(l1).opt_value + 2 * n * B + 1e-6);
    const Instance l2 = ref::random_instance(rng, n, B, 2, Norm::L2);
    ASSERT_LE(social_cost(mech_geometric_median(l2, 1e-9), l2), opt_2d_l2(l2, 1e-4).opt_value + 2 * n * B + 1e-3);
  }
}
