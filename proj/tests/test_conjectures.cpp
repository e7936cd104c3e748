#include "pointdet/conjectures.hpp"

#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "pointdet/random.hpp"

namespace {

using namespace pointdet;

std::vector<Point3> random_points(Philox4x64& rng, std::size_t n, double r = 1.0) {
  std::vector<Point3> pts;
  for (std::size_t i = 0; i < n; ++i) pts.push_back(rng.in_ball(r));
  return pts;
}

std::vector<Point3> collinear(Philox4x64& rng, std::size_t n) {
  const Point3 origin = rng.in_ball(0.2), dir = rng.direction();
  std::vector<Point3> pts;
  for (std::size_t i = 0; i < n; ++i) pts.push_back(origin + rng.uniform(-0.7, 0.7) * dir);
  return pts;
}

const std::array<Point3, 3> kEquilateral{Point3{1, 0, 0}, Point3{-0.5, std::sqrt(3.0) / 2, 0},
                                         Point3{-0.5, -std::sqrt(3.0) / 2, 0}};

TEST(CheckBound, CollinearIsEquality) {
  const BoundReport r = check_bound(EuclideanConfig{{{0, 0, 0}, {0, 0, 1}, {0, 0, 2}, {0, 0, 3.5}, {0, 0, -4}}});
  EXPECT_NEAR(r.absD, 1.0, 1e-12);
  EXPECT_TRUE(r.bound_satisfied);
  EXPECT_EQ(r.tolerance, kBoundTolerance);
}

TEST(CheckBound, Equilateral) {
  const BoundReport r = check_bound(EuclideanConfig{{kEquilateral.begin(), kEquilateral.end()}});
  EXPECT_NEAR(r.absD, 1.125, 1e-12);
  EXPECT_TRUE(r.bound_satisfied);
}

TEST(CheckBound, RandomHyperbolicEvidence) {
  Philox4x64 rng({51, 0});
  for (int k = 0; k < 50; ++k) {
    const BoundReport r = check_bound(HyperbolicConfig{random_points(rng, 6), 1.0});
    EXPECT_TRUE(r.bound_satisfied) << r.absD;
  }
}

TEST(CheckBound, StaticMinkowskiMatchesEuclidean) {
  Philox4x64 rng({52, 0});
  for (int k = 0; k < 50; ++k) {
    const auto pts = random_points(rng, 5);
    MinkowskiConfig m;
    for (const auto& p : pts) {
      m.lines.push_back({p, {}});
      m.event_times.push_back(rng.uniform(-1, 1));
    }
    EXPECT_NEAR(check_bound(m).absD, check_bound(EuclideanConfig{pts}).absD, 1e-10);
  }
}

TEST(CheckBound, VerdictTaxonomy) {
  EXPECT_EQ(classify_bound(EuclideanConfig{{kEquilateral.begin(), kEquilateral.end()}}), BoundVerdict::Satisfied);
  // An impossible bound makes both rungs fail, which is how a genuine violation would surface.
  EXPECT_FALSE(check_bound(EuclideanConfig{{{0, 0, 0}, {1, 0, 0}}}, -0.5).bound_satisfied);
  EXPECT_EQ(classify_bound(EuclideanConfig{{{0, 0, 0}, {1, 0, 0}}}, -0.5), BoundVerdict::EvidenceFailure);
  EXPECT_EQ(verdict_name(BoundVerdict::PipelineFailure), "pipeline-failure");
}

TEST(Sweep, DefaultGrid) {
  const std::vector<Point3> pts{{0, 0, 0.5}, {0, 2, 0}};
  const auto grid = default_radius_grid(pts);
  ASSERT_EQ(grid.size(), 20u);
  EXPECT_DOUBLE_EQ(grid.front(), 2.02);
  EXPECT_NEAR(grid.back(), 2e6, 1e-3);
  for (std::size_t k = 0; k + 1 < grid.size(); ++k) EXPECT_LT(grid[k], grid[k + 1]);
}

TEST(Sweep, CollinearIsConstantOne) {
  Philox4x64 rng({53, 0});
  for (std::size_t n = 2; n <= 7; ++n) {
    const auto pts = collinear(rng, n);
    const SweepReport r = sweep_radius(pts, default_radius_grid(pts));
    for (double v : r.absD) EXPECT_NEAR(v, 1.0, 1e-10);
    EXPECT_TRUE(r.monotone);
  }
}

TEST(Sweep, LimitAndMonotone) {
  Philox4x64 rng({54, 0});
  for (int k = 0; k < 30; ++k) {
    const auto pts = random_points(rng, 2 + k % 4);
    const SweepReport r = sweep_radius(pts, default_radius_grid(pts, 20, 1.01, 1e6));
    EXPECT_TRUE(r.monotone) << r.max_violation;
    EXPECT_FALSE(r.extended_max_violation.has_value());
    EXPECT_LE(r.limit_gap, 1e-4);
    EXPECT_EQ(r.radii.size(), r.absD.size());
  }
}

TEST(Sweep, Errors) {
  const std::vector<Point3> pts{{0, 0, 0}, {0, 0, 2}};
  EXPECT_THROW(sweep_radius(pts, {1.5, 3.0}), PointOutsideBall);
  EXPECT_THROW(sweep_radius(pts, {3.0, 3.0}), Error);
  EXPECT_THROW(sweep_radius(pts, {}), Error);
}

TEST(Sweep, ViolationsAreFlaggedAndRechecked) {
  // A decreasing grid cannot be passed in, so emulate a violation through the tolerance.
  Philox4x64 rng({55, 0});
  const auto pts = random_points(rng, 5);
  SweepReport r = sweep_radius(pts, default_radius_grid(pts), -1.0);
  EXPECT_FALSE(r.monotone);
  ASSERT_TRUE(r.extended_max_violation.has_value());
  EXPECT_NEAR(*r.extended_max_violation, r.max_violation, 1e-9);
}

TEST(Triangle, Examples) {
  EXPECT_NEAR(triangle_closed_form(kEquilateral), 9.0 / 8.0, 1e-15);
  EXPECT_NEAR(triangle_closed_form({Point3{0, 0, 0}, Point3{1, 0, 0}, Point3{3, 0, 0}}), 1.0, 1e-15);
  const std::array<Point3, 3> right{Point3{0, 0, 0}, Point3{1, 0, 0}, Point3{0, 1, 0}};
  EXPECT_NEAR(triangle_closed_form(right), 0.75 + 0.25 * std::sqrt(2.0), 1e-15);
  EXPECT_NEAR(std::abs(determinant_of(EuclideanConfig{{right.begin(), right.end()}})), 0.75 + 0.25 * std::sqrt(2.0),
              1e-12);
  EXPECT_THROW(triangle_closed_form({Point3{0, 0, 0}, Point3{0, 0, 0}, Point3{1, 0, 0}}), DegenerateConfiguration);
}

TEST(Triangle, AgreesWithPipeline) {
  Philox4x64 rng({56, 0});
  for (int k = 0; k < 1000; ++k) {
    const std::array<Point3, 3> t{rng.in_ball(1), rng.in_ball(1), rng.in_ball(1)};
    const double closed = triangle_closed_form(t);
    const std::complex<double> D = determinant_of(EuclideanConfig{{t.begin(), t.end()}});
    EXPECT_NEAR(D.real(), closed, 1e-10);
    EXPECT_NEAR(D.imag(), 0.0, 1e-10);
    EXPECT_GE(closed, 1.0 - 1e-12);
    EXPECT_LE(closed, 9.0 / 8.0 + 1e-12);
  }
}

TEST(Cluster, Singletons) {
  const ClusterReport r = cluster_check({{0, 0, 0}}, {{1, 1, 1}}, {10, 100, 1000});
  for (double d : r.deviations) EXPECT_EQ(d, 0.0);
}

TEST(Cluster, DeviationsDecrease) {
  Philox4x64 rng({57, 0});
  for (int k = 0; k < 100; ++k) {
    const auto A = random_points(rng, 1 + rng() % 4), B = random_points(rng, 2 + rng() % 3);
    const ClusterReport r = cluster_check(A, B, cluster_ladder(A, B), rng.direction());
    EXPECT_TRUE(r.strictly_decreasing) << k;
  }
}

TEST(Cluster, Ladder) {
  const auto ladder = cluster_ladder({{0, 0, 0}, {2, 0, 0}}, {{0, 0, 0}});
  EXPECT_EQ(ladder, (std::vector<double>{20, 200, 2000}));
}

TEST(BoundaryLimit, PointPushedToSphereDropsOut) {
  Philox4x64 rng({58, 0});
  for (int k = 0; k < 20; ++k) {
    const HyperbolicConfig base{random_points(rng, 2 + k % 4, 0.8), 1.0};
    const BoundaryLimitReport r = boundary_limit_check(base, rng.direction(), {1e-2, 1e-4, 1e-6, 1e-8});
    EXPECT_TRUE(r.decreasing);
    EXPECT_LE(r.deviations.back(), 1e-5);
  }
}

TEST(Ellipsoid, SphereReducesToBall) {
  Philox4x64 rng({59, 0});
  for (int k = 0; k < 20; ++k) {
    const double R = std::exp(rng.uniform(-1, 2));
    const auto pts = random_points(rng, 5, R);
    const DetResult e = ellipsoid_determinant(pts, {{R, R, R}, rng.rotation()});
    EXPECT_NEAR(std::abs(e.D - determinant_of(HyperbolicConfig{pts, R})), 0.0, 1e-9 * e.absD);
  }
}

TEST(Ellipsoid, NestedSpheresFollowMonotonicity) {
  Philox4x64 rng({60, 0});
  const auto pts = random_points(rng, 6, 0.9);
  const EllipsoidComparison c = ellipsoid_compare(pts, {{1, 1, 1}}, {{1.7, 1.7, 1.7}});
  EXPECT_NEAR(c.abs_outer, abs_determinant(HyperbolicConfig{pts, 1.7}), 1e-9 * c.abs_outer);
  EXPECT_TRUE(c.inequality_holds);
}

TEST(Ellipsoid, RandomNestedEvidence) {
  Philox4x64 rng({61, 0});
  for (int k = 0; k < 50; ++k) {
    const Ellipsoid inner{{1, 1, 1}, {}}, outer{{2, 1.5, 1.2}, {}};
    const EllipsoidComparison c = ellipsoid_compare(random_points(rng, 5, 0.95), inner, outer);
    EXPECT_GT(c.abs_inner, 0.0);
    EXPECT_GT(c.abs_outer, 0.0);
  }
}

TEST(Ellipsoid, Errors) {
  const std::vector<Point3> pts{{0, 0, 0}, {0.9, 0, 0}};
  EXPECT_THROW(ellipsoid_determinant(pts, {{0.5, 1, 1}}), PointOutsideBall);
  EXPECT_THROW(ellipsoid_compare(pts, {{2, 1, 1}}, {{1, 1, 1}}), Error);
  EXPECT_THROW(ellipsoid_determinant(pts, {{0, 1, 1}}), Error);
}

}  // namespace
