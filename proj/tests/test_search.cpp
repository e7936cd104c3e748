#include "pointdet/search.hpp"

#include <cmath>

#include <gtest/gtest.h>

namespace {

using namespace pointdet;

bool same(const Configuration& a, const Configuration& b) { return flatten(a) == flatten(b) && a.index() == b.index(); }

TEST(RandomConfiguration, DeterministicAndDistinct) {
  SearchSpace s;
  s.n = 2;
  const Configuration a = random_configuration(s, std::uint64_t{42});
  const Configuration b = random_configuration(s, std::uint64_t{42});
  EXPECT_TRUE(same(a, b));
  const auto& pts = std::get<EuclideanConfig>(a).points;
  EXPECT_GT(norm(pts[0] - pts[1]), s.distinctness_floor);
  for (const auto& p : pts) EXPECT_LE(max_norm_distance(p, Point3{}), 1.0);
  EXPECT_FALSE(same(a, random_configuration(s, std::uint64_t{43})));
}

TEST(RandomConfiguration, HyperbolicInsideBall) {
  SearchSpace s{Geometry::Hyperbolic, 10};
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const Configuration cfg = random_configuration(s, seed);
    for (const auto& p : std::get<HyperbolicConfig>(cfg).points) EXPECT_LT(norm(p), 1.0);
  }
}

TEST(RandomConfiguration, MinkowskiVelocityCap) {
  SearchSpace s{Geometry::Minkowski, 6};
  s.velocity_cap = 0.99;
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const auto cfg = random_configuration(s, seed);
    EXPECT_NO_THROW(validate(cfg));
    for (const auto& l : std::get<MinkowskiConfig>(cfg).lines) EXPECT_LT(norm(l.b), 0.99);
  }
}

TEST(RandomConfiguration, Exhausted) {
  SearchSpace s;
  s.n = 3;
  s.half_width = 1e-9;
  s.distinctness_floor = 1.0;
  EXPECT_THROW(random_configuration(s, std::uint64_t{1}), SamplingExhausted);
  s.half_width = 1.0;
  s.velocity_cap = 1.5;
  s.geometry = Geometry::Minkowski;
  EXPECT_THROW(random_configuration(s, std::uint64_t{1}), SuperluminalWorldLine);
}

TEST(Flatten, RoundTrip) {
  for (Geometry g : {Geometry::Euclidean, Geometry::Hyperbolic, Geometry::Minkowski}) {
    SearchSpace s{g, 4};
    const Configuration c = random_configuration(s, std::uint64_t{3});
    EXPECT_TRUE(same(unflatten(s, flatten(c)), c)) << geometry_name(g);
  }
}

TEST(Flatten, ProjectionRestoresBounds) {
  SearchSpace s{Geometry::Hyperbolic, 2};
  const auto h = std::get<HyperbolicConfig>(unflatten(s, {0, 0, 5, 0.1, 0, 0}));
  EXPECT_LT(norm(h.points[0]), 1.0);
  s.geometry = Geometry::Minkowski;
  s.velocity_cap = 0.5;
  std::vector<double> x(14, 0.0);
  x[3] = 3.0;
  x[7] = 1.0;
  x[6] = 9.0;
  const auto m = std::get<MinkowskiConfig>(unflatten(s, x));
  EXPECT_LT(norm(m.lines[0].b), 0.5);
  EXPECT_EQ(m.event_times[0], 1.0);
}

TEST(Penalty, InvalidTrialsAreInfinite) {
  SearchSpace s;
  s.n = 2;
  EXPECT_TRUE(std::isinf(penalized_abs_d(s, {0, 0, 0, 0, 0, 0})));
  EXPECT_NEAR(penalized_abs_d(s, {0, 0, 0, 0, 0, 1}), 1.0, 1e-15);
}

TEST(NelderMead, Quadratic) {
  auto f = [](const std::vector<double>& x) { return (x[0] - 1) * (x[0] - 1) + 10 * (x[1] + 2) * (x[1] + 2) + 3; };
  const NelderMeadResult r = nelder_mead(f, {0.0, 0.0}, {0.5, 0.5}, {});
  EXPECT_NEAR(r.x[0], 1.0, 1e-5);
  EXPECT_NEAR(r.x[1], -2.0, 1e-5);
  EXPECT_NEAR(r.f, 3.0, 1e-10);
}

TEST(NelderMead, Rosenbrock) {
  auto f = [](const std::vector<double>& x) {
    return 100 * std::pow(x[1] - x[0] * x[0], 2) + std::pow(1 - x[0], 2);
  };
  NelderMeadOptions opt;
  opt.max_iterations = 20000;
  const NelderMeadResult r = nelder_mead(f, {-1.2, 1.0}, {0.1, 0.1}, opt);
  EXPECT_NEAR(r.x[0], 1.0, 1e-4);
  EXPECT_LT(r.f, 1e-8);
}

TEST(Minimize, EquilateralDescendsToCollinear) {
  SearchSpace s;
  s.half_width = 2.0;
  const EuclideanConfig eq{{{1, 0, 0}, {-0.5, std::sqrt(3.0) / 2, 0}, {-0.5, -std::sqrt(3.0) / 2, 0}}};
  const SearchRecord r = minimize_abs_d(s, eq);
  EXPECT_NEAR(r.start_absD, 1.125, 1e-12);
  EXPECT_LE(r.best_absD, 1.0 + 1e-6);
  EXPECT_GE(r.best_absD, 1.0 - 1e-9);
  EXPECT_NO_THROW(validate(r.best));
}

TEST(Minimize, CollinearStaysPut) {
  SearchSpace s{Geometry::Euclidean, 4};
  const EuclideanConfig c{{{0, 0, -0.5}, {0, 0, 0}, {0, 0, 0.2}, {0, 0, 0.9}}};
  const SearchRecord r = minimize_abs_d(s, c);
  EXPECT_NEAR(r.best_absD, 1.0, 1e-12);
  EXPECT_LE(r.best_absD, r.start_absD);
}

TEST(Minimize, NeverWorseThanStart) {
  for (Geometry g : {Geometry::Euclidean, Geometry::Hyperbolic, Geometry::Minkowski}) {
    SearchSpace s{g, 4};
    NelderMeadOptions opt;
    opt.max_iterations = 300;
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      const SearchRecord r = minimize_abs_d(s, random_configuration(s, seed), opt);
      EXPECT_LE(r.best_absD, r.start_absD);
      EXPECT_NO_THROW(validate(r.best));
      EXPECT_NEAR(abs_determinant(r.best), r.best_absD, 1e-12 * r.best_absD);
    }
  }
}

TEST(Minimize, SuperluminalRecordsAreFlagged) {
  SearchSpace s{Geometry::Minkowski, 3};
  s.allow_superluminal = true;
  s.velocity_cap = 1.2;
  NelderMeadOptions opt;
  opt.max_iterations = 500;
  bool any = false;
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    Philox4x64 rng = stream_for(seed, 0);
    const SearchRecord r = minimize_abs_d(s, random_start(s, rng), opt);
    any = any || r.superluminal;
  }
  EXPECT_TRUE(any);
}

TEST(Scan, TwoPointsGiveOne) {
  for (Geometry g : {Geometry::Euclidean, Geometry::Hyperbolic, Geometry::Minkowski}) {
    const ScanResult r = counterexample_scan({g, 2}, 5, 9);
    EXPECT_NEAR(r.summary.min_absD, 1.0, 1e-12);
    EXPECT_EQ(r.summary.candidates, 0u);
  }
}

TEST(Scan, ThresholdTwoMakesEverythingACandidate) {
  NelderMeadOptions opt;
  opt.max_iterations = 200;
  const ScanResult r = counterexample_scan({Geometry::Euclidean, 4}, 6, 11, 2.0, opt);
  EXPECT_EQ(r.summary.candidates, 6u);
  for (const auto& rec : r.records) {
    ASSERT_TRUE(rec.extended_absD.has_value());
    EXPECT_NEAR(*rec.extended_absD, rec.best_absD, 1e-12);
    EXPECT_TRUE(rec.confirmed);
  }
}

TEST(Scan, WorkerCountDoesNotMatter) {
  NelderMeadOptions opt;
  opt.max_iterations = 300;
  const SearchSpace s{Geometry::Hyperbolic, 5};
  const ScanResult serial = counterexample_scan(s, 12, 5, kDefaultThreshold, opt, 1);
  const ScanResult threaded = counterexample_scan(s, 12, 5, kDefaultThreshold, opt, 4);
  ASSERT_EQ(serial.records.size(), threaded.records.size());
  for (std::size_t i = 0; i < serial.records.size(); ++i) {
    EXPECT_EQ(serial.records[i].trial, i);
    EXPECT_EQ(serial.records[i].best_absD, threaded.records[i].best_absD);
    EXPECT_TRUE(same(serial.records[i].best, threaded.records[i].best));
  }
  EXPECT_EQ(serial.summary.min_absD, threaded.summary.min_absD);
  std::size_t total = 0;
  for (const auto& b : serial.summary.histogram) total += b.count;
  EXPECT_EQ(total, 12u);
}

TEST(Scan, EuclideanEvidence) {
  NelderMeadOptions opt;
  opt.max_iterations = 500;
  const ScanResult r = counterexample_scan({Geometry::Euclidean, 4}, 100, 2024, kDefaultThreshold, opt);
  EXPECT_GE(r.summary.min_absD, 1.0 - 1e-9);
  EXPECT_EQ(r.records.size(), 100u);
}

}  // namespace
