#include "pointdet/determinant.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>

#include <gtest/gtest.h>

#include "pointdet/random.hpp"

namespace {

using namespace pointdet;
using cd = std::complex<double>;
using Sp = Spinor<double>;

double rel(cd a, cd b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

std::vector<Point3> random_points(Philox4x64& rng, std::size_t n) {
  std::vector<Point3> pts;
  for (std::size_t i = 0; i < n; ++i) pts.push_back({rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1)});
  return pts;
}

/// Random rotation from a uniformly distributed unit quaternion.
struct Rotation {
  double w, x, y, z;
  static Rotation random(Philox4x64& rng) {
    double q[4] = {rng.normal(), rng.normal(), rng.normal(), rng.normal()};
    const double r = std::sqrt(q[0] * q[0] + q[1] * q[1] + q[2] * q[2] + q[3] * q[3]);
    return {q[0] / r, q[1] / r, q[2] / r, q[3] / r};
  }
  Point3 operator()(const Point3& p) const {
    const Point3 u{x, y, z};
    return 2.0 * dot(u, p) * u + (w * w - dot(u, u)) * p + 2.0 * w * cross(u, p);
  }
};

cd euclidean_D(const std::vector<Point3>& pts) { return determinant_of(EuclideanConfig{pts}); }

TEST(PolynomialFromLifts, Examples) {
  const std::vector<Sp> root_zero{{cd(0), cd(1)}};
  EXPECT_EQ(polynomial_from_lifts<double>(root_zero), (std::vector<cd>{1, 0}));
  const std::vector<Sp> roots_pm1{{cd(1), cd(1)}, {cd(-1), cd(1)}};
  EXPECT_EQ(polynomial_from_lifts<double>(roots_pm1), (std::vector<cd>{1, 0, -1}));
  const std::vector<Sp> root_inf{{cd(1), cd(0)}};
  EXPECT_EQ(polynomial_from_lifts<double>(root_inf), (std::vector<cd>{0, -1}));
}

TEST(PolynomialFromLifts, EvaluatesToProductOfLinearForms) {
  Philox4x64 rng({31, 0});
  std::vector<Sp> lifts;
  for (int k = 0; k < 7; ++k) lifts.push_back({cd(rng.normal(), rng.normal()), cd(rng.normal(), rng.normal())});
  const auto c = polynomial_from_lifts<double>(lifts);
  const cd u(0.3, -0.8);
  cd direct = 1;
  for (const Sp& s : lifts) direct *= s.c1 - s.c0 * u;  // V Z0 - U Z1 at (1, u)
  // sum_k c_k Z0^{d-k} Z1^k at (Z0, Z1) = (1, u)
  cd value = 0;
  for (std::size_t k = 0; k < c.size(); ++k) value += c[k] * std::pow(u, static_cast<double>(k));
  EXPECT_LE(std::abs(value - direct), 1e-12 * std::abs(direct));
}

TEST(CoefficientMatrix, TwoPointHandExpansion) {
  const auto P = coefficient_matrix(euclidean_directions(EuclideanConfig{{{0, 0, 0}, {0, 0, 1}}}));
  // u_12 = infinity -> -Z1, u_21 = 0 -> Z0
  EXPECT_LE(std::abs(P(0, 0)), 1e-15);
  EXPECT_LE(std::abs(P(0, 1) - cd(-1)), 1e-15);
  EXPECT_LE(std::abs(P(1, 0) - cd(1)), 1e-15);
  EXPECT_LE(std::abs(P(1, 1)), 1e-15);
}

TEST(CoefficientMatrix, CollinearThreeHandExpansion) {
  const auto P = coefficient_matrix(euclidean_directions(EuclideanConfig{{{0, 0, 0}, {0, 0, 1}, {0, 0, 3}}}));
  const cd expected[3][3] = {{0, 0, 1}, {0, -1, 0}, {1, 0, 0}};
  for (int i = 0; i < 3; ++i)
    for (int k = 0; k < 3; ++k) EXPECT_LE(std::abs(P(i, k) - expected[i][k]), 1e-15) << i << "," << k;
  EXPECT_NEAR(independence_margin(P), 1.0, 1e-14);
}

TEST(CoefficientMatrix, Deterministic) {
  Philox4x64 rng({32, 0});
  const auto pts = random_points(rng, 6);
  const auto a = coefficient_matrix(euclidean_directions(EuclideanConfig{pts}));
  const auto b = coefficient_matrix(euclidean_directions(EuclideanConfig{pts}));
  EXPECT_EQ(a.entries, b.entries);
}

TEST(IndependenceMargin, RepeatedRowIsZero) {
  CoefficientMatrix<double> P{3, {1, 2, 3, cd(0, 1), 5, 6, 1, 2, 3}};
  EXPECT_LE(independence_margin(P), 1e-14);
}

TEST(IndependenceMargin, RandomConfigurationPositive) {
  Philox4x64 rng({33, 0});
  for (int k = 0; k < 50; ++k) {
    const DetResult r = normalized_determinant(euclidean_directions(EuclideanConfig{random_points(rng, 5)}));
    EXPECT_GT(r.independence_margin, 0.0);
    EXPECT_EQ(r.absD, std::abs(r.D));
  }
}

TEST(NormalizedDeterminant, TwoPointsGiveOne) {
  Philox4x64 rng({34, 0});
  for (int k = 0; k < 100; ++k) EXPECT_LE(std::abs(euclidean_D(random_points(rng, 2)) - 1.0), 1e-13);
}

TEST(NormalizedDeterminant, EquilateralTriangle) {
  const double h = std::sqrt(3.0) / 2.0;
  EXPECT_LE(std::abs(euclidean_D({{1, 0, 0}, {-0.5, h, 0}, {-0.5, -h, 0}}) - 1.125), 1e-12);
}

// 25/16 from the exact sympy evaluation in tests/oracles/tetrahedron_oracle.py.
TEST(NormalizedDeterminant, RegularTetrahedron) {
  const cd D = euclidean_D({{1, 1, 1}, {1, -1, -1}, {-1, 1, -1}, {-1, -1, 1}});
  EXPECT_LE(std::abs(D - 25.0 / 16.0), 1e-12);
}

TEST(NormalizedDeterminant, SingletonIsOne) {
  EXPECT_EQ(euclidean_D({{0.3, 0.2, 0.1}}), cd(1));
}

TEST(NormalizedDeterminant, CoincidentDirectionsRejected) {
  auto table = euclidean_directions(EuclideanConfig{{{0, 0, 0}, {0, 0, 1}}});
  DirectionTable<double> bad(2);
  bad.set(0, 1, table.u(0, 1));
  bad.set(1, 0, table.u(0, 1));
  EXPECT_THROW(normalized_determinant(bad), DegenerateDirection);
}

TEST(NormalizedDeterminant, OrientationSelfCheck) { EXPECT_TRUE(orientation_self_check(6)); }

TEST(NormalizedDeterminant, ExtendedPrecisionAgrees) {
  Philox4x64 rng({36, 0});
  for (int k = 0; k < 10; ++k) {
    const Configuration cfg = EuclideanConfig{random_points(rng, 8)};
    const DetResult d = evaluate(cfg, Precision::Double);
    const DetResult q = evaluate(cfg, Precision::Extended);
    EXPECT_EQ(q.precision, Precision::Extended);
    EXPECT_LE(rel(d.D, q.D), 1e-11);
  }
}

// ---- invariances ----

TEST(Invariance, LiftRescaling) {
  Philox4x64 rng({41, 0});
  for (int k = 0; k < 100; ++k) {
    const std::size_t n = 3 + rng() % 6;
    auto table = euclidean_directions(EuclideanConfig{random_points(rng, n)});
    const cd before = normalized_determinant_value(table);
    const std::size_t i = rng() % n, j = (i + 1 + rng() % (n - 1)) % n;
    const cd lambda = std::polar(std::exp(rng.uniform(-3, 3)), rng.uniform(0, 6.28));
    table.v(i, j) = lambda * table.v(i, j);
    EXPECT_LE(rel(normalized_determinant_value(table), before), 1e-10);
  }
}

TEST(Invariance, GlobalMobiusOnLifts) {
  Philox4x64 rng({42, 0});
  for (int k = 0; k < 100; ++k) {
    const std::size_t n = 3 + rng() % 6;
    auto table = euclidean_directions(EuclideanConfig{random_points(rng, n)});
    const cd before = normalized_determinant_value(table);
    const MobiusMap<double> m(cd(rng.normal(), rng.normal()), cd(rng.normal(), rng.normal()),
                              cd(rng.normal(), rng.normal()), cd(rng.normal(), rng.normal()));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (i != j) table.v(i, j) = m(table.v(i, j));
    EXPECT_LE(rel(normalized_determinant_value(table), before), 1e-9);
  }
}

TEST(Invariance, Permutation) {
  Philox4x64 rng({43, 0});
  for (int k = 0; k < 20; ++k) {
    auto pts = random_points(rng, 7);
    const cd before = euclidean_D(pts);
    for (int p = 0; p < 20; ++p) {
      for (std::size_t i = pts.size() - 1; i > 0; --i) std::swap(pts[i], pts[rng() % (i + 1)]);
      EXPECT_LE(rel(euclidean_D(pts), before), 1e-10);
    }
  }
}

TEST(Invariance, EuclideanMotionsAndScale) {
  Philox4x64 rng({44, 0});
  for (int k = 0; k < 100; ++k) {
    auto pts = random_points(rng, 3 + rng() % 6);
    const cd before = euclidean_D(pts);
    const Rotation rot = Rotation::random(rng);
    const Point3 shift = rng.in_ball(10.0);
    const double lambda = std::exp(rng.uniform(-4, 4));
    std::vector<Point3> moved;
    for (const auto& p : pts) moved.push_back(lambda * rot(p) + shift);
    EXPECT_LE(rel(euclidean_D(moved), before), 1e-9);
  }
}

TEST(Invariance, HyperbolicRescaling) {
  Philox4x64 rng({45, 0});
  for (int k = 0; k < 100; ++k) {
    HyperbolicConfig cfg{{}, 1.0};
    for (int i = 0; i < 6; ++i) cfg.points.push_back(rng.in_ball(1.0));
    const cd before = determinant_of(cfg);
    const double lambda = std::exp(rng.uniform(-3, 3));
    HyperbolicConfig scaled{{}, lambda};
    for (const auto& p : cfg.points) scaled.points.push_back(lambda * p);
    EXPECT_LE(rel(determinant_of(scaled), before), 1e-10);
  }
}

TEST(Invariance, ReflectionConjugatesAndCoplanarIsReal) {
  Philox4x64 rng({46, 0});
  for (int k = 0; k < 100; ++k) {
    auto pts = random_points(rng, 4 + rng() % 5);
    const cd before = euclidean_D(pts);
    std::vector<Point3> mirrored, flat;
    for (const auto& p : pts) {
      mirrored.push_back({p.x, p.y, -p.z});
      flat.push_back({p.x, p.y, 0.0});
    }
    EXPECT_LE(rel(euclidean_D(mirrored), std::conj(before)), 1e-10);
    EXPECT_LE(std::abs(euclidean_D(flat).imag()), 1e-10);
    HyperbolicConfig hyp{{}, 2.0}, hyp_mirror{{}, 2.0};
    for (std::size_t i = 0; i < pts.size(); ++i) {
      hyp.points.push_back(pts[i]);
      hyp_mirror.points.push_back(mirrored[i]);
    }
    EXPECT_LE(rel(determinant_of(hyp_mirror), std::conj(determinant_of(hyp))), 1e-10);
  }
}

TEST(Invariance, CollinearIsOne) {
  Philox4x64 rng({47, 0});
  for (std::size_t n = 2; n <= 10; ++n) {
    for (int k = 0; k < 20; ++k) {
      const Point3 origin = rng.in_ball(0.3);
      Point3 dir{rng.normal(), rng.normal(), rng.normal()};
      dir = dir / norm(dir);
      std::vector<double> ts;
      for (std::size_t i = 0; i < n; ++i) ts.push_back(rng.uniform(-0.6, 0.6));
      std::vector<Point3> pts;
      for (double t : ts) pts.push_back(origin + t * dir);
      EXPECT_LE(std::abs(euclidean_D(pts) - 1.0), 1e-10);
      EXPECT_LE(std::abs(determinant_of(HyperbolicConfig{pts, 1.0}) - 1.0), 1e-10);
    }
  }
}

}  // namespace
