#pragma once

// Executable forms of the lower-bound and monotonicity conjectures and of
// the known properties of D (triangle formula, cluster decomposition,
// boundary limit, ellipsoids).

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <optional>
#include <string_view>
#include <utility>
#include <vector>

#include "pointdet/configuration.hpp"
#include "pointdet/determinant.hpp"
#include "pointdet/errors.hpp"
#include "pointdet/spinor_geom.hpp"

namespace pointdet {

inline constexpr double kBoundTolerance = 1e-9;
inline constexpr double kMonotoneTolerance = 1e-9;

struct BoundReport {
  std::complex<double> D;
  double absD = 0.0;
  bool bound_satisfied = false;
  double tolerance = kBoundTolerance;
};

inline BoundReport check_bound(const Configuration& cfg, double tol = kBoundTolerance,
                               Precision precision = Precision::Double) {
  validate(cfg);
  BoundReport r;
  r.D = determinant_of(cfg, precision);
  r.absD = std::abs(r.D);
  r.tolerance = tol;
  r.bound_satisfied = r.absD >= 1.0 - tol;
  return r;
}

/// Outcome of a bound check once the extended-precision rung has been consulted.
enum class BoundVerdict {
  Satisfied,
  PipelineFailure,  ///< below the bound in double precision only
  EvidenceFailure,  ///< below the bound in extended precision too
};

inline std::string_view verdict_name(BoundVerdict v) {
  switch (v) {
    case BoundVerdict::Satisfied:
      return "satisfied";
    case BoundVerdict::PipelineFailure:
      return "pipeline-failure";
    case BoundVerdict::EvidenceFailure:
      return "evidence-failure";
  }
  return "unknown";
}

inline BoundVerdict classify_bound(const Configuration& cfg, double tol = kBoundTolerance) {
  if (check_bound(cfg, tol).bound_satisfied) return BoundVerdict::Satisfied;
  return check_bound(cfg, tol, Precision::Extended).bound_satisfied ? BoundVerdict::PipelineFailure
                                                                    : BoundVerdict::EvidenceFailure;
}

// ---- radius sweeps ----

struct SweepReport {
  std::vector<double> radii;
  std::vector<double> absD;
  bool monotone = true;
  double max_violation = 0.0;  ///< largest relative adjacent decrease
  double tolerance = kMonotoneTolerance;
  double absD_infinity = 0.0;  ///< Euclidean limit
  double limit_gap = 0.0;      ///< |absD.back() - absD_infinity|
  /// Recomputed in extended precision when the double sweep is not monotone.
  std::optional<double> extended_max_violation;
};

inline double max_point_norm(const std::vector<Point3>& points) {
  double r = 0.0;
  for (const auto& p : points) r = std::max(r, norm(p));
  return r;
}

/// count radii spaced geometrically from lo_factor to hi_factor times max |x_i|.
inline std::vector<double> default_radius_grid(const std::vector<Point3>& points, std::size_t count = 20,
                                               double lo_factor = 1.01, double hi_factor = 1e6) {
  double base = max_point_norm(points);
  if (base == 0.0) base = 1.0;
  std::vector<double> grid;
  if (count == 1) return {lo_factor * base};
  const double ratio = std::pow(hi_factor / lo_factor, 1.0 / static_cast<double>(count - 1));
  for (std::size_t k = 0; k < count; ++k) grid.push_back(lo_factor * base * std::pow(ratio, static_cast<double>(k)));
  return grid;
}

namespace detail {

inline double max_relative_decrease(const std::vector<double>& v) {
  double worst = 0.0;
  for (std::size_t k = 0; k + 1 < v.size(); ++k)
    worst = std::max(worst, (v[k] - v[k + 1]) / std::max(v[k], 1e-300));
  return worst;
}

}  // namespace detail

inline SweepReport sweep_radius(const std::vector<Point3>& points, std::vector<double> radii,
                                double tol = kMonotoneTolerance) {
  if (radii.empty()) throw Error("radius grid is empty");
  for (std::size_t k = 0; k + 1 < radii.size(); ++k)
    if (!(radii[k] < radii[k + 1])) throw Error("radius grid must be strictly increasing");
  SweepReport r;
  r.tolerance = tol;
  for (double R : radii) {
    const HyperbolicConfig cfg{points, R};
    validate(cfg);
    r.absD.push_back(abs_determinant(cfg));
  }
  r.radii = std::move(radii);
  r.max_violation = detail::max_relative_decrease(r.absD);
  r.monotone = r.max_violation <= tol;
  if (!r.monotone) {
    std::vector<double> ext;
    for (double R : r.radii) ext.push_back(abs_determinant(HyperbolicConfig{points, R}, Precision::Extended));
    r.extended_max_violation = detail::max_relative_decrease(ext);
  }
  r.absD_infinity = abs_determinant(EuclideanConfig{points});
  r.limit_gap = std::abs(r.absD.back() - r.absD_infinity);
  return r;
}

// ---- triangles ----

/// Interior angles at the three vertices.
inline std::array<double, 3> triangle_angles(const std::array<Point3, 3>& p) {
  std::array<double, 3> a{};
  for (std::size_t i = 0; i < 3; ++i) {
    const Point3 u = p[(i + 1) % 3] - p[i], v = p[(i + 2) % 3] - p[i];
    if (norm(u) == 0.0 || norm(v) == 0.0) throw DegenerateConfiguration("triangle has coincident vertices");
    a[i] = std::atan2(norm(cross(u, v)), dot(u, v));
  }
  return a;
}

/// (1/2) sum cos^2(A_i / 2). Collinear triples have angles (0, 0, pi) and give 1.
inline double triangle_closed_form(const std::array<Point3, 3>& p) {
  double s = 0.0;
  for (double A : triangle_angles(p)) {
    const double c = std::cos(A / 2.0);
    s += c * c;
  }
  return s / 2.0;
}

// ---- cluster decomposition ----

struct ClusterReport {
  std::vector<double> separations;
  std::vector<double> deviations;  ///< |D(A u B) - D(A) D(B)|
  bool strictly_decreasing = true;
};

inline double diameter(const std::vector<Point3>& pts) {
  double d = 0.0;
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = i + 1; j < pts.size(); ++j) d = std::max(d, norm(pts[i] - pts[j]));
  return d;
}

inline Point3 centroid(const std::vector<Point3>& pts) {
  Point3 c{};
  for (const auto& p : pts) c = c + p;
  return c / static_cast<double>(pts.size());
}

/// Separations {10, 100, 1000} times the larger cluster diameter (1 if both are singletons).
inline std::vector<double> cluster_ladder(const std::vector<Point3>& A, const std::vector<Point3>& B) {
  double d = std::max(diameter(A), diameter(B));
  if (d == 0.0) d = 1.0;
  return {10.0 * d, 100.0 * d, 1000.0 * d};
}

/// Places B's centroid at distance s from A's centroid along direction for each s.
inline ClusterReport cluster_check(const std::vector<Point3>& A, const std::vector<Point3>& B,
                                   const std::vector<double>& separations, Point3 direction = {1.0, 0.0, 0.0}) {
  validate(EuclideanConfig{A});
  validate(EuclideanConfig{B});
  direction = direction / norm(direction);
  const std::complex<double> dA = determinant_of(EuclideanConfig{A});
  const std::complex<double> dB = determinant_of(EuclideanConfig{B});
  const Point3 cA = centroid(A), cB = centroid(B);
  ClusterReport r;
  r.separations = separations;
  for (double s : separations) {
    EuclideanConfig all{A};
    for (const auto& p : B) all.points.push_back(p - cB + cA + s * direction);
    r.deviations.push_back(std::abs(determinant_of(all) - dA * dB));
  }
  for (std::size_t k = 0; k + 1 < r.deviations.size(); ++k)
    r.strictly_decreasing = r.strictly_decreasing && r.deviations[k + 1] < r.deviations[k];
  return r;
}

struct BoundaryLimitReport {
  std::vector<double> gaps;        ///< R - |x_n|
  std::vector<double> deviations;  ///< |D_R(x_1..x_n) - D_R(x_1..x_{n-1})|
  bool decreasing = true;
};

/// Pushes an extra point toward the sphere of radius R along direction, at the given gaps R - |x_n|.
inline BoundaryLimitReport boundary_limit_check(const HyperbolicConfig& base, Point3 direction,
                                                const std::vector<double>& gaps) {
  validate(base);
  direction = direction / norm(direction);
  const std::complex<double> d0 = determinant_of(base);
  BoundaryLimitReport r;
  r.gaps = gaps;
  for (double g : gaps) {
    HyperbolicConfig cfg = base;
    cfg.points.push_back((base.R - g) * direction);
    validate(cfg);
    r.deviations.push_back(std::abs(determinant_of(cfg) - d0));
  }
  for (std::size_t k = 0; k + 1 < r.deviations.size(); ++k)
    r.decreasing = r.decreasing && r.deviations[k + 1] <= r.deviations[k];
  return r;
}

// ---- ellipsoids ----

struct Ellipsoid {
  std::array<double, 3> axes{1.0, 1.0, 1.0};
  Rotation frame;  ///< principal axes are frame(e_1), frame(e_2), frame(e_3)
};

/// Images of the points under the affine map sending the ellipsoid to the unit ball.
inline std::vector<Point3> to_unit_ball(const std::vector<Point3>& points, const Ellipsoid& e) {
  if (!(e.axes[0] > 0.0 && e.axes[1] > 0.0 && e.axes[2] > 0.0)) throw Error("ellipsoid semi-axes must be positive");
  const Rotation back = e.frame.inverse();
  std::vector<Point3> out;
  for (const auto& p : points) {
    const Point3 q = back(p);
    out.push_back({q.x / e.axes[0], q.y / e.axes[1], q.z / e.axes[2]});
  }
  return out;
}

inline DetResult ellipsoid_determinant(const std::vector<Point3>& points, const Ellipsoid& e,
                                       Precision precision = Precision::Double) {
  const HyperbolicConfig cfg{to_unit_ball(points, e), 1.0};
  validate(cfg);
  return evaluate(cfg, precision);
}

struct EllipsoidComparison {
  double abs_outer = 0.0;
  double abs_inner = 0.0;
  bool inequality_holds = false;  ///< abs_outer >= abs_inner up to tolerance
};

/// Requires a shared frame with inner axes no larger than outer axes, so inner lies inside outer.
inline EllipsoidComparison ellipsoid_compare(const std::vector<Point3>& points, const Ellipsoid& inner,
                                             const Ellipsoid& outer, double tol = kMonotoneTolerance) {
  const Rotation &a = inner.frame, &b = outer.frame;
  if (a.w != b.w || a.x != b.x || a.y != b.y || a.z != b.z)
    throw Error("nested ellipsoids must share their principal frame");
  for (std::size_t k = 0; k < 3; ++k)
    if (inner.axes[k] > outer.axes[k]) throw Error("inner ellipsoid is not contained in the outer one");
  EllipsoidComparison c;
  c.abs_inner = ellipsoid_determinant(points, inner).absD;
  c.abs_outer = ellipsoid_determinant(points, outer).absD;
  c.inequality_holds = c.abs_outer >= c.abs_inner * (1.0 - tol);
  return c;
}

}  // namespace pointdet
