#pragma once

// Point configurations in the three geometries and the table of directions
// u_ij they induce on CP^1.

#include <cmath>
#include <cstddef>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "pointdet/errors.hpp"
#include "pointdet/spinor_geom.hpp"

namespace pointdet {

/// Two points or events closer than this in the max norm are treated as coincident.
inline constexpr double kCoincidenceTolerance = 1e-12;

enum class Geometry { Euclidean, Hyperbolic, Minkowski };

inline std::string_view geometry_name(Geometry g) {
  switch (g) {
    case Geometry::Euclidean:
      return "euclidean";
    case Geometry::Hyperbolic:
      return "hyperbolic";
    case Geometry::Minkowski:
      return "minkowski";
  }
  return "unknown";
}

struct EuclideanConfig {
  std::vector<Point3> points;
};

/// Points inside the open ball of radius R (curvature -1/R^2).
struct HyperbolicConfig {
  std::vector<Point3> points;
  double R = 1.0;
};

/// The uniform motion t -> a + t b, in units where c = 1.
struct WorldLine {
  Point3 a;
  Point3 b;

  Point3 at(double t) const { return a + t * b; }
};

struct MinkowskiConfig {
  std::vector<WorldLine> lines;
  std::vector<double> event_times;
  bool allow_superluminal = false;
};

using Configuration = std::variant<EuclideanConfig, HyperbolicConfig, MinkowskiConfig>;

inline Geometry geometry_of(const Configuration& cfg) {
  return static_cast<Geometry>(cfg.index());
}

inline std::size_t size_of(const Configuration& cfg) {
  return std::visit(
      [](const auto& c) -> std::size_t {
        if constexpr (std::is_same_v<std::decay_t<decltype(c)>, MinkowskiConfig>)
          return c.lines.size();
        else
          return c.points.size();
      },
      cfg);
}

/// The n x n table of projective points u_ij and their unit lifts v_ij.
/// Diagonal entries are unused.
template <class Real = double>
class DirectionTable {
 public:
  DirectionTable() = default;
  explicit DirectionTable(std::size_t n) : n_(n), u_(n * n), v_(n * n) {}

  std::size_t size() const { return n_; }

  const ProjectivePoint<Real>& u(std::size_t i, std::size_t j) const { return u_[i * n_ + j]; }
  const Spinor<Real>& v(std::size_t i, std::size_t j) const { return v_[i * n_ + j]; }
  Spinor<Real>& v(std::size_t i, std::size_t j) { return v_[i * n_ + j]; }

  /// Stores u_ij and its canonical unit lift.
  void set(std::size_t i, std::size_t j, const ProjectivePoint<Real>& q) {
    u_[i * n_ + j] = q;
    v_[i * n_ + j] = lift(q);
  }

 private:
  std::size_t n_ = 0;
  std::vector<ProjectivePoint<Real>> u_;
  std::vector<Spinor<Real>> v_;
};

namespace detail {

inline void require_distinct(const std::vector<Point3>& pts, const char* field) {
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = i + 1; j < pts.size(); ++j)
      if (max_norm_distance(pts[i], pts[j]) < kCoincidenceTolerance)
        throw DegenerateConfiguration(std::string(field) + " " + std::to_string(i) + " and " +
                                      std::to_string(j) + " coincide");
}

inline void require_finite(const Point3& p, const char* what, std::size_t i) {
  if (!std::isfinite(p.x) || !std::isfinite(p.y) || !std::isfinite(p.z))
    throw DegenerateConfiguration(std::string(what) + " " + std::to_string(i) + " is not finite");
}

template <class Real>
Vec3<Real> lift_point(const Point3& p) {
  return p.template cast<Real>();
}

}  // namespace detail

inline void validate(const EuclideanConfig& cfg) {
  if (cfg.points.empty()) throw DegenerateConfiguration("configuration has no points");
  for (std::size_t i = 0; i < cfg.points.size(); ++i) detail::require_finite(cfg.points[i], "point", i);
  detail::require_distinct(cfg.points, "points");
}

inline void validate(const HyperbolicConfig& cfg) {
  if (!(cfg.R > 0.0) || !std::isfinite(cfg.R)) throw PointOutsideBall("ball radius must be positive and finite");
  if (cfg.points.empty()) throw DegenerateConfiguration("configuration has no points");
  for (std::size_t i = 0; i < cfg.points.size(); ++i) {
    detail::require_finite(cfg.points[i], "point", i);
    if (!(norm(cfg.points[i]) < cfg.R))
      throw PointOutsideBall("point " + std::to_string(i) + " lies outside the ball of radius " +
                             std::to_string(cfg.R));
  }
  detail::require_distinct(cfg.points, "points");
}

inline void validate(const MinkowskiConfig& cfg) {
  const std::size_t n = cfg.lines.size();
  if (n == 0) throw DegenerateConfiguration("configuration has no world lines");
  if (cfg.event_times.size() != n)
    throw DegenerateConfiguration("event_times has " + std::to_string(cfg.event_times.size()) +
                                  " entries for " + std::to_string(n) + " world lines");
  for (std::size_t i = 0; i < n; ++i) {
    detail::require_finite(cfg.lines[i].a, "line position", i);
    detail::require_finite(cfg.lines[i].b, "line velocity", i);
    if (!std::isfinite(cfg.event_times[i]))
      throw DegenerateConfiguration("event time " + std::to_string(i) + " is not finite");
    if (!cfg.allow_superluminal && !(norm(cfg.lines[i].b) < 1.0))
      throw SuperluminalWorldLine("world line " + std::to_string(i) + " has speed " +
                                  std::to_string(norm(cfg.lines[i].b)) + " >= 1");
  }
  for (std::size_t i = 0; i < n; ++i) {
    const Point3 xi = cfg.lines[i].at(cfg.event_times[i]);
    for (std::size_t j = i + 1; j < n; ++j) {
      const Point3 xj = cfg.lines[j].at(cfg.event_times[j]);
      const double dt = std::abs(cfg.event_times[i] - cfg.event_times[j]);
      if (dt < kCoincidenceTolerance && max_norm_distance(xi, xj) < kCoincidenceTolerance)
        throw CoincidentEvents("events " + std::to_string(i) + " and " + std::to_string(j) + " coincide");
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      // a_i + s b_i = a_j + s b_j for some s?
      const Point3 da = cfg.lines[i].a - cfg.lines[j].a;
      const Point3 db = cfg.lines[i].b - cfg.lines[j].b;
      const double db2 = dot(db, db);
      const double s = db2 > 0.0 ? -dot(da, db) / db2 : 0.0;
      const Point3 gap = da + s * db;
      if (max_norm_distance(gap, Point3{}) < kCoincidenceTolerance)
        throw IntersectingWorldLines("world lines " + std::to_string(i) + " and " + std::to_string(j) +
                                     " meet at t = " + std::to_string(s));
    }
  }
}

inline void validate(const Configuration& cfg) {
  std::visit([](const auto& c) { validate(c); }, cfg);
}

/// u_ij = stereographic image of the unit vector from x_i to x_j.
template <class Real = double>
DirectionTable<Real> euclidean_directions(const EuclideanConfig& cfg) {
  validate(cfg);
  const std::size_t n = cfg.points.size();
  DirectionTable<Real> table(n);
  for (std::size_t i = 0; i < n; ++i) {
    const Vec3<Real> xi = detail::lift_point<Real>(cfg.points[i]);
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      const Vec3<Real> d = detail::lift_point<Real>(cfg.points[j]) - xi;
      table.set(i, j, stereographic_to_cp1(SpherePoint<Real>::from_direction(d)));
    }
  }
  return table;
}

/// Forward endpoint on the sphere of radius R of the straight chord from x through y.
///
/// Solves |x + t (y - x)| = R for the root t > 1 and returns the endpoint
/// rescaled to the unit sphere.
template <class Real>
SpherePoint<Real> chord_endpoint(const Vec3<Real>& x, const Vec3<Real>& y, const Real& R) {
  using std::sqrt;
  const Vec3<Real> d = y - x;
  const Real a = dot(d, d);
  const Real b = dot(x, d);
  const Real rx = norm(x);
  const Real c = (R - rx) * (R + rx);  // R^2 - |x|^2 > 0
  const Real s = sqrt(b * b + a * c);
  const Real t = b > Real(0) ? c / (s + b) : (s - b) / a;
  return SpherePoint<Real>::from_direction(x + t * d);
}

/// Klein-model directions: u_ij is where the chord from x_i through x_j leaves the ball.
template <class Real = double>
DirectionTable<Real> hyperbolic_directions(const HyperbolicConfig& cfg) {
  validate(cfg);
  const std::size_t n = cfg.points.size();
  const Real R(cfg.R);
  DirectionTable<Real> table(n);
  for (std::size_t i = 0; i < n; ++i) {
    const Vec3<Real> xi = detail::lift_point<Real>(cfg.points[i]);
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      const Vec3<Real> xj = detail::lift_point<Real>(cfg.points[j]);
      table.set(i, j, stereographic_to_cp1(chord_endpoint(xi, xj, R)));
    }
  }
  return table;
}

/// Look-back time tau = t_i - s >= 0 at which the past light cone of the
/// observer meets the world line of a source.
///
/// `w` is the source position at the observer's time minus the observer
/// position; `b` is the source velocity. Solves |w - tau b| = tau and picks
/// the smallest nonnegative root. Throws NoPastIntersection when there is none.
template <class Real>
Real past_cone_lookback(const Vec3<Real>& w, const Vec3<Real>& b) {
  using std::sqrt;
  const Real ww = dot(w, w);
  const Real wb = dot(w, b);
  const Real A = Real(1) - dot(b, b);
  if (A > Real(0)) {
    const Real s = sqrt(wb * wb + A * ww);
    return wb >= Real(0) ? ww / (wb + s) : (s - wb) / A;
  }
  // Superluminal or luminal source: A tau^2 + 2 wb tau - ww = 0 with A <= 0.
  if (A == Real(0)) {
    if (wb > Real(0)) return ww / (Real(2) * wb);
    throw NoPastIntersection("light-speed source never enters the past cone");
  }
  const Real disc = wb * wb + A * ww;
  if (disc < Real(0) || wb <= Real(0)) throw NoPastIntersection("superluminal source outside the past cone");
  // Both roots are positive; the smaller is the most recent emission.
  return ww / (wb + sqrt(disc));
}

/// The same configuration seen from a frame moving with velocity beta * direction (|beta| < 1).
inline MinkowskiConfig lorentz_boost(const MinkowskiConfig& cfg, Point3 direction, double beta) {
  if (!(std::abs(beta) < 1.0)) throw SuperluminalWorldLine("boost speed must be below 1");
  direction = direction / norm(direction);
  const double gamma = 1.0 / std::sqrt(1.0 - beta * beta);
  auto event = [&](double t, const Point3& x) {
    const double along = dot(x, direction);
    return std::pair{gamma * (t - beta * along), x + (gamma * (along - beta * t) - along) * direction};
  };
  MinkowskiConfig out;
  out.allow_superluminal = cfg.allow_superluminal;
  for (std::size_t i = 0; i < cfg.lines.size(); ++i) {
    const WorldLine& l = cfg.lines[i];
    const auto [t0, x0] = event(0.0, l.a);
    const auto [t1, x1] = event(1.0, l.a + l.b);
    const Point3 b = (1.0 / (t1 - t0)) * (x1 - x0);
    out.lines.push_back({x0 - t0 * b, b});
    out.event_times.push_back(event(cfg.event_times[i], l.at(cfg.event_times[i])).first);
  }
  return out;
}

/// u_ij is the apparent direction of star j on the celestial sphere of event x_i.
template <class Real = double>
DirectionTable<Real> minkowski_directions(const MinkowskiConfig& cfg) {
  validate(cfg);
  const std::size_t n = cfg.lines.size();
  DirectionTable<Real> table(n);
  for (std::size_t i = 0; i < n; ++i) {
    const Real ti(cfg.event_times[i]);
    const Vec3<Real> Xi =
        detail::lift_point<Real>(cfg.lines[i].a) + ti * detail::lift_point<Real>(cfg.lines[i].b);
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      const Vec3<Real> aj = detail::lift_point<Real>(cfg.lines[j].a);
      const Vec3<Real> bj = detail::lift_point<Real>(cfg.lines[j].b);
      const Vec3<Real> w = aj - Xi + ti * bj;
      const Real tau = past_cone_lookback(w, bj);
      const Vec3<Real> seen = w - tau * bj;
      if (norm(seen) == Real(0))
        throw IntersectingWorldLines("event " + std::to_string(i) + " lies on world line " + std::to_string(j));
      table.set(i, j, stereographic_to_cp1(SpherePoint<Real>::from_direction(seen)));
    }
  }
  return table;
}

template <class Real = double>
DirectionTable<Real> directions(const Configuration& cfg) {
  return std::visit(
      [](const auto& c) -> DirectionTable<Real> {
        using T = std::decay_t<decltype(c)>;
        if constexpr (std::is_same_v<T, EuclideanConfig>)
          return euclidean_directions<Real>(c);
        else if constexpr (std::is_same_v<T, HyperbolicConfig>)
          return hyperbolic_directions<Real>(c);
        else
          return minkowski_directions<Real>(c);
      },
      cfg);
}

}  // namespace pointdet
