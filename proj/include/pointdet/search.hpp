#pragma once

// Random-restart Nelder-Mead search for configurations with small |D|.

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "pointdet/configuration.hpp"
#include "pointdet/determinant.hpp"
#include "pointdet/errors.hpp"
#include "pointdet/parallel.hpp"
#include "pointdet/random.hpp"

namespace pointdet {

struct SearchSpace {
  Geometry geometry = Geometry::Euclidean;
  std::size_t n = 3;
  double half_width = 1.0;  ///< coordinate box [-h, h]^3 (Euclidean points, Minkowski positions)
  double R = 1.0;           ///< ball radius for hyperbolic spaces
  double velocity_cap = 0.9;
  double time_lo = -1.0, time_hi = 1.0;  ///< event times (Minkowski)
  bool allow_superluminal = false;
  double distinctness_floor = 1e-6;
};

inline void validate(const SearchSpace& s) {
  if (s.n < 1) throw Error("search space needs n >= 1");
  if (!(s.half_width > 0.0) || !(s.R > 0.0) || !(s.velocity_cap > 0.0))
    throw Error("search space bounds must be positive");
  if (!s.allow_superluminal && !(s.velocity_cap < 1.0))
    throw SuperluminalWorldLine("velocity cap >= 1 requires allow_superluminal");
  if (!(s.time_lo <= s.time_hi)) throw Error("event time range is empty");
  if (!(s.distinctness_floor >= 0.0)) throw Error("distinctness floor must be non-negative");
}

namespace detail {

inline double line_gap(const WorldLine& p, const WorldLine& q) {
  const Point3 da = p.a - q.a, db = p.b - q.b;
  const double db2 = dot(db, db);
  const double s = db2 > 0.0 ? -dot(da, db) / db2 : 0.0;
  return norm(da + s * db);
}

inline double min_separation(const std::vector<Point3>& pts) {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = i + 1; j < pts.size(); ++j) best = std::min(best, norm(pts[i] - pts[j]));
  return best;
}

/// Event positions in space-time, as 4-vectors flattened to a distance check.
inline bool events_separated(const MinkowskiConfig& c, std::size_t upto, double floor) {
  const Point3 xi = c.lines[upto].at(c.event_times[upto]);
  for (std::size_t j = 0; j < upto; ++j) {
    const Point3 xj = c.lines[j].at(c.event_times[j]);
    const double dt = c.event_times[upto] - c.event_times[j];
    if (std::sqrt(dot(xi - xj, xi - xj) + dt * dt) <= floor) return false;
    if (line_gap(c.lines[upto], c.lines[j]) <= floor) return false;
  }
  return true;
}

}  // namespace detail

inline constexpr int kMaxResampleAttempts = 100;

/// Uniform sample from the space; each point is redrawn until it clears the distinctness floor.
inline Configuration random_configuration(const SearchSpace& space, Philox4x64& rng) {
  validate(space);
  const double h = space.half_width;
  auto exhausted = [](std::size_t i) {
    return SamplingExhausted("point " + std::to_string(i) + " could not be placed after " +
                             std::to_string(kMaxResampleAttempts) + " attempts");
  };
  auto place_points = [&](auto draw) {
    std::vector<Point3> pts;
    for (std::size_t i = 0; i < space.n; ++i) {
      int attempt = 0;
      for (;; ++attempt) {
        if (attempt == kMaxResampleAttempts) throw exhausted(i);
        const Point3 p = draw();
        bool ok = true;
        for (const auto& q : pts) ok = ok && norm(p - q) > space.distinctness_floor;
        if (ok) {
          pts.push_back(p);
          break;
        }
      }
    }
    return pts;
  };
  switch (space.geometry) {
    case Geometry::Euclidean:
      return EuclideanConfig{place_points([&] {
        return Point3{rng.uniform(-h, h), rng.uniform(-h, h), rng.uniform(-h, h)};
      })};
    case Geometry::Hyperbolic:
      return HyperbolicConfig{place_points([&] { return rng.in_ball(space.R); }), space.R};
    case Geometry::Minkowski: {
      MinkowskiConfig c;
      c.allow_superluminal = space.allow_superluminal;
      for (std::size_t i = 0; i < space.n; ++i) {
        c.lines.emplace_back();
        c.event_times.push_back(0.0);
        for (int attempt = 0;; ++attempt) {
          if (attempt == kMaxResampleAttempts) throw exhausted(i);
          c.lines[i].a = {rng.uniform(-h, h), rng.uniform(-h, h), rng.uniform(-h, h)};
          c.lines[i].b = rng.in_ball(space.velocity_cap);
          c.event_times[i] = rng.uniform(space.time_lo, space.time_hi);
          if (detail::events_separated(c, i, space.distinctness_floor)) break;
        }
      }
      return c;
    }
  }
  throw Error("unknown geometry");
}

inline Configuration random_configuration(const SearchSpace& space, std::uint64_t seed) {
  Philox4x64 rng = stream_for(seed, 0);
  return random_configuration(space, rng);
}

/// Coordinates of a configuration as a flat vector (Minkowski: a, b, t per line).
inline std::vector<double> flatten(const Configuration& cfg) {
  std::vector<double> x;
  auto push = [&](const Point3& p) { x.insert(x.end(), {p.x, p.y, p.z}); };
  if (const auto* m = std::get_if<MinkowskiConfig>(&cfg)) {
    for (std::size_t i = 0; i < m->lines.size(); ++i) {
      push(m->lines[i].a);
      push(m->lines[i].b);
      x.push_back(m->event_times[i]);
    }
  } else {
    const auto& pts = std::holds_alternative<EuclideanConfig>(cfg) ? std::get<EuclideanConfig>(cfg).points
                                                                   : std::get<HyperbolicConfig>(cfg).points;
    for (const auto& p : pts) push(p);
  }
  return x;
}

/// Projects a coordinate vector into the space's bounds and rebuilds the configuration.
inline Configuration unflatten(const SearchSpace& space, std::vector<double> x) {
  const double h = space.half_width;
  auto point_at = [&](std::size_t k) { return Point3{x[k], x[k + 1], x[k + 2]}; };
  auto box = [&](Point3 p) {
    return Point3{std::clamp(p.x, -h, h), std::clamp(p.y, -h, h), std::clamp(p.z, -h, h)};
  };
  auto into_ball = [](Point3 p, double radius) {
    const double r = norm(p);
    const double limit = radius * (1.0 - 1e-9);
    return r < limit ? p : (limit / r) * p;
  };
  switch (space.geometry) {
    case Geometry::Euclidean: {
      EuclideanConfig c;
      for (std::size_t i = 0; i < space.n; ++i) c.points.push_back(box(point_at(3 * i)));
      return c;
    }
    case Geometry::Hyperbolic: {
      HyperbolicConfig c{{}, space.R};
      for (std::size_t i = 0; i < space.n; ++i) c.points.push_back(into_ball(point_at(3 * i), space.R));
      return c;
    }
    case Geometry::Minkowski: {
      MinkowskiConfig c;
      c.allow_superluminal = space.allow_superluminal;
      for (std::size_t i = 0; i < space.n; ++i) {
        const std::size_t k = 7 * i;
        c.lines.push_back({box(point_at(k)), into_ball(point_at(k + 3), space.velocity_cap)});
        c.event_times.push_back(std::clamp(x[k + 6], space.time_lo, space.time_hi));
      }
      return c;
    }
  }
  throw Error("unknown geometry");
}

namespace detail {

inline bool clears_floor(const Configuration& cfg, double floor) {
  if (const auto* e = std::get_if<EuclideanConfig>(&cfg)) return min_separation(e->points) > floor;
  if (const auto* h = std::get_if<HyperbolicConfig>(&cfg)) return min_separation(h->points) > floor;
  const auto& m = std::get<MinkowskiConfig>(cfg);
  for (std::size_t i = 1; i < m.lines.size(); ++i)
    if (!events_separated(m, i, floor)) return false;
  return true;
}

}  // namespace detail

/// |D| of the projected configuration, or +inf if it is invalid or degenerate.
inline double penalized_abs_d(const SearchSpace& space, const std::vector<double>& x,
                              Precision precision = Precision::Double) {
  try {
    const Configuration cfg = unflatten(space, x);
    if (!detail::clears_floor(cfg, space.distinctness_floor)) return std::numeric_limits<double>::infinity();
    validate(cfg);
    const double v = abs_determinant(cfg, precision);
    return std::isfinite(v) ? v : std::numeric_limits<double>::infinity();
  } catch (const Error&) {
    return std::numeric_limits<double>::infinity();
  }
}

/// A random configuration whose |D| is defined (superluminal spaces can produce
/// events with no past intersection); redraws up to kMaxResampleAttempts times.
inline Configuration random_start(const SearchSpace& space, Philox4x64& rng) {
  for (int attempt = 0; attempt < kMaxResampleAttempts; ++attempt) {
    Configuration cfg = random_configuration(space, rng);
    if (std::isfinite(penalized_abs_d(space, flatten(cfg)))) return cfg;
  }
  throw SamplingExhausted("no evaluable start configuration after " + std::to_string(kMaxResampleAttempts) +
                          " attempts");
}

struct NelderMeadOptions {
  std::size_t max_iterations = 4000;
  std::size_t restarts = 2;  ///< fresh simplices around the incumbent after convergence
  double rel_tol = 1e-12;
  double initial_step = 0.1;  ///< relative to the space's length scale
};

struct NelderMeadResult {
  std::vector<double> x;
  double f = std::numeric_limits<double>::infinity();
  std::size_t iterations = 0;
  std::size_t evaluations = 0;
};

/// Nelder-Mead with standard coefficients (1, 2, 1/2, 1/2). Returns the best point ever evaluated.
template <class F>
NelderMeadResult nelder_mead(F&& f, std::vector<double> x0, const std::vector<double>& steps,
                             const NelderMeadOptions& opt) {
  const std::size_t dim = x0.size();
  NelderMeadResult best{x0, f(x0), 0, 1};
  if (dim == 0) return best;
  auto eval = [&](const std::vector<double>& x) {
    const double v = f(x);
    ++best.evaluations;
    if (v < best.f) {
      best.f = v;
      best.x = x;
    }
    return v;
  };
  for (std::size_t round = 0; round <= opt.restarts && best.iterations < opt.max_iterations; ++round) {
    std::vector<std::vector<double>> simplex(dim + 1, best.x);
    std::vector<double> fs(dim + 1, best.f);
    for (std::size_t i = 0; i < dim; ++i) {
      simplex[i + 1][i] += steps[i];
      fs[i + 1] = eval(simplex[i + 1]);
    }
    std::vector<std::size_t> order(dim + 1);
    std::vector<double> centroid(dim), trial(dim);
    auto along = [&](const std::vector<double>& from, double t) {
      for (std::size_t k = 0; k < dim; ++k) trial[k] = centroid[k] + t * (from[k] - centroid[k]);
      return trial;
    };
    for (; best.iterations < opt.max_iterations; ++best.iterations) {
      std::iota(order.begin(), order.end(), std::size_t{0});
      std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return fs[a] < fs[b]; });
      const std::size_t lo = order.front(), hi = order.back(), second = order[dim - 1];
      if (std::isfinite(fs[hi]) && fs[hi] - fs[lo] <= opt.rel_tol * std::abs(fs[lo])) break;
      std::fill(centroid.begin(), centroid.end(), 0.0);
      for (std::size_t i = 0; i <= dim; ++i)
        if (i != hi)
          for (std::size_t k = 0; k < dim; ++k) centroid[k] += simplex[i][k] / static_cast<double>(dim);
      const std::vector<double> xr = along(simplex[hi], -1.0);
      const double fr = eval(xr);
      if (fr < fs[lo]) {
        const std::vector<double> xe = along(simplex[hi], -2.0);
        const double fe = eval(xe);
        if (fe < fr) {
          simplex[hi] = xe;
          fs[hi] = fe;
        } else {
          simplex[hi] = xr;
          fs[hi] = fr;
        }
        continue;
      }
      if (fr < fs[second]) {
        simplex[hi] = xr;
        fs[hi] = fr;
        continue;
      }
      const bool outside = fr < fs[hi];
      const std::vector<double> xc = outside ? along(simplex[hi], -0.5) : along(simplex[hi], 0.5);
      const double fc = eval(xc);
      if (fc < (outside ? fr : fs[hi])) {
        simplex[hi] = xc;
        fs[hi] = fc;
        continue;
      }
      for (std::size_t i = 0; i <= dim; ++i) {
        if (i == lo) continue;
        for (std::size_t k = 0; k < dim; ++k) simplex[i][k] = simplex[lo][k] + 0.5 * (simplex[i][k] - simplex[lo][k]);
        fs[i] = eval(simplex[i]);
      }
    }
  }
  return best;
}

struct SearchRecord {
  std::size_t trial = 0;
  std::uint64_t seed = 0;
  Configuration start;
  Configuration best;
  double start_absD = 0.0;
  double best_absD = 0.0;
  double margin = 0.0;
  std::size_t iterations = 0;
  std::size_t evaluations = 0;
  double wall_seconds = 0.0;
  bool candidate = false;            ///< best_absD below the scan threshold in double precision
  std::optional<double> extended_absD;  ///< set for candidates
  bool confirmed = false;            ///< still below threshold in extended precision
  bool superluminal = false;         ///< some world line moves at speed >= 1
};

inline double length_scale(const SearchSpace& s) {
  return s.geometry == Geometry::Hyperbolic ? s.R : s.half_width;
}

/// Local descent of |D| from start. Never returns a configuration worse than start.
inline SearchRecord minimize_abs_d(const SearchSpace& space, const Configuration& start,
                                   const NelderMeadOptions& opt = {}) {
  validate(space);
  validate(start);
  const auto clock_start = std::chrono::steady_clock::now();
  SearchRecord rec;
  rec.start = start;
  const std::vector<double> x0 = flatten(start);
  std::vector<double> steps(x0.size(), opt.initial_step * length_scale(space));
  if (space.geometry == Geometry::Minkowski)
    for (std::size_t k = 0; k < x0.size(); k += 7) {
      for (std::size_t c = 3; c < 6; ++c) steps[k + c] = opt.initial_step * space.velocity_cap;
      steps[k + 6] = opt.initial_step * std::max(space.time_hi - space.time_lo, 1e-3);
    }
  rec.start_absD = abs_determinant(start);
  auto objective = [&](const std::vector<double>& x) { return penalized_abs_d(space, x); };
  const NelderMeadResult nm = nelder_mead(objective, x0, steps, opt);
  if (nm.f < rec.start_absD) {
    rec.best = unflatten(space, nm.x);
    rec.best_absD = nm.f;
  } else {
    rec.best = start;
    rec.best_absD = rec.start_absD;
  }
  rec.iterations = nm.iterations;
  rec.evaluations = nm.evaluations;
  rec.margin = evaluate(rec.best).independence_margin;
  if (const auto* m = std::get_if<MinkowskiConfig>(&rec.best))
    for (const auto& l : m->lines) rec.superluminal = rec.superluminal || !(norm(l.b) < 1.0);
  rec.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - clock_start).count();
  return rec;
}

struct HistogramBin {
  double lower;
  std::size_t count = 0;
};

struct ScanSummary {
  std::size_t trials = 0;
  double min_absD = std::numeric_limits<double>::infinity();
  std::size_t argmin_trial = 0;
  std::uint64_t seed = 0;
  double threshold = 0.0;
  std::size_t candidates = 0;
  std::size_t confirmed = 0;
  std::size_t superluminal_candidates = 0;
  std::vector<HistogramBin> histogram;
};

struct ScanResult {
  ScanSummary summary;
  std::vector<SearchRecord> records;  ///< ordered by trial index
};

inline constexpr double kDefaultThreshold = 1.0 - 1e-6;

inline std::vector<HistogramBin> histogram_bins() {
  return {{0.0}, {1.0 - 1e-6}, {1.0 - 1e-9}, {1.0 + 1e-9}, {1.0 + 1e-6}, {1.0 + 1e-3},
          {1.01}, {1.1}, {1.25}, {1.5}, {2.0}};
}

/// Random restarts of minimize_abs_d; trial i draws from stream_for(seed, i).
inline ScanResult counterexample_scan(const SearchSpace& space, std::size_t trials, std::uint64_t seed,
                                      double threshold = kDefaultThreshold, const NelderMeadOptions& opt = {},
                                      unsigned workers = 0) {
  if (trials < 1) throw Error("a scan needs at least one trial");
  validate(space);
  ScanResult out;
  out.records = parallel_map(
      trials,
      [&](std::size_t i) {
        Philox4x64 rng = stream_for(seed, i);
        SearchRecord rec = minimize_abs_d(space, random_start(space, rng), opt);
        rec.trial = i;
        rec.seed = seed;
        if (rec.best_absD < threshold) {
          rec.candidate = true;
          rec.extended_absD = abs_determinant(rec.best, Precision::Extended);
          rec.confirmed = *rec.extended_absD < threshold;
        }
        return rec;
      },
      workers);
  ScanSummary& s = out.summary;
  s.trials = trials;
  s.seed = seed;
  s.threshold = threshold;
  s.histogram = histogram_bins();
  for (const SearchRecord& r : out.records) {
    if (r.best_absD < s.min_absD) {
      s.min_absD = r.best_absD;
      s.argmin_trial = r.trial;
    }
    s.candidates += r.candidate;
    s.confirmed += r.confirmed;
    s.superluminal_candidates += r.candidate && r.superluminal;
    for (std::size_t b = s.histogram.size(); b-- > 0;)
      if (r.best_absD >= s.histogram[b].lower || b == 0) {
        ++s.histogram[b].count;
        break;
      }
  }
  return out;
}

}  // namespace pointdet
