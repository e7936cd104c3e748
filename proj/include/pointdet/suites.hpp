#pragma once

// Named property suites over random configurations. Trial i of a suite draws
// from stream_for(seed, i) so results do not depend on the worker count.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "pointdet/conjectures.hpp"
#include "pointdet/determinant.hpp"
#include "pointdet/parallel.hpp"
#include "pointdet/random.hpp"
#include "pointdet/search.hpp"

namespace pointdet {

struct CheckResult {
  std::string name;
  std::size_t trials = 0;
  double worst = 0.0;  ///< largest deviation, or smallest |D| for bound checks
  double tolerance = 0.0;
  std::size_t failures = 0;
  bool asserted = true;  ///< false for pure evidence records (ellipsoid comparisons, Minkowski |D|)
  std::size_t pipeline_failures = 0;
  std::size_t evidence_failures = 0;

  bool passed() const { return !asserted || failures == 0; }
};

struct SuiteReport {
  std::string suite;
  std::uint64_t seed = 0;
  std::size_t trials = 0;
  std::vector<CheckResult> checks;

  bool passed() const {
    return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed(); });
  }
};

struct SuiteOptions {
  std::uint64_t seed = 0;
  std::size_t trials = 100;
  unsigned workers = 0;
  /// Sizes for the bound suite; empty means {4, 6, 8, 10, 12}.
  std::vector<std::size_t> sizes;
  Geometry geometry = Geometry::Euclidean;
};

namespace detail {

inline double relative(std::complex<double> a, std::complex<double> b) {
  return std::abs(a - b) / std::max(std::abs(b), 1e-300);
}

inline std::vector<Point3> cube_points(Philox4x64& rng, std::size_t n, double h = 1.0) {
  std::vector<Point3> pts;
  for (std::size_t i = 0; i < n; ++i) pts.push_back({rng.uniform(-h, h), rng.uniform(-h, h), rng.uniform(-h, h)});
  return pts;
}

inline std::vector<Point3> ball_points(Philox4x64& rng, std::size_t n, double r = 1.0) {
  std::vector<Point3> pts;
  for (std::size_t i = 0; i < n; ++i) pts.push_back(rng.in_ball(r));
  return pts;
}

/// Runs trial(i, rng) -> per-check values for each trial and folds them into CheckResults.
/// Values larger than the tolerance count as failures unless the check is a minimum bound.
struct Fold {
  std::vector<CheckResult> checks;

  void add(std::size_t k, double value) {
    CheckResult& c = checks[k];
    ++c.trials;
    c.worst = std::max(c.worst, value);
    if (!(value <= c.tolerance)) ++c.failures;
  }
};

template <class Trial>
std::vector<std::vector<double>> run_trials(const SuiteOptions& opt, std::size_t trials, std::uint64_t salt,
                                            Trial&& trial) {
  return parallel_map(
      trials,
      [&](std::size_t i) {
        Philox4x64 rng({opt.seed, (salt << 48) ^ i});
        return trial(i, rng);
      },
      opt.workers);
}

inline std::vector<CheckResult> fold(std::vector<CheckResult> checks, const std::vector<std::vector<double>>& rows) {
  Fold f{std::move(checks)};
  for (const auto& row : rows)
    for (std::size_t k = 0; k < row.size(); ++k)
      if (!std::isnan(row[k])) f.add(k, row[k]);
  return f.checks;
}

inline CheckResult check(std::string name, double tol) {
  CheckResult c;
  c.name = std::move(name);
  c.tolerance = tol;
  return c;
}

}  // namespace detail

/// Lift rescaling, Mobius action on lifts, permutations, rigid motions, scale,
/// hyperbolic rescaling, reflection-conjugation and coplanar realness.
inline SuiteReport invariance_suite(const SuiteOptions& opt) {
  using detail::relative;
  constexpr double tol = 1e-9;
  const auto rows = detail::run_trials(opt, opt.trials, 1, [](std::size_t, Philox4x64& rng) {
    const std::size_t n = 3 + rng() % 6;
    const auto pts = detail::cube_points(rng, n);
    const std::complex<double> D = determinant_of(EuclideanConfig{pts});
    std::vector<double> out;

    auto table = euclidean_directions(EuclideanConfig{pts});
    const std::size_t i = rng() % n, j = (i + 1 + rng() % (n - 1)) % n;
    table.v(i, j) = std::polar(std::exp(rng.uniform(-3, 3)), rng.uniform(0, 2 * std::numbers::pi)) * table.v(i, j);
    out.push_back(relative(normalized_determinant_value(table), D));

    auto moved = euclidean_directions(EuclideanConfig{pts});
    const MobiusMap<double> m = random_mobius(rng);
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b)
        if (a != b) moved.v(a, b) = m(moved.v(a, b));
    out.push_back(relative(normalized_determinant_value(moved), D));

    auto shuffled = pts;
    for (std::size_t k = n - 1; k > 0; --k) std::swap(shuffled[k], shuffled[rng() % (k + 1)]);
    out.push_back(relative(determinant_of(EuclideanConfig{shuffled}), D));

    const Rotation rot = rng.rotation();
    const Point3 shift = rng.in_ball(10.0);
    const double lambda = std::exp(rng.uniform(-4, 4));
    std::vector<Point3> rotated, translated, scaled, mirrored, flat;
    for (const auto& p : pts) {
      rotated.push_back(rot(p));
      translated.push_back(p + shift);
      scaled.push_back(lambda * p);
      mirrored.push_back({p.x, p.y, -p.z});
      flat.push_back({p.x, p.y, 0.0});
    }
    out.push_back(relative(determinant_of(EuclideanConfig{rotated}), D));
    out.push_back(relative(determinant_of(EuclideanConfig{translated}), D));
    out.push_back(relative(determinant_of(EuclideanConfig{scaled}), D));

    const double R = 2.0;
    const std::complex<double> DR = determinant_of(HyperbolicConfig{pts, R});
    out.push_back(relative(determinant_of(HyperbolicConfig{scaled, lambda * R}), DR));

    out.push_back(relative(determinant_of(EuclideanConfig{mirrored}), std::conj(D)));
    const std::complex<double> Dflat = determinant_of(EuclideanConfig{flat});
    out.push_back(std::abs(Dflat.imag()) / std::abs(Dflat));
    return out;
  });
  SuiteReport r{"invariances", opt.seed, opt.trials, {}};
  for (const char* name : {"lift-rescaling", "mobius-on-lifts", "permutation", "rotation", "translation",
                           "scale", "hyperbolic-rescaling", "reflection-conjugation", "coplanar-realness"})
    r.checks.push_back(detail::check(name, tol));
  r.checks = detail::fold(std::move(r.checks), rows);
  return r;
}

/// D = 1 for collinear configurations, n = 2..10, Euclidean and hyperbolic.
inline SuiteReport collinear_suite(const SuiteOptions& opt) {
  constexpr double tol = 1e-10;
  SuiteReport r{"collinear", opt.seed, opt.trials, {detail::check("euclidean", tol), detail::check("hyperbolic", tol)}};
  for (std::size_t n = 2; n <= 10; ++n) {
    const auto rows = detail::run_trials(opt, opt.trials, 100 + n, [n](std::size_t, Philox4x64& rng) {
      const Point3 origin = rng.in_ball(0.25), dir = rng.direction();
      std::vector<Point3> pts;
      for (std::size_t i = 0; i < n; ++i) pts.push_back(origin + rng.uniform(-0.7, 0.7) * dir);
      return std::vector<double>{std::abs(determinant_of(EuclideanConfig{pts}) - 1.0),
                                 std::abs(determinant_of(HyperbolicConfig{pts, 1.0}) - 1.0)};
    });
    r.checks = detail::fold(std::move(r.checks), rows);
  }
  return r;
}

/// Pipeline D for triangles against the closed form, and the range [1, 9/8].
inline SuiteReport triangle_suite(const SuiteOptions& opt) {
  const auto rows = detail::run_trials(opt, opt.trials, 2, [](std::size_t, Philox4x64& rng) {
    const std::array<Point3, 3> t{rng.in_ball(1), rng.in_ball(1), rng.in_ball(1)};
    const double closed = triangle_closed_form(t);
    const std::complex<double> D = determinant_of(EuclideanConfig{{t.begin(), t.end()}});
    const double outside = std::max({0.0, 1.0 - closed, closed - 9.0 / 8.0});
    return std::vector<double>{std::abs(D - closed), outside};
  });
  SuiteReport r{"triangle", opt.seed, opt.trials, {detail::check("closed-form", 1e-10), detail::check("range", 1e-12)}};
  r.checks = detail::fold(std::move(r.checks), rows);
  return r;
}

/// |D| >= 1 - 1e-9 over random configurations of each size. Violations are
/// re-evaluated in extended precision and classified as pipeline or evidence failures.
inline SuiteReport bound_suite(const SuiteOptions& opt) {
  const std::vector<std::size_t> sizes = opt.sizes.empty() ? std::vector<std::size_t>{4, 6, 8, 10, 12} : opt.sizes;
  SuiteReport r{"bound", opt.seed, opt.trials, {}};
  for (std::size_t n : sizes) {
    const Geometry g = opt.geometry;
    const auto rows = detail::run_trials(opt, opt.trials, 200 + n, [n, g](std::size_t, Philox4x64& rng) {
      Configuration cfg;
      if (g == Geometry::Hyperbolic)
        cfg = HyperbolicConfig{detail::ball_points(rng, n), 1.0};
      else
        cfg = EuclideanConfig{detail::cube_points(rng, n)};
      const double absD = abs_determinant(cfg);
      double verdict = 0.0;
      if (!(absD >= 1.0 - kBoundTolerance)) verdict = classify_bound(cfg) == BoundVerdict::EvidenceFailure ? 2.0 : 1.0;
      return std::vector<double>{absD, verdict};
    });
    CheckResult c = detail::check("n=" + std::to_string(n), kBoundTolerance);
    c.worst = std::numeric_limits<double>::infinity();
    for (const auto& row : rows) {
      ++c.trials;
      c.worst = std::min(c.worst, row[0]);
      if (row[1] == 1.0) ++c.pipeline_failures;
      if (row[1] == 2.0) ++c.evidence_failures;
    }
    c.failures = c.pipeline_failures + c.evidence_failures;
    r.checks.push_back(c);
  }
  return r;
}

/// Adjacent relative decreases of |D_R| along the default 20-radius grid, n <= 8.
inline SuiteReport monotonicity_suite(const SuiteOptions& opt) {
  const auto rows = detail::run_trials(opt, opt.trials, 3, [](std::size_t i, Philox4x64& rng) {
    const auto pts = detail::cube_points(rng, 2 + i % 7);
    const SweepReport s = sweep_radius(pts, default_radius_grid(pts));
    return std::vector<double>{s.max_violation, s.limit_gap / std::max(s.absD_infinity, 1.0)};
  });
  SuiteReport r{"monotonicity", opt.seed, opt.trials,
                {detail::check("adjacent-decrease", kMonotoneTolerance), detail::check("euclidean-limit", 1e-4)}};
  r.checks = detail::fold(std::move(r.checks), rows);
  return r;
}

/// Static reduction, Lorentz invariance, n = 2 subluminal bound and superluminal gating.
/// For n = 3 the values of |D| are recorded: independence (D != 0) and the strong bound
/// are evidence, not assertions.
inline SuiteReport minkowski_suite(const SuiteOptions& opt) {
  const auto rows = detail::run_trials(opt, opt.trials, 4, [](std::size_t, Philox4x64& rng) {
    std::vector<double> out;
    const auto pts = detail::cube_points(rng, 2 + rng() % 6);
    MinkowskiConfig still;
    for (const auto& p : pts) {
      still.lines.push_back({p, {}});
      still.event_times.push_back(rng.uniform(-1, 1));
    }
    out.push_back(std::abs(determinant_of(still) - determinant_of(EuclideanConfig{pts})));

    SearchSpace moving{Geometry::Minkowski, 3 + rng() % 4};
    moving.velocity_cap = 0.9;
    const auto cfg = std::get<MinkowskiConfig>(random_configuration(moving, rng));
    const MinkowskiConfig boosted = lorentz_boost(cfg, rng.direction(), rng.uniform(-0.9, 0.9));
    out.push_back(detail::relative(determinant_of(boosted), determinant_of(cfg)));

    SearchSpace pair{Geometry::Minkowski, 2};
    pair.velocity_cap = 0.999;
    out.push_back(std::max(0.0, 1.0 - abs_determinant(random_configuration(pair, rng))));

    MinkowskiConfig fast = still;
    fast.lines[0].b = (1.0 + rng.uniform(0.01, 2.0)) * rng.direction();
    double gate = 0.0;
    try {
      validate(fast);
      gate = 1.0;
    } catch (const SuperluminalWorldLine&) {
    }
    fast.allow_superluminal = true;
    try {
      validate(fast);
    } catch (const Error&) {
      gate = 1.0;
    }
    out.push_back(gate);

    SearchSpace three{Geometry::Minkowski, 3};
    const double absD3 = abs_determinant(random_configuration(three, rng));
    out.push_back(absD3 < 1e-9 ? 1.0 : 0.0);
    out.push_back(std::max(0.0, 1.0 - absD3));
    return out;
  });
  SuiteReport r{"minkowski", opt.seed, opt.trials,
                {detail::check("static-reduction", 1e-10), detail::check("lorentz-invariance", 1e-9),
                 detail::check("pair-bound", kBoundTolerance), detail::check("superluminal-gate", 0.0),
                 detail::check("n3-independence", 0.0), detail::check("n3-strong-bound", kBoundTolerance)}};
  r.checks[4].asserted = false;
  r.checks[5].asserted = false;
  r.checks = detail::fold(std::move(r.checks), rows);
  return r;
}

/// Cluster decomposition ladder and the hyperbolic boundary limit.
inline SuiteReport cluster_suite(const SuiteOptions& opt) {
  const auto rows = detail::run_trials(opt, opt.trials, 5, [](std::size_t, Philox4x64& rng) {
    const auto A = detail::ball_points(rng, 1 + rng() % 4);
    const auto B = detail::ball_points(rng, 2 + rng() % 3);
    const ClusterReport c = cluster_check(A, B, cluster_ladder(A, B), rng.direction());
    const HyperbolicConfig base{detail::ball_points(rng, 2 + rng() % 4, 0.8), 1.0};
    const BoundaryLimitReport b = boundary_limit_check(base, rng.direction(), {1e-2, 1e-4, 1e-6});
    return std::vector<double>{c.strictly_decreasing ? 0.0 : 1.0, b.decreasing ? 0.0 : 1.0};
  });
  SuiteReport r{"cluster", opt.seed, opt.trials, {detail::check("cluster-ladder", 0.0), detail::check("boundary-limit", 0.0)}};
  r.checks = detail::fold(std::move(r.checks), rows);
  return r;
}

/// Nelder-Mead from random triangles must land in the collinear basin, never below 1.
inline SuiteReport descent_suite(const SuiteOptions& opt) {
  const auto rows = detail::run_trials(opt, opt.trials, 6, [](std::size_t, Philox4x64& rng) {
    const SearchSpace space{Geometry::Euclidean, 3};
    const SearchRecord rec = minimize_abs_d(space, random_configuration(space, rng));
    return std::vector<double>{rec.best_absD - 1.0, std::max(0.0, 1.0 - rec.best_absD),
                               std::max(0.0, rec.best_absD - rec.start_absD)};
  });
  SuiteReport r{"descent", opt.seed, opt.trials,
                {detail::check("reaches-collinear", 1e-6), detail::check("never-below-one", kBoundTolerance),
                 detail::check("never-worse-than-start", 0.0)}};
  r.checks = detail::fold(std::move(r.checks), rows);
  return r;
}

/// |D_outer| >= |D_inner| for nested ellipsoids (recorded, not asserted).
inline SuiteReport ellipsoid_suite(const SuiteOptions& opt) {
  const auto rows = detail::run_trials(opt, opt.trials, 7, [](std::size_t, Philox4x64& rng) {
    const Ellipsoid inner{{1, 1, 1}, {}}, outer{{2, 1.5, 1.2}, {}};
    const EllipsoidComparison c = ellipsoid_compare(detail::ball_points(rng, 3 + rng() % 4, 0.95), inner, outer);
    return std::vector<double>{std::max(0.0, (c.abs_inner - c.abs_outer) / c.abs_inner)};
  });
  SuiteReport r{"ellipsoid", opt.seed, opt.trials, {detail::check("nested-inequality", kMonotoneTolerance)}};
  r.checks.back().asserted = false;
  r.checks = detail::fold(std::move(r.checks), rows);
  return r;
}

inline const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"invariances", "collinear", "triangle",   "bound",    "monotonicity",
                                              "minkowski",   "cluster",   "descent",    "ellipsoid"};
  return names;
}

inline SuiteReport run_suite(const std::string& name, const SuiteOptions& opt) {
  if (name == "invariances") return invariance_suite(opt);
  if (name == "collinear") return collinear_suite(opt);
  if (name == "triangle") return triangle_suite(opt);
  if (name == "bound") return bound_suite(opt);
  if (name == "monotonicity") return monotonicity_suite(opt);
  if (name == "minkowski") return minkowski_suite(opt);
  if (name == "cluster") return cluster_suite(opt);
  if (name == "descent") return descent_suite(opt);
  if (name == "ellipsoid") return ellipsoid_suite(opt);
  throw Error("unknown suite '" + name + "'");
}

}  // namespace pointdet
