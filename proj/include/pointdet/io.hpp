#pragma once

// JSON input schema, report serialization and run manifests.
//
//   {"geometry": "euclidean",  "points": [[x, y, z], ...]}
//   {"geometry": "hyperbolic", "R": 1.0, "points": [...]}
//   {"geometry": "minkowski",  "lines": [{"a": [...], "b": [...]}, ...], "t": [...],
//    "allow_superluminal": false}
//   {"configurations": [ <any of the above>, ... ]}

#include <array>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <string>
#include <vector>

#include <openssl/evp.h>

#include "json.hpp"

#include "pointdet/conjectures.hpp"
#include "pointdet/configuration.hpp"
#include "pointdet/determinant.hpp"
#include "pointdet/errors.hpp"
#include "pointdet/search.hpp"
#include "pointdet/suites.hpp"

namespace pointdet::io {

using json = nlohmann::ordered_json;

inline constexpr const char* kToolVersion = "1.0.0";

inline std::string sha256_hex(const std::string& bytes) {
  std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), md.data(), &len, EVP_sha256(), nullptr) != 1)
    throw Error("SHA-256 digest failed");
  std::ostringstream os;
  for (unsigned int i = 0; i < len; ++i) os << std::hex << std::setw(2) << std::setfill('0') << int(md[i]);
  return os.str();
}

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw SchemaError("cannot open " + path.string());
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

/// %.17g, enough to round-trip any double.
inline std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// ---- parsing ----

namespace detail {

inline std::string at(const std::string& field, std::size_t i) { return field + "[" + std::to_string(i) + "]"; }

inline const json& member(const json& obj, const std::string& key, const std::string& where) {
  if (!obj.contains(key)) throw SchemaError(where + ": missing field '" + key + "'");
  return obj.at(key);
}

inline double number(const json& v, const std::string& where) {
  if (!v.is_number()) throw SchemaError(where + ": expected a number");
  return v.get<double>();
}

inline Point3 vec3(const json& v, const std::string& where) {
  if (!v.is_array() || v.size() != 3) throw SchemaError(where + ": expected [x, y, z]");
  return {number(v[0], where + "[0]"), number(v[1], where + "[1]"), number(v[2], where + "[2]")};
}

inline std::vector<Point3> points(const json& obj, const std::string& prefix) {
  const json& arr = member(obj, "points", prefix);
  if (!arr.is_array()) throw SchemaError(prefix + "points: expected an array");
  std::vector<Point3> out;
  for (std::size_t i = 0; i < arr.size(); ++i) out.push_back(vec3(arr[i], prefix + at("points", i)));
  return out;
}

inline void require_count(std::size_t n, const std::string& field) {
  if (n < 2) throw ValidationError(field, -1, "need at least 2 entries, got " + std::to_string(n));
}

inline void require_distinct(const std::vector<Point3>& pts, const std::string& field) {
  for (std::size_t j = 0; j < pts.size(); ++j) {
    if (!std::isfinite(pts[j].x) || !std::isfinite(pts[j].y) || !std::isfinite(pts[j].z))
      throw ValidationError(field, static_cast<int>(j), "not finite");
    for (std::size_t i = 0; i < j; ++i)
      if (max_norm_distance(pts[i], pts[j]) < kCoincidenceTolerance)
        throw ValidationError(field, static_cast<int>(j), "coincides with " + field + "[" + std::to_string(i) + "]");
  }
}

}  // namespace detail

/// Validates with field/index diagnostics, then runs the library validator.
inline void validate_input(const Configuration& cfg, const std::string& prefix = "") {
  if (const auto* e = std::get_if<EuclideanConfig>(&cfg)) {
    detail::require_count(e->points.size(), prefix + "points");
    detail::require_distinct(e->points, prefix + "points");
  } else if (const auto* h = std::get_if<HyperbolicConfig>(&cfg)) {
    if (!(h->R > 0.0) || !std::isfinite(h->R)) throw ValidationError(prefix + "R", -1, "must be positive and finite");
    detail::require_count(h->points.size(), prefix + "points");
    for (std::size_t i = 0; i < h->points.size(); ++i)
      if (!(norm(h->points[i]) < h->R))
        throw ValidationError(prefix + "points", static_cast<int>(i),
                              "outside the ball of radius " + format_double(h->R));
    detail::require_distinct(h->points, prefix + "points");
  } else {
    const auto& m = std::get<MinkowskiConfig>(cfg);
    detail::require_count(m.lines.size(), prefix + "lines");
    if (m.event_times.size() != m.lines.size())
      throw ValidationError(prefix + "t", -1,
                            "has " + std::to_string(m.event_times.size()) + " entries for " +
                                std::to_string(m.lines.size()) + " lines");
    for (std::size_t i = 0; i < m.lines.size(); ++i)
      if (!m.allow_superluminal && !(norm(m.lines[i].b) < 1.0))
        throw ValidationError(prefix + "lines", static_cast<int>(i),
                              "velocity " + format_double(norm(m.lines[i].b)) +
                                  " is not below 1 (set allow_superluminal to permit)");
    for (std::size_t j = 0; j < m.lines.size(); ++j)
      for (std::size_t i = 0; i < j; ++i) {
        const MinkowskiConfig pair{{m.lines[i], m.lines[j]}, {m.event_times[i], m.event_times[j]}, true};
        try {
          validate(pair);
        } catch (const Error& err) {
          throw ValidationError(prefix + "lines", static_cast<int>(j),
                                std::string(err.what()) + " (with lines[" + std::to_string(i) + "])");
        }
      }
  }
  try {
    validate(cfg);
  } catch (const Error& err) {
    throw ValidationError(prefix + "configuration", -1, err.what());
  }
}

inline Configuration configuration_from_json(const json& doc, const std::string& prefix = "") {
  if (!doc.is_object()) throw SchemaError(prefix + ": expected an object");
  const json& tag = detail::member(doc, "geometry", prefix);
  if (!tag.is_string()) throw SchemaError(prefix + "geometry: expected a string");
  const std::string g = tag.get<std::string>();
  Configuration cfg;
  if (g == "euclidean") {
    cfg = EuclideanConfig{detail::points(doc, prefix)};
  } else if (g == "hyperbolic") {
    cfg = HyperbolicConfig{detail::points(doc, prefix), detail::number(detail::member(doc, "R", prefix), prefix + "R")};
  } else if (g == "minkowski") {
    MinkowskiConfig m;
    const json& lines = detail::member(doc, "lines", prefix);
    const json& times = detail::member(doc, "t", prefix);
    if (!lines.is_array()) throw SchemaError(prefix + "lines: expected an array");
    if (!times.is_array()) throw SchemaError(prefix + "t: expected an array");
    for (std::size_t i = 0; i < lines.size(); ++i) {
      const std::string where = prefix + detail::at("lines", i);
      if (!lines[i].is_object()) throw SchemaError(where + ": expected {\"a\": [...], \"b\": [...]}");
      m.lines.push_back({detail::vec3(detail::member(lines[i], "a", where), where + ".a"),
                         detail::vec3(detail::member(lines[i], "b", where), where + ".b")});
    }
    for (std::size_t i = 0; i < times.size(); ++i)
      m.event_times.push_back(detail::number(times[i], prefix + detail::at("t", i)));
    if (doc.contains("allow_superluminal")) {
      if (!doc["allow_superluminal"].is_boolean()) throw SchemaError(prefix + "allow_superluminal: expected a boolean");
      m.allow_superluminal = doc["allow_superluminal"].get<bool>();
    }
    cfg = m;
  } else {
    throw SchemaError(prefix + "geometry: unknown value '" + g + "'");
  }
  validate_input(cfg, prefix);
  return cfg;
}

/// One configuration, or every entry of a "configurations" batch.
inline std::vector<Configuration> parse_document(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw SchemaError(std::string("malformed JSON: ") + e.what());
  }
  if (doc.is_object() && doc.contains("configurations")) {
    const json& arr = doc["configurations"];
    if (!arr.is_array()) throw SchemaError("configurations: expected an array");
    std::vector<Configuration> out;
    for (std::size_t i = 0; i < arr.size(); ++i)
      out.push_back(configuration_from_json(arr[i], detail::at("configurations", i) + "."));
    return out;
  }
  return {configuration_from_json(doc)};
}

inline std::vector<Configuration> parse_input(const std::filesystem::path& path) {
  return parse_document(read_file(path));
}

// ---- serialization ----

inline json to_json(const Point3& p) { return json::array({p.x, p.y, p.z}); }

inline json to_json(const Configuration& cfg) {
  json out;
  out["geometry"] = std::string(geometry_name(geometry_of(cfg)));
  if (const auto* m = std::get_if<MinkowskiConfig>(&cfg)) {
    json lines = json::array();
    for (const auto& l : m->lines) lines.push_back({{"a", to_json(l.a)}, {"b", to_json(l.b)}});
    out["lines"] = lines;
    out["t"] = m->event_times;
    if (m->allow_superluminal) out["allow_superluminal"] = true;
    return out;
  }
  if (const auto* h = std::get_if<HyperbolicConfig>(&cfg)) out["R"] = h->R;
  json pts = json::array();
  const auto& src = std::holds_alternative<EuclideanConfig>(cfg) ? std::get<EuclideanConfig>(cfg).points
                                                                 : std::get<HyperbolicConfig>(cfg).points;
  for (const auto& p : src) pts.push_back(to_json(p));
  out["points"] = pts;
  return out;
}

inline json to_json(const DetResult& r) {
  return {{"D_re", r.D.real()},   {"D_im", r.D.imag()},
          {"absD", r.absD},       {"margin", r.independence_margin},
          {"geometry", std::string(geometry_name(r.geometry))}, {"n", r.n}};
}

/// Search records carry no timings, so identical seeds give identical bytes.
inline json to_json(const SearchRecord& r) {
  json out{{"type", "record"},
           {"trial", r.trial},
           {"seed", r.seed},
           {"start_absD", r.start_absD},
           {"best_absD", r.best_absD},
           {"margin", r.margin},
           {"iterations", r.iterations},
           {"evaluations", r.evaluations},
           {"candidate", r.candidate},
           {"extended_absD", r.extended_absD ? json(*r.extended_absD) : json(nullptr)},
           {"confirmed", r.confirmed},
           {"superluminal", r.superluminal}};
  out["start"] = to_json(r.start);
  out["best"] = to_json(r.best);
  return out;
}

inline json to_json(const ScanSummary& s) {
  json hist = json::array();
  for (const auto& b : s.histogram) hist.push_back({{"lower", b.lower}, {"count", b.count}});
  return {{"type", "summary"},
          {"trials", s.trials},
          {"seed", s.seed},
          {"threshold", s.threshold},
          {"min_absD", s.min_absD},
          {"argmin_trial", s.argmin_trial},
          {"candidates", s.candidates},
          {"confirmed", s.confirmed},
          {"superluminal_candidates", s.superluminal_candidates},
          {"histogram", hist}};
}

inline json to_json(const CheckResult& c) {
  json out{{"name", c.name},         {"trials", c.trials},       {"worst", c.worst},
           {"tolerance", c.tolerance}, {"failures", c.failures}, {"asserted", c.asserted},
           {"passed", c.passed()}};
  if (c.pipeline_failures || c.evidence_failures) {
    out["pipeline_failures"] = c.pipeline_failures;
    out["evidence_failures"] = c.evidence_failures;
  }
  return out;
}

inline json to_json(const SuiteReport& r) {
  json checks = json::array();
  for (const auto& c : r.checks) checks.push_back(to_json(c));
  return {{"suite", r.suite}, {"seed", r.seed}, {"trials", r.trials}, {"passed", r.passed()}, {"checks", checks}};
}

inline json to_json(const SweepReport& r) {
  json out{{"radii", r.radii},
           {"absD", r.absD},
           {"monotone", r.monotone},
           {"max_violation", r.max_violation},
           {"tolerance", r.tolerance},
           {"absD_infinity", r.absD_infinity},
           {"limit_gap", r.limit_gap}};
  if (r.extended_max_violation) out["extended_max_violation"] = *r.extended_max_violation;
  return out;
}

inline std::string sweep_csv(const SweepReport& r) {
  std::string out = "R,absD\n";
  for (std::size_t k = 0; k < r.radii.size(); ++k) out += format_double(r.radii[k]) + "," + format_double(r.absD[k]) + "\n";
  return out;
}

inline std::string results_csv(const std::vector<DetResult>& rs) {
  std::string out = "index,geometry,n,D_re,D_im,absD,margin\n";
  for (std::size_t i = 0; i < rs.size(); ++i) {
    const DetResult& r = rs[i];
    out += std::to_string(i) + "," + std::string(geometry_name(r.geometry)) + "," + std::to_string(r.n) + "," +
           format_double(r.D.real()) + "," + format_double(r.D.imag()) + "," + format_double(r.absD) + "," +
           format_double(r.independence_margin) + "\n";
  }
  return out;
}

// ---- manifests ----

/// Provenance of one CLI run. run_id hashes only deterministic inputs; the
/// timestamps and timings live in the manifest file, never in result payloads.
struct RunManifest {
  std::string command;
  json parameters = json::object();  ///< normalized options that influence results
  std::string input_digest = "none";
  std::uint64_t seed = 0;
  std::string version = kToolVersion;
  std::string started_at, finished_at;
  double wall_seconds = 0.0;
  std::vector<std::string> outputs;
  json timings;  ///< e.g. per-trial wall seconds of a search

  std::string run_id() const {
    const json key{{"command", command}, {"parameters", parameters}, {"input_digest", input_digest},
                   {"seed", seed},       {"version", version}};
    return sha256_hex(key.dump()).substr(0, 16);
  }

  json to_json() const {
    json out{{"run_id", run_id()},          {"command", command},     {"parameters", parameters},
             {"input_digest", input_digest}, {"seed", seed},           {"version", version},
             {"started_at", started_at},     {"finished_at", finished_at}, {"wall_seconds", wall_seconds},
             {"outputs", outputs}};
    if (!timings.is_null()) out["timings"] = timings;
    return out;
  }
};

}  // namespace pointdet::io
