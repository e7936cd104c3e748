#pragma once

// The pointdet command line: eval, verify, sweep, search, moduli.
//
// Exit codes: 0 success with every check passing, 1 a check failed,
// 2 bad usage or invalid input.

#include <chrono>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "pointdet/conjectures.hpp"
#include "pointdet/determinant.hpp"
#include "pointdet/io.hpp"
#include "pointdet/moduli.hpp"
#include "pointdet/search.hpp"
#include "pointdet/suites.hpp"

namespace pointdet::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitCheckFailed = 1;
inline constexpr int kExitInputError = 2;

namespace detail {

inline std::string utc_now() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  std::ostringstream os;
  os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return os.str();
}

/// Sends a payload to --out (plus a manifest next to it) or to stdout.
class Sink {
 public:
  Sink(std::string out_path, std::ostream& out) : path_(std::move(out_path)), out_(out) {}

  void write(const std::string& payload) {
    if (path_.empty()) {
      out_ << payload;
      return;
    }
    std::ofstream f(path_, std::ios::binary);
    if (!f) throw SchemaError("cannot write " + path_);
    f << payload;
  }

  void finish(io::RunManifest& m, std::chrono::steady_clock::time_point started) {
    if (path_.empty()) return;
    m.finished_at = utc_now();
    m.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    m.outputs.push_back(path_);
    std::ofstream f(path_ + ".manifest.json", std::ios::binary);
    if (!f) throw SchemaError("cannot write " + path_ + ".manifest.json");
    f << m.to_json().dump(2) << '\n';
  }

  bool to_file() const { return !path_.empty(); }

 private:
  std::string path_;
  std::ostream& out_;
};

inline Geometry parse_geometry(const std::string& s) {
  if (s == "euclidean") return Geometry::Euclidean;
  if (s == "hyperbolic") return Geometry::Hyperbolic;
  if (s == "minkowski") return Geometry::Minkowski;
  throw SchemaError("unknown geometry '" + s + "'");
}

inline std::vector<Point3> sweep_points(const Configuration& cfg) {
  if (const auto* e = std::get_if<EuclideanConfig>(&cfg)) return e->points;
  if (const auto* h = std::get_if<HyperbolicConfig>(&cfg)) return h->points;
  throw SchemaError("sweep needs a euclidean or hyperbolic point set");
}

inline const char* verdict(bool ok) { return ok ? "pass" : "FAIL"; }

}  // namespace detail

struct Options {
  std::string input, out, format, precision = "double", suite, geometry = "euclidean";
  std::uint64_t seed = 0;
  std::size_t trials = 100, grid = 20, max_iterations = 4000;
  std::vector<std::size_t> n;
  std::optional<double> radius, box, velocity_cap;
  double threshold = kDefaultThreshold;
  bool allow_superluminal = false;
  unsigned threads = 0;
  unsigned genus = 2, rank = 2;
  std::optional<std::size_t> order;
};

namespace detail {

inline Precision parse_precision(const std::string& s) {
  if (s == "double") return Precision::Double;
  if (s == "extended") return Precision::Extended;
  throw SchemaError("unknown precision '" + s + "'");
}

inline int run_eval(const Options& o, std::ostream& out) {
  const auto started = std::chrono::steady_clock::now();
  io::RunManifest m;
  m.command = "eval";
  m.started_at = utc_now();
  const std::string text = io::read_file(o.input);
  m.input_digest = io::sha256_hex(text);
  const Precision precision = parse_precision(o.precision);
  const std::string format = o.format.empty() ? "json" : o.format;
  m.parameters = {{"precision", o.precision}, {"format", format}};
  const auto configs = io::parse_document(text);
  std::vector<DetResult> results;
  for (const auto& cfg : configs) {
    try {
      results.push_back(evaluate(cfg, precision));
    } catch (const Error& e) {
      throw ValidationError("configurations", static_cast<int>(results.size()), e.what());
    }
  }
  std::string payload;
  if (format == "csv") {
    payload = "# run_id " + m.run_id() + "\n" + io::results_csv(results);
  } else if (format == "json") {
    io::json doc;
    if (results.size() == 1 && !io::json::parse(text).contains("configurations")) {
      doc = io::to_json(results.front());
    } else {
      doc["results"] = io::json::array();
      for (const auto& r : results) doc["results"].push_back(io::to_json(r));
    }
    doc["run_id"] = m.run_id();
    payload = doc.dump(2) + "\n";
  } else {
    throw SchemaError("unknown format '" + format + "'");
  }
  Sink sink(o.out, out);
  sink.write(payload);
  sink.finish(m, started);
  return kExitOk;
}

inline int run_verify(const Options& o, std::ostream& out) {
  const auto started = std::chrono::steady_clock::now();
  io::RunManifest m;
  m.command = "verify";
  m.started_at = utc_now();
  m.seed = o.seed;
  SuiteOptions so;
  so.seed = o.seed;
  so.trials = o.trials;
  so.workers = o.threads;
  so.sizes = o.n;
  so.geometry = parse_geometry(o.geometry);
  if (o.trials < 1) throw SchemaError("--trials must be at least 1");
  const std::vector<std::string> names = o.suite == "all" ? suite_names() : std::vector<std::string>{o.suite};
  for (const auto& name : names)
    if (std::find(suite_names().begin(), suite_names().end(), name) == suite_names().end())
      throw SchemaError("unknown suite '" + name + "'");
  m.parameters = {{"suite", o.suite}, {"trials", o.trials}, {"n", o.n}, {"geometry", o.geometry}};
  io::json doc{{"run_id", m.run_id()}, {"reports", io::json::array()}};
  bool ok = true;
  for (const auto& name : names) {
    const SuiteReport r = run_suite(name, so);
    ok = ok && r.passed();
    doc["reports"].push_back(io::to_json(r));
  }
  doc["passed"] = ok;
  Sink sink(o.out, out);
  sink.write(doc.dump(2) + "\n");
  sink.finish(m, started);
  return ok ? kExitOk : kExitCheckFailed;
}

inline int run_sweep(const Options& o, std::ostream& out) {
  const auto started = std::chrono::steady_clock::now();
  io::RunManifest m;
  m.command = "sweep";
  m.started_at = utc_now();
  const std::string text = io::read_file(o.input);
  m.input_digest = io::sha256_hex(text);
  const auto configs = io::parse_document(text);
  if (configs.size() != 1) throw SchemaError("sweep takes a single configuration");
  const auto points = sweep_points(configs.front());
  if (o.grid < 2) throw SchemaError("--grid must be at least 2");
  double base = max_point_norm(points);
  if (base == 0.0) base = 1.0;
  const double largest = o.radius.value_or(1e6 * base);
  if (!(largest > 1.01 * base)) throw SchemaError("--radius must exceed 1.01 times the largest point norm");
  const SweepReport r = sweep_radius(points, default_radius_grid(points, o.grid, 1.01, largest / base));
  const std::string format = o.format.empty() ? "csv" : o.format;
  m.parameters = {{"grid", o.grid}, {"radius", largest}, {"format", format}};
  std::string payload;
  if (format == "csv") {
    payload = "# run_id " + m.run_id() + "\n" + io::sweep_csv(r);
  } else if (format == "json") {
    io::json doc = io::to_json(r);
    doc["run_id"] = m.run_id();
    payload = doc.dump(2) + "\n";
  } else {
    throw SchemaError("unknown format '" + format + "'");
  }
  Sink sink(o.out, out);
  sink.write(payload);
  sink.finish(m, started);
  return r.monotone ? kExitOk : kExitCheckFailed;
}

inline int run_search(const Options& o, std::ostream& out) {
  const auto started = std::chrono::steady_clock::now();
  io::RunManifest m;
  m.command = "search";
  m.started_at = utc_now();
  m.seed = o.seed;
  SearchSpace space;
  space.geometry = parse_geometry(o.geometry);
  space.n = o.n.empty() ? 4 : o.n.front();
  if (o.n.size() > 1) throw SchemaError("search takes a single --n");
  if (space.n < 2) throw SchemaError("--n must be at least 2");
  if (o.trials < 1) throw SchemaError("--trials must be at least 1");
  space.R = o.radius.value_or(1.0);
  space.half_width = o.box.value_or(1.0);
  space.allow_superluminal = o.allow_superluminal;
  space.velocity_cap = o.velocity_cap.value_or(0.9);
  validate(space);
  NelderMeadOptions nm;
  nm.max_iterations = o.max_iterations;
  m.parameters = {{"geometry", o.geometry},         {"n", space.n},
                  {"trials", o.trials},             {"threshold", o.threshold},
                  {"R", space.R},                   {"box", space.half_width},
                  {"velocity_cap", space.velocity_cap}, {"allow_superluminal", space.allow_superluminal},
                  {"max_iterations", nm.max_iterations}};
  const ScanResult scan = counterexample_scan(space, o.trials, o.seed, o.threshold, nm, o.threads);
  std::string records;
  m.timings = {{"trial_wall_seconds", io::json::array()}};
  for (const auto& r : scan.records) m.timings["trial_wall_seconds"].push_back(r.wall_seconds);
  for (const auto& r : scan.records) {
    io::json j = io::to_json(r);
    j["run_id"] = m.run_id();
    records += j.dump() + "\n";
  }
  io::json summary = io::to_json(scan.summary);
  summary["run_id"] = m.run_id();
  Sink sink(o.out, out);
  if (sink.to_file()) {
    sink.write(records);
    out << summary.dump() << "\n";
  } else {
    out << records << summary.dump() << "\n";
  }
  sink.finish(m, started);
  // A confirmed sub-threshold record in a subluminal space is the only failing outcome.
  const bool counterexample = scan.summary.confirmed > scan.summary.superluminal_candidates;
  return counterexample && o.threshold <= 1.0 ? kExitCheckFailed : kExitOk;
}

inline int run_moduli(const Options& o, std::ostream& out) {
  using namespace moduli;
  if (o.genus < 2) throw SchemaError("--genus must be at least 2");
  const unsigned g = o.genus;
  const std::size_t N = o.order.value_or(6 * g);
  const IntPolynomial p = moduli_poincare(g);
  const bool degree_ok = p.degree() == static_cast<long>(6 * g - 6);
  const bool palindromic = p.is_palindromic();
  const bool nonnegative = p.is_nonnegative();
  const IdentityCheck morse = morse_decomposition_check(g, N);
  const IdentityCheck bg = bg_rank2_factorization_check(g, N, BgDenominator::Squared);
  bool zeta_ok = true;
  for (int q : {2, 3}) zeta_ok = zeta_ok && verify_p1_zeta(q, 10);
  bool subst_ok = true;
  for (unsigned n = 1; n <= 6; ++n) {
    std::vector<BigInt> c(2 * n - 1, 0);
    for (unsigned k = 0; k < n; ++k) c[2 * k] = 1;
    subst_ok = subst_ok && projective_count_polynomial(n).substitute_power(2) == IntPolynomial(c);
  }
  const TruncatedSeries series = bg_poincare_series(o.rank, g, std::min<std::size_t>(N, 12));
  const bool ok = degree_ok && palindromic && nonnegative && morse.holds && bg.holds && zeta_ok && subst_ok;
  if (o.format == "json") {
    std::vector<std::string> coeffs;
    for (long k = 0; k <= p.degree(); ++k) coeffs.push_back(p.coeff(static_cast<std::size_t>(k)).str());
    io::json doc{{"genus", g},
                 {"poincare", p.to_string()},
                 {"coefficients", coeffs},
                 {"degree", p.degree()},
                 {"palindromic", palindromic},
                 {"nonnegative", nonnegative},
                 {"morse_order", N},
                 {"morse_holds", morse.holds},
                 {"bg_factorization_holds", bg.holds},
                 {"p1_zeta_holds", zeta_ok},
                 {"q_analog_holds", subst_ok},
                 {"passed", ok}};
    out << doc.dump(2) << "\n";
  } else {
    out << "P(t) = " << p.to_string() << "\n";
    out << "degree " << p.degree() << " (expected " << 6 * g - 6 << "): " << verdict(degree_ok) << "\n";
    out << "palindromic: " << verdict(palindromic) << "\n";
    out << "non-negative coefficients: " << verdict(nonnegative) << "\n";
    out << "morse decomposition to order " << N << ": " << verdict(morse.holds) << "\n";
    out << "rank-2 gauge series factorization to order " << N << ": " << verdict(bg.holds) << "\n";
    out << "P^1 zeta function (q = 2, 3; order 10): " << verdict(zeta_ok) << "\n";
    out << "projective counts at q = t^2 (n <= 6): " << verdict(subst_ok) << "\n";
    out << "P_BG rank " << o.rank << " = ";
    for (std::size_t k = 0; k <= series.order(); ++k) out << (k ? ", " : "") << series[k];
    out << ", ...\n";
  }
  return ok ? kExitOk : kExitCheckFailed;
}

}  // namespace detail

/// Runs one invocation; args excludes the program name.
inline int run_command(const std::vector<std::string>& args, std::ostream& out = std::cout,
                       std::ostream& err = std::cerr) {
  CLI::App app{"Normalized determinants of point configurations and moduli-space identities", "pointdet"};
  app.require_subcommand(1);
  Options o;
  auto add_output = [&](CLI::App* sub) {
    sub->add_option("--out", o.out, "Write results to this file (plus PATH.manifest.json)");
  };
  auto add_threads = [&](CLI::App* sub) {
    sub->add_option("--threads", o.threads, "Worker threads (default: ATIYAHDET_THREADS or hardware)");
  };

  CLI::App* eval = app.add_subcommand("eval", "Evaluate D for a configuration or batch");
  eval->add_option("--input", o.input, "Configuration JSON")->required();
  eval->add_option("--precision", o.precision, "double or extended")->check(CLI::IsMember({"double", "extended"}));
  eval->add_option("--format", o.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
  add_output(eval);

  CLI::App* verify = app.add_subcommand("verify", "Run a property suite over random configurations");
  verify->add_option("--suite", o.suite, "Suite name or 'all'")->required();
  verify->add_option("--seed", o.seed, "Master seed");
  verify->add_option("--trials", o.trials, "Random configurations per check");
  verify->add_option("--n", o.n, "Configuration sizes for the bound suite");
  verify->add_option("--geometry", o.geometry, "Geometry for the bound suite");
  verify->add_option("--format", o.format, "json")->check(CLI::IsMember({"json"}));
  add_output(verify);
  add_threads(verify);

  CLI::App* sweep = app.add_subcommand("sweep", "Tabulate |D_R| over a geometric radius grid");
  sweep->add_option("--input", o.input, "Configuration JSON (euclidean or hyperbolic points)")->required();
  sweep->add_option("--grid", o.grid, "Number of radii");
  sweep->add_option("--radius", o.radius, "Largest radius (default 1e6 times the largest point norm)");
  sweep->add_option("--format", o.format, "csv or json")->check(CLI::IsMember({"json", "csv"}));
  add_output(sweep);

  CLI::App* search = app.add_subcommand("search", "Random-restart descent of |D|");
  search->add_option("--geometry", o.geometry, "euclidean, hyperbolic or minkowski");
  search->add_option("--n", o.n, "Number of points");
  search->add_option("--trials", o.trials, "Random restarts");
  search->add_option("--seed", o.seed, "Master seed");
  search->add_option("--threshold", o.threshold, "Records below this |D| are re-checked in extended precision");
  search->add_option("--radius", o.radius, "Ball radius R for hyperbolic spaces");
  search->add_option("--box", o.box, "Half-width of the coordinate box");
  search->add_option("--velocity-cap", o.velocity_cap, "Largest speed for Minkowski world lines");
  search->add_flag("--allow-superluminal", o.allow_superluminal, "Permit speeds >= 1");
  search->add_option("--max-iterations", o.max_iterations, "Nelder-Mead iteration cap per restart sequence");
  add_output(search);
  add_threads(search);

  CLI::App* mod = app.add_subcommand("moduli", "Poincare polynomial identities for rank-2 bundles");
  mod->add_option("--genus", o.genus, "Curve genus g >= 2")->required();
  mod->add_option("--order", o.order, "Series order for the identity checks (default 6g)");
  mod->add_option("--rank", o.rank, "Rank of the gauge-group series to print");
  mod->add_option("--format", o.format, "text or json")->check(CLI::IsMember({"text", "json"}));

  std::vector<const char*> argv{"pointdet"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::Success& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitInputError;
  }

  if (!orientation_self_check()) {
    err << "orientation self-check failed: collinear configurations do not give D = +1\n";
    return kExitCheckFailed;
  }
  try {
    if (*eval) return detail::run_eval(o, out);
    if (*verify) return detail::run_verify(o, out);
    if (*sweep) return detail::run_sweep(o, out);
    if (*search) return detail::run_search(o, out);
    if (*mod) return detail::run_moduli(o, out);
  } catch (const ValidationError& e) {
    err << "invalid input: " << e.what() << "\n";
    return kExitInputError;
  } catch (const SchemaError& e) {
    err << "invalid input: " << e.what() << "\n";
    return kExitInputError;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitInputError;
  }
  return kExitInputError;
}

}  // namespace pointdet::cli
