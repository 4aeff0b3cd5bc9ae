#pragma once

// Command-line front end. Kept in a header so the tests can drive run_cli()
// in-process with captured streams.
//
// Exit codes: 0 success, 1 verification failure, 2 usage error,
// 3 input-format error, 4 size-cap error.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <regex>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "pstlab/pstlab.hpp"

namespace pstlab::cli {

enum ExitCode : int {
  kSuccess = 0,
  kVerificationFailure = 1,
  kUsage = 2,
  kInputFormat = 3,
  kResource = 4,
};

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// "pi", "pi/2", "-3pi/4", "3*pi/4", "2pi" or a decimal. Multiples of pi are
// formed as coefficient * pi / denominator so pi/2 is exactly half of pi.
inline double parse_time(const std::string& text) {
  static const std::regex symbolic(R"(^\s*([+-]?)(\d+(?:\.\d*)?)?\s*\*?\s*pi\s*(?:/\s*(\d+(?:\.\d*)?))?\s*$)");
  std::smatch match;
  if (std::regex_match(text, match, symbolic)) {
    const double sign = match[1] == "-" ? -1.0 : 1.0;
    const double coefficient = match[2].matched ? std::stod(match[2]) : 1.0;
    const double denominator = match[3].matched ? std::stod(match[3]) : 1.0;
    if (denominator == 0.0) throw UsageError("time '" + text + "' divides by zero");
    return sign * coefficient * kPi / denominator;
  }
  std::size_t used = 0;
  double value = 0.0;
  try {
    value = std::stod(text, &used);
  } catch (const std::exception&) {
    throw UsageError("cannot parse time '" + text + "'");
  }
  while (used < text.size() && std::isspace(static_cast<unsigned char>(text[used]))) ++used;
  if (used != text.size() || !std::isfinite(value)) throw UsageError("cannot parse time '" + text + "'");
  return value;
}

struct Range {
  std::size_t lo = 0;
  std::size_t hi = 0;
};

// "4..8" or "4".
inline Range parse_range(const std::string& text) {
  static const std::regex pattern(R"(^\s*(\d+)\s*(?:\.\.\s*(\d+))?\s*$)");
  std::smatch match;
  if (!std::regex_match(text, match, pattern)) throw UsageError("invalid range '" + text + "'");
  Range r;
  r.lo = std::stoul(match[1]);
  r.hi = match[2].matched ? std::stoul(match[2]) : r.lo;
  if (r.hi < r.lo) throw UsageError("empty range '" + text + "' (upper bound below lower bound)");
  return r;
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot open '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

inline void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw UsageError("cannot write '" + path + "'");
  out << text;
}

inline std::string dump(const Json& j) { return j.dump(2) + "\n"; }

struct Config {
  std::string kind;
  std::optional<std::size_t> n;
  std::optional<std::size_t> k;
  std::string t = "pi/2";
  double tol = kPstTol;
  std::size_t workers = 1;
  std::optional<std::size_t> cap;
  std::string in;
  std::string out;
  std::string partition;
  std::string family = "hc-path";
  std::string n_range;
  std::string k_range;
  bool exploratory = false;
};

inline SizeLimits limits_for(const Config& cfg) {
  SizeLimits limits = SizeLimits::from_env();
  if (cfg.cap) limits.max_vertices = *cfg.cap;
  return limits;
}

inline std::size_t require(const std::optional<std::size_t>& value, const char* flag) {
  if (!value) throw UsageError(std::string("missing ") + flag);
  return *value;
}

inline int cmd_build(const Config& cfg, std::ostream& out, std::ostream& err) {
  const SizeLimits limits = limits_for(cfg);
  const std::size_t n = require(cfg.n, "--n");
  WeightedGraph g;
  std::vector<OccupationLabel> legend;
  if (cfg.kind == "path") {
    g = simple_path(n, limits);
  } else if (cfg.kind == "weighted-path") {
    g = weighted_path(n, limits);
  } else if (cfg.kind == "hypercube") {
    g = hypercube(static_cast<int>(n), limits);
  } else if (cfg.kind == "cycle") {
    g = cycle(n, limits);
  } else if (cfg.kind == "cartesian-power" || cfg.kind == "symmetric-power") {
    const std::size_t k = require(cfg.k, "--k");
    const WeightedGraph base = cfg.in.empty() ? weighted_path(n, limits) : load_graph(read_file(cfg.in));
    if (!cfg.in.empty() && base.size() != n) throw UsageError("--n does not match the --in graph");
    if (cfg.kind == "cartesian-power") {
      g = cartesian_power(base, k, limits);
      for (std::size_t i = 0; i < g.size(); ++i) legend.push_back(label_of_index(i, n, k));
    } else {
      g = symmetric_power(base, k, {.exploratory = cfg.exploratory}, limits);
      legend = ascending_labels(n, k);
    }
  } else {
    throw UsageError("unknown graph kind '" + cfg.kind + "'");
  }

  std::ostream& legend_stream = cfg.out.empty() ? err : out;
  if (cfg.out.empty()) {
    out << save_graph(g);
  } else {
    write_file(cfg.out, save_graph(g));
  }
  for (std::size_t i = 0; i < legend.size(); ++i) legend_stream << "vertex " << i + 1 << " = " << legend[i] << '\n';
  return kSuccess;
}

inline int cmd_spectrum(const Config& cfg, std::ostream& out) {
  const auto g = load_graph(read_file(cfg.in));
  const auto spec = eigh(g);
  Json j = {{"n", g.size()}, {"eigenvalues", to_std(spec.eigenvalues)}, {"sweeps", spec.sweeps}};
  if (g.size() >= 2) {
    try {
      const auto ratio = ratio_condition(to_std(spec.eigenvalues));
      j["ratio_condition"] = {{"holds", ratio.holds}, {"heuristic", ratio.heuristic},
                              {"max_snap_error", ratio.max_snap_error}};
    } catch (const PreconditionError&) {
      j["ratio_condition"] = nullptr;
    }
  }
  out << dump(j);
  return kSuccess;
}

inline int cmd_pst(const Config& cfg, std::ostream& out) {
  const auto g = load_graph(read_file(cfg.in));
  const double t = parse_time(cfg.t);
  Json pairs = Json::array();
  for (const auto& p : find_pst_pairs(eigh(g), t, cfg.tol)) {
    pairs.push_back({{"u", p.u + 1}, {"v", p.v + 1}, {"phase", complex_to_json(p.phase)}, {"modulus", std::abs(p.phase)}});
  }
  out << dump({{"t", t}, {"tol", cfg.tol}, {"pairs", std::move(pairs)}});
  return kSuccess;
}

inline int cmd_periodic(const Config& cfg, std::ostream& out) {
  const auto g = load_graph(read_file(cfg.in));
  const double t = parse_time(cfg.t);
  const auto phase = is_periodic(eigh(g), t, cfg.tol);
  out << dump({{"t", t}, {"tol", cfg.tol}, {"periodic", phase.has_value()},
               {"phase", phase ? complex_to_json(*phase) : Json(nullptr)}});
  return kSuccess;
}

inline int cmd_quotient(const Config& cfg, std::ostream& out, std::ostream& err) {
  const auto g = load_graph(read_file(cfg.in));
  if (cfg.partition.empty()) throw UsageError("missing --partition");
  const auto p = load_partition(read_file(cfg.partition));
  if (p.vertex_count() != g.size()) throw ParseError("partition covers " + std::to_string(p.vertex_count()) +
                                                     " vertices, graph has " + std::to_string(g.size()));
  const auto report = check_equitable(g, p);
  Json j = {{"equitable", report.equitable},
            {"max_spread", report.max_spread},
            {"worst", {{"cell", report.worst_cell + 1},
                       {"target_cell", report.worst_target_cell + 1},
                       {"vertex", report.worst_vertex + 1}}}};
  Json b = Json::array();
  for (Eigen::Index i = 0; i < report.b.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index c = 0; c < report.b.cols(); ++c) row.push_back(report.b(i, c));
    b.push_back(std::move(row));
  }
  j["b"] = std::move(b);
  if (!report.equitable) {
    err << "partition is not equitable: cell " << report.worst_cell + 1 << ", vertex " << report.worst_vertex + 1
        << ", b-spread " << format_double(report.max_spread) << " toward cell " << report.worst_target_cell + 1
        << '\n';
    out << dump(j);
    return kVerificationFailure;
  }
  const auto collapsed = quotient(g, p);
  if (cfg.out.empty()) {
    out << save_graph(collapsed);
    err << dump(j);
  } else {
    write_file(cfg.out, save_graph(collapsed));
    out << dump(j);
  }
  return kSuccess;
}

inline void print_summary(const std::vector<VerificationReport>& reports, std::ostream& out) {
  out << std::left << std::setw(10) << "family" << std::setw(5) << "n" << std::setw(5) << "k" << std::setw(8)
      << "result" << "failed checks\n";
  for (const auto& r : reports) {
    out << std::setw(10) << r.key.family << std::setw(5) << r.key.n << std::setw(5) << r.key.k << std::setw(8)
        << (r.passed() ? "PASS" : "FAIL");
    bool first = true;
    for (const auto& c : r.checks) {
      if (c.pass) continue;
      out << (first ? "" : ", ") << c.name << '=' << format_double(c.value);
      first = false;
    }
    if (r.error) out << " [" << *r.error << ']';
    out << '\n';
  }
}

inline int cmd_verify(const Config& cfg, std::ostream& out) {
  if (cfg.n_range.empty() || cfg.k_range.empty()) throw UsageError("verify needs --n and --k ranges");
  const Range n = parse_range(cfg.n_range);
  const Range k = parse_range(cfg.k_range);
  if (cfg.workers == 0) throw UsageError("--workers must be at least 1");
  const auto reports = sweep(case_grid(cfg.family, n.lo, n.hi, k.lo, k.hi), cfg.workers, limits_for(cfg));
  if (!cfg.out.empty()) write_file(cfg.out, dump(reports_to_json(reports)));
  print_summary(reports, out);
  bool capped = false;
  for (const auto& r : reports) {
    if (r.passed()) continue;
    if (!r.resource_limited) return kVerificationFailure;
    capped = true;
  }
  return capped ? kResource : kSuccess;
}

inline int cmd_probe(const Config& cfg, std::ostream& out) {
  const auto g = load_graph(read_file(cfg.in));
  const std::size_t k = require(cfg.k, "--k");
  const auto report = conjecture_probe(g, k, cfg.tol, limits_for(cfg));
  const std::string text = dump(probe_to_json(report));
  if (cfg.out.empty()) {
    out << text;
  } else {
    write_file(cfg.out, text);
  }
  return kSuccess;
}

inline int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"pstlab: perfect state transfer of hard-core bosons on weighted paths"};
  app.require_subcommand(1);
  Config cfg;
  app.add_option("--cap", cfg.cap, "vertex cap for constructed graphs (env PSTLAB_CAP)");

  auto* build = app.add_subcommand("build", "construct a graph and write it as a graph file");
  build->add_option("kind", cfg.kind, "path | weighted-path | hypercube | cycle | cartesian-power | symmetric-power")
      ->required();
  build->add_option("--n", cfg.n, "vertex count (dimension for hypercube)");
  build->add_option("--k", cfg.k, "particle count for powers");
  build->add_option("--in", cfg.in, "base graph for powers (default: weighted path on --n vertices)");
  build->add_option("--out", cfg.out, "output graph file (default: standard output)");
  build->add_flag("--exploratory", cfg.exploratory, "allow symmetric powers of non-path graphs");

  auto* spectrum = app.add_subcommand("spectrum", "eigenvalues and ratio condition of a graph");
  spectrum->add_option("--in", cfg.in, "graph file")->required();

  auto* pst = app.add_subcommand("pst", "vertex pairs with perfect state transfer at time t");
  pst->add_option("--in", cfg.in, "graph file")->required();
  pst->add_option("--t", cfg.t, "time, e.g. pi/2 or 0.7");
  pst->add_option("--tol", cfg.tol, "modulus tolerance");

  auto* periodic = app.add_subcommand("periodic", "is U(t) a multiple of the identity");
  periodic->add_option("--in", cfg.in, "graph file")->required();
  periodic->add_option("--t", cfg.t, "time");
  periodic->add_option("--tol", cfg.tol, "entrywise tolerance");

  auto* quotient_cmd = app.add_subcommand("quotient", "collapse a graph by an equitable partition");
  quotient_cmd->add_option("--in", cfg.in, "graph file")->required();
  quotient_cmd->add_option("--partition", cfg.partition, "partition file")->required();
  quotient_cmd->add_option("--out", cfg.out, "output graph file (default: standard output)");

  auto* verify = app.add_subcommand("verify", "run the hard-core PST verifiers over a grid of cases");
  verify->add_option("--family", cfg.family, "case family (hc-path)");
  verify->add_option("--n", cfg.n_range, "range a..b")->required();
  verify->add_option("--k", cfg.k_range, "range a..b")->required();
  verify->add_option("--out", cfg.out, "JSON report file");
  verify->add_option("--workers", cfg.workers, "parallel workers");

  auto* probe = app.add_subcommand("probe", "search a graph's hard-core symmetric power for PST");
  probe->add_option("--in", cfg.in, "graph file")->required();
  probe->add_option("--k", cfg.k, "particle count")->required();
  probe->add_option("--tol", cfg.tol, "modulus tolerance");
  probe->add_option("--out", cfg.out, "JSON output file (default: standard output)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kSuccess : kUsage;
  }

  try {
    if (*build) return cmd_build(cfg, out, err);
    if (*spectrum) return cmd_spectrum(cfg, out);
    if (*pst) return cmd_pst(cfg, out);
    if (*periodic) return cmd_periodic(cfg, out);
    if (*quotient_cmd) return cmd_quotient(cfg, out, err);
    if (*verify) return cmd_verify(cfg, out);
    if (*probe) return cmd_probe(cfg, out);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kUsage;
  } catch (const ParseError& e) {
    err << "input error: " << e.what() << '\n';
    return kInputFormat;
  } catch (const AsymmetryError& e) {
    err << "input error: " << e.what() << '\n';
    return kInputFormat;
  } catch (const NonFiniteError& e) {
    err << "input error: " << e.what() << '\n';
    return kInputFormat;
  } catch (const ResourceError& e) {
    err << "size cap: " << e.what() << '\n';
    return kResource;
  } catch (const ContractViolation& e) {
    err << "verification failure: " << e.what() << '\n';
    return kVerificationFailure;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }
  return kUsage;
}

}  // namespace pstlab::cli
