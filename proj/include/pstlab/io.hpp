#pragma once

// Text formats. All vertex numbers in files are 1-based.
//
//   graph:     {"n": <int>, "edges": [[u, v, w], ...]}
//   partition: {"n": <int>, "cells": [[v, ...], ...]}
//   report:    {"case": {"family", "n", "k"}, "checks": [{"name", "anchor",
//               "pass", "value", "tol"}], "gamma_predicted": [re, im],
//               "gamma_measured": [re, im], "runtime_s"}
//
// Graph edges: u == v is a self-loop; an unordered pair may appear once.
// Zero-weight entries are not written.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "json.hpp"
#include "pstlab/graph.hpp"
#include "pstlab/partition.hpp"
#include "pstlab/verify.hpp"

namespace pstlab {

using Json = nlohmann::json;

// 17 significant digits, enough to round-trip every double.
inline std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

namespace detail {

inline std::size_t line_of_offset(std::string_view text, std::size_t offset) {
  offset = std::min(offset, text.size());
  return 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(offset), '\n'));
}

inline Json parse_document(std::string_view text) {
  try {
    return Json::parse(text.begin(), text.end());
  } catch (const Json::parse_error& e) {
    // e.byte is 1-based and points just past the offending character.
    throw ParseError(e.what(), line_of_offset(text, e.byte == 0 ? 0 : e.byte - 1));
  } catch (const Json::exception& e) {
    throw ParseError(e.what());
  }
}

inline std::size_t read_size(const Json& doc, const char* key) {
  if (!doc.is_object() || !doc.contains(key)) throw ParseError(std::string("missing \"") + key + "\"");
  const Json& value = doc.at(key);
  if (!value.is_number_integer() || value.get<long long>() < 1) {
    throw ParseError(std::string("\"") + key + "\" must be a positive integer");
  }
  return value.get<std::size_t>();
}

inline Vertex read_vertex(const Json& value, std::size_t n, const std::string& where) {
  if (!value.is_number_integer()) throw ParseError(where + ": vertex must be an integer");
  const long long v = value.get<long long>();
  if (v < 1 || static_cast<std::size_t>(v) > n) {
    throw ParseError(where + ": vertex " + std::to_string(v) + " outside [1, " + std::to_string(n) + "]");
  }
  return static_cast<Vertex>(v - 1);
}

}  // namespace detail

inline WeightedGraph load_graph(std::string_view text) {
  const Json doc = detail::parse_document(text);
  const std::size_t n = detail::read_size(doc, "n");
  if (!doc.contains("edges") || !doc.at("edges").is_array()) throw ParseError("missing \"edges\" array");

  const auto size = static_cast<Eigen::Index>(n);
  Matrix a = Matrix::Zero(size, size);
  std::vector<std::vector<bool>> seen(n, std::vector<bool>(n, false));
  std::size_t index = 0;
  for (const Json& edge : doc.at("edges")) {
    const std::string where = "edge " + std::to_string(++index);
    if (!edge.is_array() || edge.size() != 3) throw ParseError(where + ": expected [u, v, w]");
    const Vertex u = detail::read_vertex(edge[0], n, where);
    const Vertex v = detail::read_vertex(edge[1], n, where);
    if (!edge[2].is_number()) throw ParseError(where + ": weight must be a number");
    const double w = edge[2].get<double>();
    if (!std::isfinite(w)) throw NonFiniteError(where + ": non-finite weight");
    const auto ui = static_cast<Eigen::Index>(u);
    const auto vi = static_cast<Eigen::Index>(v);
    if (seen[u][v]) {
      if (a(ui, vi) != w) {
        throw AsymmetryError(where + ": weight for (" + std::to_string(u + 1) + ", " + std::to_string(v + 1) +
                             ") conflicts with an earlier entry");
      }
      throw ParseError(where + ": duplicate edge (" + std::to_string(u + 1) + ", " + std::to_string(v + 1) + ")");
    }
    seen[u][v] = seen[v][u] = true;
    a(ui, vi) = w;
    a(vi, ui) = w;
  }
  return WeightedGraph::from_matrix(std::move(a));
}

inline std::string save_graph(const WeightedGraph& g) {
  std::ostringstream out;
  out << "{\"n\": " << g.size() << ", \"edges\": [";
  bool first = true;
  for (Vertex u = 0; u < g.size(); ++u) {
    for (Vertex v = u; v < g.size(); ++v) {
      const double w = g.weight(u, v);
      if (w == 0.0) continue;
      out << (first ? "\n  " : ",\n  ") << '[' << u + 1 << ", " << v + 1 << ", " << format_double(w) << ']';
      first = false;
    }
  }
  out << (first ? "]}\n" : "\n]}\n");
  return out.str();
}

inline Partition load_partition(std::string_view text) {
  const Json doc = detail::parse_document(text);
  const std::size_t n = detail::read_size(doc, "n");
  if (!doc.contains("cells") || !doc.at("cells").is_array()) throw ParseError("missing \"cells\" array");
  std::vector<std::vector<Vertex>> cells;
  std::size_t index = 0;
  for (const Json& cell : doc.at("cells")) {
    const std::string where = "cell " + std::to_string(++index);
    if (!cell.is_array()) throw ParseError(where + ": expected an array of vertices");
    std::vector<Vertex> members;
    for (const Json& v : cell) members.push_back(detail::read_vertex(v, n, where));
    cells.push_back(std::move(members));
  }
  try {
    return Partition::from_cells(n, std::move(cells));
  } catch (const PreconditionError& e) {
    throw ParseError(e.what());
  }
}

inline std::string save_partition(const Partition& p) {
  std::ostringstream out;
  out << "{\"n\": " << p.vertex_count() << ", \"cells\": [";
  for (std::size_t c = 0; c < p.cell_count(); ++c) {
    out << (c == 0 ? "" : ", ") << '[';
    for (std::size_t i = 0; i < p.cell(c).size(); ++i) out << (i == 0 ? "" : ", ") << p.cell(c)[i] + 1;
    out << ']';
  }
  out << "]}\n";
  return out.str();
}

inline Json complex_to_json(Complex z) { return Json::array({z.real(), z.imag()}); }

inline Json report_to_json(const VerificationReport& r) {
  Json checks = Json::array();
  for (const auto& c : r.checks) {
    checks.push_back({{"name", c.name}, {"anchor", c.anchor}, {"pass", c.pass}, {"value", c.value}, {"tol", c.tol}});
  }
  Json out = {{"case", {{"family", r.key.family}, {"n", r.key.n}, {"k", r.key.k}}},
              {"checks", std::move(checks)},
              {"gamma_predicted", complex_to_json(r.gamma_predicted)},
              {"gamma_measured", complex_to_json(r.gamma_measured)},
              {"runtime_s", r.runtime_s}};
  if (r.error) out["error"] = *r.error;
  return out;
}

inline Json reports_to_json(const std::vector<VerificationReport>& reports) {
  Json out = Json::array();
  for (const auto& r : reports) out.push_back(report_to_json(r));
  return out;
}

inline Json probe_to_json(const ProbeReport& r) {
  Json out = {{"n", r.n},
              {"k", r.k},
              {"single_particle_pst_times", r.single_particle_pst_times},
              {"best_modulus", r.best_modulus},
              {"best_time", r.best_time},
              {"best_pair", {r.best_u + 1, r.best_v + 1}},
              {"unit_transfer_found", r.unit_transfer_found},
              {"expected_components", r.expected_components},
              {"notes", r.notes}};
  out["component_count"] = r.component_count ? Json(*r.component_count) : Json(nullptr);
  return out;
}

}  // namespace pstlab
