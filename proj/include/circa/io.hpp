#pragma once

#include <array>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "circa/common.hpp"
#include "circa/embedding.hpp"
#include "circa/flowfield.hpp"
#include "circa/matrix.hpp"

namespace circa {

using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;

/// Per-run options, file-level defaults overridable from the CLI.
struct ProblemOptions {
  Tolerances tol;
  bool include_outer = false;
  bool connected_only = false;
  bool center_flux = false;
  int brute_max_n = 12;
  std::optional<std::vector<std::pair<int, int>>> chords;  // 0-based after parse
};

/// Parsed problem file. Vertex ids are 1-based on disk (matching the usual
/// figure labeling) and 0-based everywhere in memory.
struct ProblemFile {
  int n = 0;
  std::optional<Matrix> transition;
  std::optional<std::vector<std::array<double, 3>>> flux_edges;  // u, v, flux (0-based u,v)
  std::optional<std::vector<std::array<double, 2>>> coords;
  std::optional<std::vector<std::vector<int>>> rotation;  // 0-based
  std::optional<OuterFaceHint> outer_face;
  ProblemOptions options;
};

namespace detail {

inline int parse_vertex_id(const json& j, int n, const std::string& what) {
  if (!j.is_number_integer())
    fail(ErrorKind::Validation, what + ": vertex id must be an integer");
  const int raw = j.get<int>();
  if (raw < 1 || raw > n)
    fail(ErrorKind::Validation,
         what + ": vertex id " + std::to_string(raw) + " out of range 1.." + std::to_string(n));
  return raw - 1;
}

inline void parse_tolerances(const json& j, Tolerances& tol) {
  if (j.contains("row")) tol.row = j.at("row").get<double>();
  if (j.contains("fixpoint")) tol.fixpoint = j.at("fixpoint").get<double>();
  if (j.contains("divergence")) tol.divergence = j.at("divergence").get<double>();
  if (j.contains("psi")) tol.psi = j.at("psi").get<double>();
  if (j.contains("flux_snap")) tol.flux_snap = j.at("flux_snap").get<double>();
}

}  // namespace detail

inline ProblemFile parse_problem(const json& doc) {
  if (!doc.is_object()) fail(ErrorKind::Validation, "problem file must be a JSON object");
  ProblemFile p;

  const bool has_tm = doc.contains("transition_matrix");
  const bool has_fe = doc.contains("flux_edges");
  if (has_tm == has_fe)
    fail(ErrorKind::Validation,
         "provide exactly one of transition_matrix / flux_edges");

  if (has_tm) {
    const auto& rows = doc.at("transition_matrix");
    if (!rows.is_array() || rows.empty())
      fail(ErrorKind::Validation, "transition_matrix must be a non-empty array of rows");
    p.n = static_cast<int>(rows.size());
    Matrix m(p.n, p.n);
    for (int i = 0; i < p.n; ++i) {
      const auto& row = rows[i];
      if (!row.is_array() || static_cast<int>(row.size()) != p.n)
        fail(ErrorKind::Validation,
             "transition_matrix row " + std::to_string(i + 1) + " must have " +
                 std::to_string(p.n) + " entries");
      for (int j = 0; j < p.n; ++j) m(i, j) = row[j].get<double>();
    }
    p.transition = std::move(m);
  } else {
    const auto& edges = doc.at("flux_edges");
    if (!edges.is_array() || edges.empty())
      fail(ErrorKind::Validation, "flux_edges must be a non-empty array of [u, v, flux]");
    int max_id = 0;
    for (const auto& e : edges) {
      if (!e.is_array() || e.size() != 3)
        fail(ErrorKind::Validation, "each flux edge must be [u, v, flux]");
      max_id = std::max({max_id, e[0].get<int>(), e[1].get<int>()});
    }
    p.n = doc.contains("n") ? doc.at("n").get<int>() : max_id;
    if (p.n < max_id)
      fail(ErrorKind::Validation, "declared n is smaller than the largest vertex id");
    std::vector<std::array<double, 3>> parsed;
    for (const auto& e : edges) {
      const int u = detail::parse_vertex_id(e[0], p.n, "flux_edges");
      const int v = detail::parse_vertex_id(e[1], p.n, "flux_edges");
      if (u == v) fail(ErrorKind::Validation, "flux edge joins a vertex to itself");
      parsed.push_back({static_cast<double>(u), static_cast<double>(v), e[2].get<double>()});
    }
    p.flux_edges = std::move(parsed);
  }

  const bool has_coords = doc.contains("coords");
  const bool has_rotation = doc.contains("rotation");
  if (!has_coords && !has_rotation)
    fail(ErrorKind::Validation, "provide coords and/or rotation for the embedding");

  if (has_coords) {
    const auto& arr = doc.at("coords");
    if (!arr.is_array() || static_cast<int>(arr.size()) != p.n)
      fail(ErrorKind::Validation,
           "coords must list one [x, y] per vertex (" + std::to_string(p.n) + " expected)");
    std::vector<std::array<double, 2>> coords;
    for (const auto& c : arr) {
      if (!c.is_array() || c.size() != 2)
        fail(ErrorKind::Validation, "each coordinate must be [x, y]");
      coords.push_back({c[0].get<double>(), c[1].get<double>()});
    }
    p.coords = std::move(coords);
  }

  if (has_rotation) {
    const auto& arr = doc.at("rotation");
    if (!arr.is_array() || static_cast<int>(arr.size()) != p.n)
      fail(ErrorKind::Validation,
           "rotation must list one neighbor cycle per vertex (" + std::to_string(p.n) +
               " expected)");
    std::vector<std::vector<int>> rot(p.n);
    for (int v = 0; v < p.n; ++v) {
      if (!arr[v].is_array())
        fail(ErrorKind::Validation, "rotation entries must be arrays of vertex ids");
      for (const auto& u : arr[v])
        rot[v].push_back(detail::parse_vertex_id(u, p.n, "rotation"));
    }
    p.rotation = std::move(rot);
  }

  if (doc.contains("outer_face")) {
    const auto& of = doc.at("outer_face");
    if (of.is_number_integer()) {
      p.outer_face = OuterFaceHint{of.get<int>()};
    } else if (of.is_array()) {
      std::vector<int> cycle;
      for (const auto& v : of) cycle.push_back(detail::parse_vertex_id(v, p.n, "outer_face"));
      p.outer_face = OuterFaceHint{std::move(cycle)};
    } else {
      fail(ErrorKind::Validation, "outer_face must be a face index or a vertex cycle");
    }
  }

  if (doc.contains("options")) {
    const auto& opt = doc.at("options");
    if (!opt.is_object()) fail(ErrorKind::Validation, "options must be an object");
    if (opt.contains("include_outer")) p.options.include_outer = opt.at("include_outer").get<bool>();
    if (opt.contains("connected_only")) p.options.connected_only = opt.at("connected_only").get<bool>();
    if (opt.contains("center_flux")) p.options.center_flux = opt.at("center_flux").get<bool>();
    if (opt.contains("brute_max_n")) p.options.brute_max_n = opt.at("brute_max_n").get<int>();
    if (opt.contains("tolerances")) detail::parse_tolerances(opt.at("tolerances"), p.options.tol);
    if (opt.contains("chords")) {
      std::vector<std::pair<int, int>> chords;
      for (const auto& c : opt.at("chords")) {
        if (!c.is_array() || c.size() != 2)
          fail(ErrorKind::Validation, "each chord must be [u, v]");
        const int u = detail::parse_vertex_id(c[0], p.n, "chords");
        const int v = detail::parse_vertex_id(c[1], p.n, "chords");
        chords.push_back({std::min(u, v), std::max(u, v)});
      }
      p.options.chords = std::move(chords);
    }
  }
  return p;
}

inline ProblemFile load_problem(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::Io, "cannot open " + path);
  json doc;
  try {
    in >> doc;
  } catch (const json::exception& e) {
    fail(ErrorKind::Parse, std::string("invalid JSON: ") + e.what());
  }
  return parse_problem(doc);
}

}  // namespace circa
