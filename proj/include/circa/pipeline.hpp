#pragma once

#include <algorithm>
#include <chrono>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "circa/common.hpp"
#include "circa/embedding.hpp"
#include "circa/extract.hpp"
#include "circa/flowfield.hpp"
#include "circa/io.hpp"
#include "circa/maxflow.hpp"
#include "circa/partition.hpp"
#include "circa/potential.hpp"

namespace circa {

struct AnalyzeFlags {
  bool brute_check = false;
  bool include_outer = false;
  bool center_flux = false;
  bool timing = false;
  std::optional<double> tol_override;  // uniform epsilon for row/fix/div/psi
};

namespace detail {

inline ordered_json faces_to_json(const PlanarEmbedding& e) {
  ordered_json faces = ordered_json::array();
  for (int fi = 0; fi < e.face_count(); ++fi) {
    ordered_json f;
    f["id"] = fi;
    ordered_json boundary = ordered_json::array();
    for (int v : e.faces[fi].boundary) boundary.push_back(v + 1);
    f["boundary"] = boundary;
    f["outer"] = fi == 0;
    faces.push_back(f);
  }
  return faces;
}

inline ordered_json edge_to_json(int u, int v) {
  return ordered_json::array({u + 1, v + 1});
}

inline ordered_json partition_to_json(const ThreePartition& p) {
  ordered_json out;
  std::string labels;
  for (PartLabel l : p.labels) labels.push_back(to_char(l));
  out["labels"] = labels;
  ordered_json parts;
  const auto part_lists = p.parts();
  for (int k = 0; k < 3; ++k) {
    ordered_json lst = ordered_json::array();
    for (int v : part_lists[k]) lst.push_back(v + 1);
    parts[std::string(1, static_cast<char>('A' + k))] = lst;
  }
  out["parts"] = parts;
  return out;
}

inline ordered_json circulation_to_json(const CirculationReport& r) {
  ordered_json out;
  out["circulation"] = r.circulation;
  out["pairwise_fluxes"] = ordered_json::array({r.pairwise[0], r.pairwise[1], r.pairwise[2]});
  ordered_json sizes = ordered_json::array();
  ordered_json density = ordered_json::array();
  for (int k = 0; k < 3; ++k) {
    sizes.push_back(r.boundaries[k].edges.size());
    if (r.density_defined[k])
      density.push_back(r.density[k]);
    else
      density.push_back(nullptr);
  }
  out["boundary_sizes"] = sizes;
  out["density_fluxes"] = density;
  if (r.f_min_defined)
    out["f_min"] = r.f_min;
  else
    out["f_min"] = nullptr;
  return out;
}

inline bool part_connected_in_support(const std::vector<int>& part, const FlowGraph& g) {
  if (part.empty()) return false;
  std::vector<char> in_part(g.n, 0);
  for (int v : part) in_part[v] = 1;
  std::vector<std::vector<int>> adj(g.n);
  for (const auto& e : g.edges)
    if (!e.chord && in_part[e.u] && in_part[e.v]) {
      adj[e.u].push_back(e.v);
      adj[e.v].push_back(e.u);
    }
  std::vector<char> seen(g.n, 0);
  std::vector<int> stack{part[0]};
  seen[part[0]] = 1;
  size_t count = 1;
  while (!stack.empty()) {
    int u = stack.back();
    stack.pop_back();
    for (int v : adj[u])
      if (!seen[v]) {
        seen[v] = 1;
        ++count;
        stack.push_back(v);
      }
  }
  return count == part.size();
}

}  // namespace detail

/// Builds the net-flux field a problem file describes: either the stationary
/// currents of its transition matrix or its literal flux edges, optionally
/// centered, always snapped and checked divergence-free.
inline NetFluxField build_flux(const ProblemFile& problem, const ProblemOptions& opts,
                               std::vector<double>* stationary_out = nullptr) {
  const Tolerances& tol = opts.tol;
  NetFluxField flux = NetFluxField::zero(problem.n);
  if (problem.transition) {
    TransitionMatrix tm = TransitionMatrix::validated(*problem.transition, tol);
    StationaryDistribution pi = stationary_distribution(tm, tol.fixpoint);
    ProbabilityCurrent current = probability_current(tm, pi);
    flux = net_flux(current);
    if (stationary_out) *stationary_out = pi.probabilities;
  } else {
    for (const auto& e : *problem.flux_edges) {
      const int u = static_cast<int>(e[0]);
      const int v = static_cast<int>(e[1]);
      if (flux.at(u, v) != 0.0)
        fail(ErrorKind::Validation, "duplicate flux edge " + std::to_string(u + 1) + "-" +
                                        std::to_string(v + 1));
      flux.set_pair(u, v, e[2]);
    }
  }
  if (opts.center_flux) flux = flux.centered();
  flux.snap_small(tol.flux_snap);
  flux.require_divergence_free(tol.divergence);
  if (!problem.transition) flux.set_markov_normalized(flux.total_positive() <= 1.0 + tol.row);
  return flux;
}

/// Embeds the flow graph from whatever the problem file provides; a rotation
/// system (the exact path) wins over coordinates when both are present.
inline PlanarEmbedding build_embedding(const ProblemFile& problem, const FlowGraph& graph,
                                       std::string* source_out = nullptr) {
  if (problem.rotation) {
    if (!problem.outer_face)
      fail(ErrorKind::Validation, "rotation input requires an outer_face hint");
    if (source_out) *source_out = "rotation";
    return embed_from_rotation(graph, *problem.rotation, *problem.outer_face);
  }
  if (source_out) *source_out = "coords";
  return embed_from_coords(graph, *problem.coords);
}

/// Everything the geometric half of the pipeline produces for one
/// triangulation choice.
struct PipelineProducts {
  TriangulatedGraph tri;
  DualGraph d;
  CurlPotential psi;
  std::optional<ExtractionResult> extraction;  // absent for zero circulation
  bool outer_retried = false;  // extraction needed the fully triangulated dual
  bool dual_three_connected = false;
};

/// Triangulates, builds the dual, solves the potential, and extracts the
/// partition. A dual that is 3-edge-connected can still lack three
/// internally disjoint paths between the extrema (edge-disjoint triples may
/// then cut the graph into the wrong number of pieces); triangulating the
/// outer face makes the dual cubic and 3-connected, so that is retried
/// automatically before giving up.
inline PipelineProducts run_extraction_pipeline(const NetFluxField& flux, const FlowGraph& graph,
                                                const PlanarEmbedding& embedding,
                                                const ProblemOptions& opts) {
  auto attempt = [&](bool include_outer) {
    PipelineProducts p;
    p.tri = triangulate(graph, embedding, include_outer, opts.chords ? &*opts.chords : nullptr);
    p.d = dual(p.tri.embedding, p.tri.graph);
    p.dual_three_connected = dual_three_edge_connected(p.d);
    if (!p.dual_three_connected)
      fail(ErrorKind::InsufficientConnectivity,
           "dual graph is not 3-edge-connected; triangulate the outer face", 0);
    p.psi = compute_psi(p.tri, p.d, opts.tol);
    if (!p.psi.zero_circulation)
      p.extraction = extract_max_circulation_partition(flux, p.tri, p.d, p.psi, opts.tol);
    return p;
  };
  try {
    return attempt(opts.include_outer);
  } catch (const Error& e) {
    const bool retryable = e.kind() == ErrorKind::BadComponentCount ||
                           e.kind() == ErrorKind::InsufficientConnectivity;
    if (!retryable || opts.include_outer) throw;
    log::info("extraction failed on the open outer face; retrying fully triangulated");
    PipelineProducts p = attempt(true);
    p.outer_retried = true;
    return p;
  }
}

/// Runs the full chain: flux field -> embedding -> triangulation -> dual ->
/// curl potential -> extrema -> partition extraction -> verification, and
/// assembles the JSON report. Key order and float formatting are fixed, so
/// identical inputs give byte-identical reports.
inline ordered_json analyze(const ProblemFile& problem, const AnalyzeFlags& flags = {}) {
  const auto t_start = std::chrono::steady_clock::now();

  ProblemOptions opts = problem.options;
  opts.include_outer = opts.include_outer || flags.include_outer;
  opts.center_flux = opts.center_flux || flags.center_flux;
  if (flags.tol_override) opts.tol.set_uniform(*flags.tol_override);
  const Tolerances& tol = opts.tol;

  ordered_json report;
  report["input"] = {{"n", problem.n},
                     {"kind", problem.transition ? "transition_matrix" : "flux_edges"}};

  // --- flow field ---
  std::vector<double> stationary;
  NetFluxField flux = build_flux(problem, opts, &stationary);
  if (problem.transition) report["stationary"] = stationary;

  {
    ordered_json fj;
    ordered_json edges = ordered_json::array();
    for (const auto& e : flux.support())
      edges.push_back(ordered_json::array({e.u + 1, e.v + 1, e.flux}));
    fj["edges"] = edges;
    fj["markov_normalized"] = flux.markov_normalized();
    fj["total_positive_flux"] = flux.total_positive();
    fj["max_abs_divergence"] = flux.max_abs_divergence();
    report["flux"] = fj;
  }

  FlowGraph graph = FlowGraph::from_flux(flux);
  if (graph.edges.empty()) {
    // reversible input: no net flux anywhere, nothing to embed
    report["zero_circulation"] = true;
    report["max_circulation"] = 0.0;
    if (flags.timing)
      report["timing_ms"] =
          std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t_start)
              .count();
    return report;
  }

  // --- embedding ---
  std::string source;
  PlanarEmbedding embedding = build_embedding(problem, graph, &source);
  {
    ordered_json ej;
    ej["source"] = source;
    ej["face_count"] = embedding.face_count();
    ej["faces"] = detail::faces_to_json(embedding);
    report["embedding"] = ej;
  }

  // --- triangulation, dual, potential, extraction (with outer-face retry) ---
  PipelineProducts p = run_extraction_pipeline(flux, graph, embedding, opts);
  {
    ordered_json tj;
    tj["include_outer"] = opts.include_outer || p.outer_retried;
    tj["outer_retried"] = p.outer_retried;
    ordered_json chords = ordered_json::array();
    for (auto [u, v] : p.tri.chords) chords.push_back(detail::edge_to_json(u, v));
    tj["chords"] = chords;
    tj["face_count"] = p.tri.embedding.face_count();
    tj["faces"] = detail::faces_to_json(p.tri.embedding);
    report["triangulation"] = tj;
    report["dual"] = {{"vertex_count", p.d.vertex_count},
                      {"edge_count", p.d.edges.size()},
                      {"three_edge_connected", p.dual_three_connected}};
  }

  {
    ordered_json pj;
    for (int fi = 0; fi < static_cast<int>(p.psi.values.size()); ++fi)
      pj[std::to_string(fi)] = p.psi.values[fi];
    report["psi"] = pj;
    report["extrema"] = {{"face_min", p.psi.face_min},
                         {"face_max", p.psi.face_max},
                         {"psi_min", p.psi.psi_min()},
                         {"psi_max", p.psi.psi_max()}};
  }
  report["max_circulation"] = max_circulation(p.psi);
  report["zero_circulation"] = p.psi.zero_circulation;

  if (p.extraction) {
    const ExtractionResult& ex = *p.extraction;
    ordered_json pj = detail::partition_to_json(ex.partition);
    pj["disjointness"] = ex.paths.vertex_disjoint ? "vertex-disjoint" : "edge-disjoint-only";
    pj["attempts"] = ex.attempts;
    const auto parts = ex.partition.parts();
    bool connected_in_support = true;
    for (const auto& part : parts)
      connected_in_support = connected_in_support && detail::part_connected_in_support(part, graph);
    pj["parts_connected_in_flux_support"] = connected_in_support;
    ordered_json paths = ordered_json::array();
    for (const auto& path : ex.paths.dual_paths) {
      ordered_json crossings = ordered_json::array();
      for (int idx : path)
        crossings.push_back(detail::edge_to_json(p.d.edges[idx].u, p.d.edges[idx].v));
      paths.push_back(crossings);
    }
    report["partition"] = pj;
    report["paths"] = paths;
    ordered_json vj = detail::circulation_to_json(ex.report);
    vj["matches_psi_gap"] = true;
    report["verification"] = vj;
  }

  // --- optional brute-force cross-check ---
  if (flags.brute_check) {
    std::vector<std::pair<int, int>> support;
    for (const auto& e : graph.edges) support.push_back({e.u, e.v});
    BruteForceResult unrestricted = brute_force_cmax(flux, false, support, opts.brute_max_n);
    BruteForceResult connected = brute_force_cmax(flux, true, support, opts.brute_max_n);
    ordered_json bj;
    bj["count_examined"] = unrestricted.count_examined;
    bj["cmax"] = unrestricted.value;
    bj["cmax_partition"] = detail::partition_to_json(unrestricted.best);
    bj["cmax_connected"] = connected.value;
    bj["cmax_connected_partition"] = detail::partition_to_json(connected.best);
    report["brute_force"] = bj;
  }

  {
    ordered_json oj;
    oj["include_outer"] = opts.include_outer;
    oj["center_flux"] = opts.center_flux;
    oj["tolerances"] = {{"row", tol.row},
                        {"fixpoint", tol.fixpoint},
                        {"divergence", tol.divergence},
                        {"psi", tol.psi},
                        {"flux_snap", tol.flux_snap}};
    report["options"] = oj;
  }
  if (flags.timing)
    report["timing_ms"] =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t_start)
            .count();
  return report;
}

/// `brute-force` subcommand body: exhaustive maximum over 3-partitions.
inline ordered_json brute_force_report(const ProblemFile& problem, bool connected_only,
                                       int max_n) {
  ProblemOptions opts = problem.options;
  const Tolerances& tol = opts.tol;
  NetFluxField flux = build_flux(problem, opts);

  std::vector<std::pair<int, int>> support;
  for (const auto& e : flux.support()) support.push_back({e.u, e.v});
  BruteForceResult r = brute_force_cmax(flux, connected_only, support, max_n);
  ordered_json out;
  out["n"] = problem.n;
  out["connected_only"] = connected_only;
  out["count_examined"] = r.count_examined;
  out["cmax"] = r.value;
  out["best_partition"] = detail::partition_to_json(r.best);
  ordered_json vj = detail::circulation_to_json(circulation(flux, r.best, tol));
  out["report"] = vj;
  return out;
}

}  // namespace circa
