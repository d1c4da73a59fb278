#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <set>
#include <string>
#include <vector>

#include "circa/common.hpp"
#include "circa/embedding.hpp"
#include "circa/maxflow.hpp"
#include "circa/partition.hpp"
#include "circa/potential.hpp"

namespace circa {

/// Three edge-disjoint dual paths between the potential extrema. Cutting the
/// primal edges they cross carves the maximal-circulation 3-partition.
struct PathTriple {
  int s = 0, t = 0;                             // dual endpoints (face ids)
  std::array<std::vector<int>, 3> dual_paths;   // dual edge ids per path
  bool vertex_disjoint = false;

  /// Union of crossed primal edges, deduplicated, ascending.
  std::vector<std::pair<int, int>> crossed_edges(const DualGraph& d) const {
    std::set<std::pair<int, int>> out;
    for (const auto& path : dual_paths)
      for (int idx : path) out.insert({d.edges[idx].u, d.edges[idx].v});
    return {out.begin(), out.end()};
  }
};

inline PathTriple three_disjoint_paths(const DualGraph& d, int s, int t, int scan_offset = 0) {
  if (s == t) fail(ErrorKind::Validation, "potential extrema coincide; no paths to extract");
  DisjointPathsResult r = dual_disjoint_paths(d, s, t, 3, scan_offset);
  if (r.flow < 3)
    fail(ErrorKind::InsufficientConnectivity,
         "only " + std::to_string(r.flow) +
             " edge-disjoint dual paths exist; triangulate the outer face and retry",
         r.flow);

  PathTriple triple;
  triple.s = s;
  triple.t = t;
  triple.vertex_disjoint = r.vertex_disjoint;
  for (int k = 0; k < 3; ++k) triple.dual_paths[k] = std::move(r.paths[k]);

  // edge-disjointness is structural: no dual edge id may repeat
  std::set<int> used;
  for (const auto& path : triple.dual_paths)
    for (int idx : path)
      if (!used.insert(idx).second)
        fail(ErrorKind::Validation, "dual edge reused across paths; extraction is broken");
  return triple;
}

/// Removes every crossed primal edge from the triangulated graph; the three
/// surviving components are the parts, labeled A/B/C by their smallest
/// vertex. Reports BadComponentCount when the cut does not give exactly 3.
inline ThreePartition cut_partition(const TriangulatedGraph& t, const DualGraph& d,
                                    const PathTriple& paths) {
  const int n = t.graph.n;
  const auto crossed = paths.crossed_edges(d);
  std::set<std::pair<int, int>> cut(crossed.begin(), crossed.end());

  std::vector<int> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (const auto& e : t.graph.edges) {
    if (cut.count({e.u, e.v})) continue;
    parent[find(e.u)] = find(e.v);
  }

  // order components by their smallest vertex: vertices ascend, so the
  // first unseen root opens the next label
  std::vector<int> root_order;
  for (int v = 0; v < n; ++v) {
    const int r = find(v);
    if (std::find(root_order.begin(), root_order.end(), r) == root_order.end())
      root_order.push_back(r);
  }
  if (root_order.size() != 3)
    fail(ErrorKind::BadComponentCount,
         "cut produced " + std::to_string(root_order.size()) + " components instead of 3",
         static_cast<double>(root_order.size()));

  std::vector<PartLabel> labels(n);
  for (int v = 0; v < n; ++v) {
    const int k = static_cast<int>(
        std::find(root_order.begin(), root_order.end(), find(v)) - root_order.begin());
    labels[v] = static_cast<PartLabel>(k);
  }
  return validate_partition(std::move(labels), n);
}

/// Re-evaluates the partition's circulation on the ORIGINAL flux field
/// (chords carry no flux) and checks it equals the potential gap.
inline CirculationReport verify_partition(const NetFluxField& f, const ThreePartition& p,
                                          const CurlPotential& psi, const Tolerances& tol = {}) {
  CirculationReport report = circulation(f, p, tol);
  const double expected = psi.psi_max() - psi.psi_min();
  const double slack = tol.psi * std::max(1, static_cast<int>(f.support().size()));
  if (std::abs(report.circulation - expected) > slack)
    fail(ErrorKind::MismatchCirculation,
         "partition circulation " + std::to_string(report.circulation) +
             " does not equal the potential gap " + std::to_string(expected),
         report.circulation - expected);
  return report;
}

struct ExtractionResult {
  ThreePartition partition;
  PathTriple paths;
  CirculationReport report;
  int attempts = 1;  // flow decompositions tried before the cut succeeded
};

/// Full extrema-to-partition step: extrema faces -> three disjoint dual paths -> cut ->
/// verified partition. When a decomposition cuts into the wrong number of
/// components, up to `max_attempts` alternative decompositions are tried by
/// rotating the augmenting-path scan order.
inline ExtractionResult extract_max_circulation_partition(const NetFluxField& original,
                                                          const TriangulatedGraph& t,
                                                          const DualGraph& d,
                                                          const CurlPotential& psi,
                                                          const Tolerances& tol = {},
                                                          int max_attempts = 16) {
  const auto [fmin, fmax] = extrema(psi);
  Error last(ErrorKind::BadComponentCount, "no attempt made");
  for (int attempt = 0; attempt < std::max(max_attempts, 1); ++attempt) {
    PathTriple paths = three_disjoint_paths(d, fmin, fmax, attempt);
    try {
      ThreePartition partition = cut_partition(t, d, paths);
      CirculationReport report = verify_partition(original, partition, psi, tol);
      return {std::move(partition), std::move(paths), std::move(report), attempt + 1};
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::BadComponentCount) throw;
      last = e;
    }
  }
  throw last;
}

}  // namespace circa
