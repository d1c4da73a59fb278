#pragma once

#include <cmath>
#include <deque>
#include <string>
#include <vector>

#include "circa/common.hpp"
#include "circa/embedding.hpp"

namespace circa {

/// Scalar curl potential on the faces (dual vertices) of a triangulated
/// embedding. The outer face is pinned to 0; for every crossed primal edge
/// u->v with flux w, psi(left face) - psi(right face) = w.
struct CurlPotential {
  std::vector<double> values;  // indexed by face id; values[0] == 0
  int face_min = 0;
  int face_max = 0;
  bool zero_circulation = false;

  // diagnostics pinned by the construction
  int assignments = 0;    // exactly face_count - 1
  int checks = 0;         // one per non-tree dual edge
  double max_residual = 0.0;

  double psi_min() const { return values[face_min]; }
  double psi_max() const { return values[face_max]; }
};

/// Assigns psi by breadth-first traversal of the dual from the outer face,
/// adding the signed crossed flux per step, then re-checks every non-tree
/// dual edge. A residual beyond tolerance means the flux field was not
/// divergence-free (or an orientation bug) and is reported as
/// InconsistentPotential with the residual attached.
inline CurlPotential compute_psi(const TriangulatedGraph& t, const DualGraph& d,
                                 const Tolerances& tol = {}) {
  const int m = d.vertex_count;
  if (m != t.embedding.face_count())
    fail(ErrorKind::DimensionMismatch, "dual graph does not match the embedding");
  if (!d.connected()) fail(ErrorKind::Validation, "dual graph is disconnected");

  // incidence: face -> dual edge ids, ascending
  std::vector<std::vector<int>> incident(m);
  for (int idx = 0; idx < static_cast<int>(d.edges.size()); ++idx) {
    incident[d.edges[idx].face_a].push_back(idx);
    if (d.edges[idx].face_b != d.edges[idx].face_a)
      incident[d.edges[idx].face_b].push_back(idx);
  }

  CurlPotential psi;
  psi.values.assign(m, 0.0);
  std::vector<char> known(m, 0);
  std::vector<char> tree_edge(d.edges.size(), 0);
  known[0] = 1;
  std::deque<int> queue{0};
  while (!queue.empty()) {
    const int f = queue.front();
    queue.pop_front();
    for (int idx : incident[f]) {
      const DualEdge& e = d.edges[idx];
      const int other = e.face_a == f ? e.face_b : e.face_a;
      if (known[other]) continue;
      // crossing from face_b to face_a gains +flux
      psi.values[other] = e.face_a == other ? psi.values[f] + e.flux : psi.values[f] - e.flux;
      known[other] = 1;
      tree_edge[idx] = 1;
      ++psi.assignments;
      queue.push_back(other);
    }
  }

  int worst = -1;
  for (int idx = 0; idx < static_cast<int>(d.edges.size()); ++idx) {
    if (tree_edge[idx]) continue;
    const DualEdge& e = d.edges[idx];
    const double residual = psi.values[e.face_a] - psi.values[e.face_b] - e.flux;
    ++psi.checks;
    if (std::abs(residual) > std::abs(psi.max_residual)) {
      psi.max_residual = residual;
      worst = idx;
    }
  }
  if (std::abs(psi.max_residual) > tol.psi) {
    const DualEdge& e = d.edges[worst];
    fail(ErrorKind::InconsistentPotential,
         "potential is inconsistent across edge " + std::to_string(e.u + 1) + "-" +
             std::to_string(e.v + 1) + " (residual " + std::to_string(psi.max_residual) + ")",
         psi.max_residual);
  }

  for (int f = 1; f < m; ++f) {
    if (psi.values[f] < psi.values[psi.face_min]) psi.face_min = f;
    if (psi.values[f] > psi.values[psi.face_max]) psi.face_max = f;
  }
  psi.zero_circulation = psi.psi_max() - psi.psi_min() <= tol.psi;
  return psi;
}

/// Faces carrying the minimum and maximum potential; ties break to the
/// lowest face id (so a constant field reports (0, 0)).
inline std::pair<int, int> extrema(const CurlPotential& psi) {
  return {psi.face_min, psi.face_max};
}

/// The largest flux any dual path can carry: psi_max - psi_min.
inline double max_circulation(const CurlPotential& psi) {
  return psi.psi_max() - psi.psi_min();
}

}  // namespace circa
