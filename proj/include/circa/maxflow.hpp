#pragma once

#include <algorithm>
#include <string>
#include <unordered_map>
#include <vector>

#include "circa/common.hpp"
#include "circa/embedding.hpp"

namespace circa {

namespace detail {

/// Unit-capacity flow network with BFS augmenting paths (Edmonds-Karp).
/// Arcs keep insertion order; `scan_offset` rotates the per-vertex scan so
/// callers can ask for alternative flow decompositions deterministically.
class UnitFlowNetwork {
 public:
  explicit UnitFlowNetwork(int vertices) : head_(vertices) {}

  /// Adds arc u->v with capacity 1 plus its zero-capacity residual twin.
  void add_arc(int u, int v, int tag) {
    by_tag_[tag].push_back(static_cast<int>(arcs_.size()));
    arcs_.push_back({v, 1, tag});
    head_[u].push_back(static_cast<int>(arcs_.size()) - 1);
    arcs_.push_back({u, 0, tag});
    head_[v].push_back(static_cast<int>(arcs_.size()) - 1);
  }

  int max_flow(int s, int t, int cap, int scan_offset = 0) {
    int flow = 0;
    while (flow < cap && augment(s, t, scan_offset)) ++flow;
    return flow;
  }

  /// An undirected edge is modeled as two opposed unit arcs; a maximum flow
  /// may saturate both, which nets to zero crossing. Cancel such pairs so
  /// the path decomposition never reuses one undirected edge.
  void cancel_opposite_pairs() {
    for (const auto& [tag, fwd] : by_tag_) {
      if (tag < 0 || fwd.size() != 2) continue;
      if (arcs_[fwd[0]].cap == 0 && arcs_[fwd[1]].cap == 0) {
        arcs_[fwd[0]].cap = 1;
        arcs_[fwd[0] ^ 1].cap = 0;
        arcs_[fwd[1]].cap = 1;
        arcs_[fwd[1] ^ 1].cap = 0;
      }
    }
  }

  void begin_decomposition() { consumed_.assign(arcs_.size(), 0); }

  /// Follows saturated forward arcs from s to t, consuming them; returns the
  /// tags (>= 0) along one simple path. Flow cycles encountered on the way
  /// are consumed and discarded (their tags are dropped), so the walk always
  /// terminates at t with a loop-free path. Call once per unit of flow.
  std::vector<int> extract_path(int s, int t) {
    std::vector<int> walk{s};
    std::vector<int> walk_arcs;
    std::vector<int> pos(head_.size(), -1);
    pos[s] = 0;
    while (walk.back() != t) {
      const int u = walk.back();
      int taken = -1;
      for (int a : head_[u]) {
        if ((a & 1) == 0 && arcs_[a].cap == 0 && !consumed_[a]) {
          taken = a;
          break;
        }
      }
      if (taken < 0) fail(ErrorKind::Validation, "flow decomposition stuck; network corrupt");
      consumed_[taken] = 1;
      const int v = arcs_[taken].to;
      if (pos[v] >= 0) {
        // closed a cycle: drop it and resume from v
        while (static_cast<int>(walk.size()) > pos[v] + 1) {
          pos[walk.back()] = -1;
          walk.pop_back();
          walk_arcs.pop_back();
        }
      } else {
        walk.push_back(v);
        walk_arcs.push_back(taken);
        pos[v] = static_cast<int>(walk.size()) - 1;
      }
    }
    std::vector<int> tags;
    for (int a : walk_arcs)
      if (arcs_[a].tag >= 0) tags.push_back(arcs_[a].tag);
    return tags;
  }

 private:
  struct Arc {
    int to;
    int cap;
    int tag;  // caller-side edge id; -1 for auxiliary arcs
  };

  bool augment(int s, int t, int scan_offset) {
    std::vector<int> parent_arc(head_.size(), -1);
    std::vector<char> seen(head_.size(), 0);
    std::vector<int> queue{s};
    seen[s] = 1;
    for (size_t qi = 0; qi < queue.size() && !seen[t]; ++qi) {
      const int u = queue[qi];
      const auto& out = head_[u];
      const int deg = static_cast<int>(out.size());
      for (int k = 0; k < deg && !seen[t]; ++k) {
        const int a = out[(k + scan_offset) % std::max(deg, 1)];
        if (arcs_[a].cap > 0 && !seen[arcs_[a].to]) {
          seen[arcs_[a].to] = 1;
          parent_arc[arcs_[a].to] = a;
          queue.push_back(arcs_[a].to);
        }
      }
    }
    if (!seen[t]) return false;
    for (int v = t; v != s;) {
      const int a = parent_arc[v];
      arcs_[a].cap -= 1;
      arcs_[a ^ 1].cap += 1;
      v = arcs_[a ^ 1].to;
    }
    return true;
  }

  std::vector<Arc> arcs_;
  std::vector<std::vector<int>> head_;
  std::vector<char> consumed_;
  std::unordered_map<int, std::vector<int>> by_tag_;
};

}  // namespace detail

struct DisjointPathsResult {
  int flow = 0;
  std::vector<std::vector<int>> paths;  // dual edge ids per path
  bool vertex_disjoint = false;
};

/// Finds up to `want` edge-disjoint s-t paths in the dual multigraph,
/// preferring internally vertex-disjoint ones (via vertex splitting).
/// Dual self-loops never help a path and are skipped.
inline DisjointPathsResult dual_disjoint_paths(const DualGraph& d, int s, int t, int want,
                                               int scan_offset = 0) {
  if (s == t) fail(ErrorKind::Validation, "path endpoints coincide");
  const int m = d.vertex_count;

  auto run = [&](bool split) {
    // split: v becomes v_in = 2v and v_out = 2v+1 joined by a unit arc;
    // s and t keep a single node so only interior vertices are constrained
    detail::UnitFlowNetwork net(split ? 2 * m : m);
    auto node_in = [&](int v) { return split ? 2 * v : v; };
    auto node_out = [&](int v) { return split ? (v == s || v == t ? 2 * v : 2 * v + 1) : v; };
    if (split)
      for (int v = 0; v < m; ++v)
        if (v != s && v != t) net.add_arc(2 * v, 2 * v + 1, -1);
    for (int idx = 0; idx < static_cast<int>(d.edges.size()); ++idx) {
      const auto& e = d.edges[idx];
      if (e.face_a == e.face_b) continue;
      net.add_arc(node_out(e.face_a), node_in(e.face_b), idx);
      net.add_arc(node_out(e.face_b), node_in(e.face_a), idx);
    }
    DisjointPathsResult r;
    r.flow = net.max_flow(node_in(s), node_in(t), want, scan_offset);
    if (r.flow >= want) {
      // In the unsplit network an undirected dual edge saturated in both
      // directions nets to zero and must be canceled, or two extracted
      // paths could claim the same edge. In the split network such pairs
      // sit on isolated cycles that the extraction walk already discards.
      if (!split) net.cancel_opposite_pairs();
      net.begin_decomposition();
      for (int k = 0; k < want; ++k) r.paths.push_back(net.extract_path(node_in(s), node_in(t)));
      r.vertex_disjoint = split;
    }
    return r;
  };

  DisjointPathsResult with_split = run(true);
  if (with_split.flow >= want) return with_split;
  return run(false);
}

/// s-t edge connectivity of the dual, capped at `cap` (3 is all the
/// partition machinery ever needs).
inline int dual_edge_connectivity(const DualGraph& d, int s, int t, int cap = 3) {
  detail::UnitFlowNetwork net(d.vertex_count);
  for (int idx = 0; idx < static_cast<int>(d.edges.size()); ++idx) {
    const auto& e = d.edges[idx];
    if (e.face_a == e.face_b) continue;
    net.add_arc(e.face_a, e.face_b, idx);
    net.add_arc(e.face_b, e.face_a, idx);
  }
  return net.max_flow(s, t, cap);
}

/// True when every dual vertex pair has min-cut >= 3 (what triangulation is
/// supposed to establish for the partition extraction to work).
inline bool dual_three_edge_connected(const DualGraph& d) {
  for (int s = 0; s < d.vertex_count; ++s)
    for (int t = s + 1; t < d.vertex_count; ++t)
      if (dual_edge_connectivity(d, s, t, 3) < 3) return false;
  return true;
}

}  // namespace circa
