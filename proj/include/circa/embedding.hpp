#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <utility>
#include <variant>
#include <vector>

#include "circa/common.hpp"
#include "circa/flowfield.hpp"

namespace circa {

/// One undirected support edge of the flow graph, oriented so that positive
/// flux runs u -> v. Chords are triangulation fill-ins and carry flux 0.
struct FlowEdge {
  int u, v;  // u < v
  double flux;
  bool chord = false;

  double weight() const { return std::abs(flux); }
  int sign() const { return flux >= 0.0 ? 1 : -1; }
};

/// The digraph G_F induced by the nonzero entries of a net-flux field.
struct FlowGraph {
  int n = 0;  // vertex ids run 0..n-1
  std::vector<FlowEdge> edges;
  std::vector<int> isolated;  // vertices with no incident nonzero flux

  static FlowGraph from_flux(const NetFluxField& f) {
    FlowGraph g;
    g.n = f.size();
    std::vector<char> touched(g.n, 0);
    for (const auto& e : f.support()) {
      g.edges.push_back({e.u, e.v, e.flux, false});
      touched[e.u] = touched[e.v] = 1;
    }
    for (int v = 0; v < g.n; ++v)
      if (!touched[v]) g.isolated.push_back(v);
    return g;
  }

  int edge_count() const { return static_cast<int>(edges.size()); }

  std::vector<std::vector<int>> adjacency() const {
    std::vector<std::vector<int>> adj(n);
    for (const auto& e : edges) {
      adj[e.u].push_back(e.v);
      adj[e.v].push_back(e.u);
    }
    for (auto& lst : adj) std::sort(lst.begin(), lst.end());
    return adj;
  }

  const FlowEdge* find(int a, int b) const {
    const int u = std::min(a, b), v = std::max(a, b);
    for (const auto& e : edges)
      if (e.u == u && e.v == v) return &e;
    return nullptr;
  }

  bool connected_on_support() const {
    if (edges.empty()) return false;
    if (!isolated.empty()) return false;
    auto adj = adjacency();
    std::vector<char> seen(n, 0);
    std::vector<int> stack{0};
    seen[0] = 1;
    int count = 1;
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
    return count == n;
  }
};

/// Combinatorial embedding: a counterclockwise rotation system plus the face
/// walks it induces. Face 0 is always the outer face. The face containing
/// dart u->v is the face on the LEFT of u->v; with rotations taken from a
/// plane drawing, interior face walks run counterclockwise.
struct PlanarEmbedding {
  int n = 0;
  int edge_count = 0;
  std::vector<std::vector<int>> rotation;  // rotation[v] = CCW neighbor cycle

  struct Face {
    std::vector<int> boundary;  // vertex cycle; darts are boundary[i] -> boundary[i+1]
    size_t length() const { return boundary.size(); }
  };
  std::vector<Face> faces;  // faces[0] is the outer face

  int face_count() const { return static_cast<int>(faces.size()); }

  int face_left_of(int u, int v) const {
    auto it = dart_face_.find(dart_key(u, v));
    if (it == dart_face_.end())
      fail(ErrorKind::Validation,
           "no dart " + std::to_string(u + 1) + "->" + std::to_string(v + 1) + " in embedding");
    return it->second;
  }

  /// Rebuild the dart -> face index after faces are (re)assigned.
  void index_darts() {
    dart_face_.clear();
    for (int fi = 0; fi < face_count(); ++fi) {
      const auto& b = faces[fi].boundary;
      for (size_t i = 0; i < b.size(); ++i)
        dart_face_[dart_key(b[i], b[(i + 1) % b.size()])] = fi;
    }
  }

 private:
  long long dart_key(int u, int v) const { return static_cast<long long>(u) * n + v; }
  std::unordered_map<long long, int> dart_face_;
};

namespace detail {

/// Trace all face walks of a rotation system. Next dart after u->v is
/// v->w where w immediately precedes u in the CCW rotation at v (follow the
/// twin, then turn clockwise). Walks are discovered in ascending dart order
/// and each starts at its lexicographically smallest dart.
inline std::vector<PlanarEmbedding::Face> trace_faces(const std::vector<std::vector<int>>& rotation) {
  const int n = static_cast<int>(rotation.size());
  std::unordered_map<long long, int> pos;  // (v,u) -> index of u in rotation[v]
  auto key = [&](int v, int u) { return static_cast<long long>(v) * n + u; };
  for (int v = 0; v < n; ++v)
    for (int i = 0; i < static_cast<int>(rotation[v].size()); ++i)
      pos[key(v, rotation[v][i])] = i;
  std::vector<std::pair<int, int>> darts;
  for (int u = 0; u < n; ++u)
    for (int v : rotation[u]) darts.push_back({u, v});
  std::sort(darts.begin(), darts.end());

  std::set<std::pair<int, int>> seen;
  std::vector<PlanarEmbedding::Face> faces;
  for (const auto& start : darts) {
    if (seen.count(start)) continue;
    PlanarEmbedding::Face face;
    std::pair<int, int> cur = start;
    while (!seen.count(cur)) {
      seen.insert(cur);
      face.boundary.push_back(cur.first);
      const auto [u, v] = cur;
      const auto& rot = rotation[v];
      const int i = pos.at(key(v, u));
      const int w = rot[(i + static_cast<int>(rot.size()) - 1) % rot.size()];
      cur = {v, w};
    }
    faces.push_back(std::move(face));
  }
  return faces;
}

inline double walk_signed_area(const PlanarEmbedding::Face& face,
                               const std::vector<std::array<double, 2>>& coords) {
  double s = 0.0;
  const auto& b = face.boundary;
  for (size_t i = 0; i < b.size(); ++i) {
    const auto& p = coords[b[i]];
    const auto& q = coords[b[(i + 1) % b.size()]];
    s += p[0] * q[1] - q[0] * p[1];
  }
  return 0.5 * s;
}

inline void require_embeddable(const FlowGraph& g) {
  if (g.edges.empty())
    fail(ErrorKind::IsolatedVertex, "flow graph has no edges (zero flux field)", g.n);
  if (!g.isolated.empty()) {
    std::string msg = "vertices without incident flux:";
    for (int v : g.isolated) msg += " " + std::to_string(v + 1);
    fail(ErrorKind::IsolatedVertex, msg, g.isolated.front());
  }
  if (!g.connected_on_support())
    fail(ErrorKind::Validation, "flow graph support is disconnected");
}

/// Moves `outer` to index 0, keeping the relative order of the rest, and
/// rebuilds the dart index.
inline void designate_outer(PlanarEmbedding& e, int outer) {
  if (outer != 0) {
    PlanarEmbedding::Face f = std::move(e.faces[outer]);
    e.faces.erase(e.faces.begin() + outer);
    e.faces.insert(e.faces.begin(), std::move(f));
  }
  e.index_darts();
}

}  // namespace detail

/// Embed from a straight-line plane drawing: the rotation at each vertex is
/// its neighbors sorted by counterclockwise angle, and the outer face is the
/// unique walk with negative signed area.
inline PlanarEmbedding embed_from_coords(const FlowGraph& g,
                                         const std::vector<std::array<double, 2>>& coords) {
  detail::require_embeddable(g);
  if (static_cast<int>(coords.size()) != g.n)
    fail(ErrorKind::DimensionMismatch, "coordinate list does not cover every vertex");
  for (int a = 0; a < g.n; ++a)
    for (int b = a + 1; b < g.n; ++b)
      if (coords[a] == coords[b])
        fail(ErrorKind::Validation, "vertices " + std::to_string(a + 1) + " and " +
                                        std::to_string(b + 1) + " share coordinates");

  PlanarEmbedding e;
  e.n = g.n;
  e.edge_count = g.edge_count();
  e.rotation.assign(g.n, {});
  auto adj = g.adjacency();
  for (int v = 0; v < g.n; ++v) {
    auto& rot = e.rotation[v];
    rot = adj[v];
    std::sort(rot.begin(), rot.end(), [&](int a, int b) {
      const double aa = std::atan2(coords[a][1] - coords[v][1], coords[a][0] - coords[v][0]);
      const double ab = std::atan2(coords[b][1] - coords[v][1], coords[b][0] - coords[v][0]);
      return aa < ab;
    });
    for (size_t i = 0; i + 1 < rot.size(); ++i) {
      const int a = rot[i], b = rot[i + 1];
      const double aa = std::atan2(coords[a][1] - coords[v][1], coords[a][0] - coords[v][0]);
      const double ab = std::atan2(coords[b][1] - coords[v][1], coords[b][0] - coords[v][0]);
      if (aa == ab)
        fail(ErrorKind::Validation,
             "edges at vertex " + std::to_string(v + 1) + " are collinear in the drawing");
    }
  }

  e.faces = detail::trace_faces(e.rotation);
  const int euler = e.n - e.edge_count + e.face_count();
  if (euler != 2)
    fail(ErrorKind::EulerViolation,
         "V - E + F = " + std::to_string(euler) + " (expected 2); the drawing is not a planar embedding",
         euler);

  int outer = -1;
  for (int fi = 0; fi < e.face_count(); ++fi)
    if (detail::walk_signed_area(e.faces[fi], coords) < 0.0) {
      if (outer >= 0)
        fail(ErrorKind::EulerViolation, "drawing has more than one negative-area face walk");
      outer = fi;
    }
  if (outer < 0)
    fail(ErrorKind::EulerViolation, "no negative-area face walk; cannot identify the outer face");
  detail::designate_outer(e, outer);
  return e;
}

/// Outer-face designation for rotation-system input: either a face index in
/// discovery order or a boundary vertex cycle (matched up to rotation and
/// direction).
using OuterFaceHint = std::variant<int, std::vector<int>>;

namespace detail {

inline bool cycle_matches(const std::vector<int>& walk, std::vector<int> want) {
  if (walk.size() != want.size() || walk.empty()) return false;
  for (int dir = 0; dir < 2; ++dir) {
    for (size_t off = 0; off < walk.size(); ++off) {
      bool ok = true;
      for (size_t i = 0; i < walk.size() && ok; ++i)
        ok = walk[(off + i) % walk.size()] == want[i];
      if (ok) return true;
    }
    std::reverse(want.begin(), want.end());
  }
  return false;
}

}  // namespace detail

/// Embed from an explicit counterclockwise rotation system. Rejects
/// non-planar rotations via the Euler-derived genus.
inline PlanarEmbedding embed_from_rotation(const FlowGraph& g,
                                           const std::vector<std::vector<int>>& rotation,
                                           const OuterFaceHint& outer_hint) {
  detail::require_embeddable(g);
  if (static_cast<int>(rotation.size()) != g.n)
    fail(ErrorKind::DimensionMismatch, "rotation system does not cover every vertex");
  auto adj = g.adjacency();
  for (int v = 0; v < g.n; ++v) {
    std::vector<int> sorted = rotation[v];
    std::sort(sorted.begin(), sorted.end());
    if (sorted != adj[v])
      fail(ErrorKind::Validation,
           "rotation at vertex " + std::to_string(v + 1) +
               " does not list each incident edge exactly once");
  }

  PlanarEmbedding e;
  e.n = g.n;
  e.edge_count = g.edge_count();
  e.rotation = rotation;
  e.faces = detail::trace_faces(e.rotation);
  const int euler = e.n - e.edge_count + e.face_count();
  if (euler != 2) {
    const int genus = (2 - euler) / 2;
    fail(ErrorKind::NotGenusZero,
         "rotation system has genus " + std::to_string(genus) + "; only genus 0 is supported",
         genus);
  }

  int outer = -1;
  if (std::holds_alternative<int>(outer_hint)) {
    outer = std::get<int>(outer_hint);
    if (outer < 0 || outer >= e.face_count())
      fail(ErrorKind::NoSuchFace, "outer face index " + std::to_string(outer) + " out of range",
           outer);
  } else {
    const auto& want = std::get<std::vector<int>>(outer_hint);
    for (int fi = 0; fi < e.face_count(); ++fi)
      if (detail::cycle_matches(e.faces[fi].boundary, want)) {
        outer = fi;
        break;
      }
    if (outer < 0)
      fail(ErrorKind::NoSuchFace, "no face walk matches the outer-face boundary hint");
  }
  detail::designate_outer(e, outer);
  return e;
}

/// Re-designates the outer face, keeping the rotation system (and hence the
/// face set) identical. Face ids are recompacted with the new outer first.
inline PlanarEmbedding reroot_outer_face(const PlanarEmbedding& e, int face) {
  if (face < 0 || face >= e.face_count())
    fail(ErrorKind::NoSuchFace, "face " + std::to_string(face) + " does not exist", face);
  PlanarEmbedding out = e;
  detail::designate_outer(out, face);
  return out;
}

/// One dual edge per primal edge. face_a is the face on the left of the
/// u -> v dart, so a positive-flux crossing raises psi going from face_b to
/// face_a. Parallel dual edges and loops are kept.
struct DualEdge {
  int face_a, face_b;
  int u, v;  // crossed primal edge, u < v
  double flux;
  bool chord;
};

struct DualGraph {
  int vertex_count = 0;  // = number of faces
  std::vector<DualEdge> edges;

  bool connected() const {
    if (vertex_count == 0) return false;
    std::vector<std::vector<int>> adj(vertex_count);
    for (const auto& e : edges) {
      adj[e.face_a].push_back(e.face_b);
      adj[e.face_b].push_back(e.face_a);
    }
    std::vector<char> seen(vertex_count, 0);
    std::vector<int> stack{0};
    seen[0] = 1;
    int count = 1;
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
    return count == vertex_count;
  }
};

/// Dual of an embedding: one vertex per face, one edge per primal edge,
/// annotated with the crossed edge and its flux. Edge ids follow ascending
/// primal (u,v) order, which downstream algorithms rely on for determinism.
inline DualGraph dual(const PlanarEmbedding& e, const FlowGraph& g) {
  DualGraph d;
  d.vertex_count = e.face_count();
  for (const auto& edge : g.edges) {
    const int fa = e.face_left_of(edge.u, edge.v);
    const int fb = e.face_left_of(edge.v, edge.u);
    d.edges.push_back({fa, fb, edge.u, edge.v, edge.flux, edge.chord});
  }
  return d;
}

/// A flow graph completed with zero-flux chords until every face (interior
/// ones, plus the outer face when requested) is a triangle.
struct TriangulatedGraph {
  FlowGraph graph;            // original edges plus chords
  PlanarEmbedding embedding;  // refreshed faces, outer still first
  std::vector<std::pair<int, int>> chords;
  bool outer_triangulated = false;
};

/// Chordal completion by ear clipping. Each non-triangular face is reduced
/// by repeatedly cutting the ear at its lowest-index vertex (skipping ears
/// whose chord would duplicate an existing edge); this is deterministic and
/// needs k-3 chords for a k-gon. An explicit `forced_chords` set overrides
/// the ear choice: only ears whose chord is in the set are taken, and every
/// forced chord must end up used.
inline TriangulatedGraph triangulate(const FlowGraph& g, const PlanarEmbedding& e,
                                     bool include_outer = false,
                                     const std::vector<std::pair<int, int>>* forced_chords = nullptr) {
  auto rotation = e.rotation;
  std::set<std::pair<int, int>> existing;
  for (const auto& edge : g.edges) existing.insert({edge.u, edge.v});

  std::set<std::pair<int, int>> forced;
  if (forced_chords)
    for (auto [a, b] : *forced_chords) forced.insert({std::min(a, b), std::max(a, b)});

  std::vector<std::pair<int, int>> chords;
  auto insert_chord = [&](int prev, int cur, int next) {
    // New triangle (prev, cur, next): the chord enters the rotations right
    // next to `cur` on both endpoints so the face trace picks it up.
    auto& rp = rotation[prev];
    rp.insert(std::find(rp.begin(), rp.end(), cur) + 1, next);
    auto& rn = rotation[next];
    rn.insert(std::find(rn.begin(), rn.end(), cur), prev);
    const std::pair<int, int> key{std::min(prev, next), std::max(prev, next)};
    existing.insert(key);
    chords.push_back(key);
  };

  for (int fi = 0; fi < e.face_count(); ++fi) {
    if (fi == 0 && !include_outer) continue;
    std::vector<int> cyc = e.faces[fi].boundary;
    while (cyc.size() > 3) {
      const int k = static_cast<int>(cyc.size());
      std::vector<int> order(k);
      for (int i = 0; i < k; ++i) order[i] = i;
      std::sort(order.begin(), order.end(),
                [&](int a, int b) { return cyc[a] != cyc[b] ? cyc[a] < cyc[b] : a < b; });
      bool clipped = false;
      for (int i : order) {
        const int prev = cyc[(i + k - 1) % k];
        const int cur = cyc[i];
        const int next = cyc[(i + 1) % k];
        if (prev == next) continue;  // repeated vertex on a non-simple walk
        const std::pair<int, int> key{std::min(prev, next), std::max(prev, next)};
        if (existing.count(key)) continue;
        if (forced_chords && !forced.count(key)) continue;
        insert_chord(prev, cur, next);
        cyc.erase(cyc.begin() + i);
        clipped = true;
        break;
      }
      if (!clipped)
        fail(ErrorKind::CannotTriangulate,
             "face " + std::to_string(fi) + " admits no valid diagonal", fi);
    }
  }

  if (forced_chords)
    for (const auto& key : forced)
      if (std::find(chords.begin(), chords.end(), key) == chords.end())
        fail(ErrorKind::Validation,
             "requested chord " + std::to_string(key.first + 1) + "-" +
                 std::to_string(key.second + 1) + " was not usable in any face");

  TriangulatedGraph t;
  t.outer_triangulated = include_outer;
  t.chords = chords;
  t.graph.n = g.n;
  t.graph.edges = g.edges;
  for (auto [u, v] : chords) t.graph.edges.push_back({u, v, 0.0, true});
  std::sort(t.graph.edges.begin(), t.graph.edges.end(),
            [](const FlowEdge& a, const FlowEdge& b) {
              return a.u != b.u ? a.u < b.u : a.v < b.v;
            });

  t.embedding.n = g.n;
  t.embedding.edge_count = t.graph.edge_count();
  t.embedding.rotation = std::move(rotation);
  t.embedding.faces = detail::trace_faces(t.embedding.rotation);
  const int euler = t.embedding.n - t.embedding.edge_count + t.embedding.face_count();
  if (euler != 2)
    fail(ErrorKind::EulerViolation,
         "triangulation broke the Euler relation (V - E + F = " + std::to_string(euler) + ")",
         euler);

  // The outer face is tracked through the rebuild by one of its darts. With
  // include_outer the old outer region is subdivided; the sub-face holding
  // the first old boundary dart becomes the new outer by convention.
  const auto& old_outer = e.faces[0].boundary;
  t.embedding.index_darts();
  const int new_outer = t.embedding.face_left_of(old_outer[0], old_outer[1]);
  detail::designate_outer(t.embedding, new_outer);

  for (int fi = 1; fi < t.embedding.face_count(); ++fi)
    if (t.embedding.faces[fi].length() != 3)
      fail(ErrorKind::CannotTriangulate,
           "interior face " + std::to_string(fi) + " is not a triangle after completion", fi);
  if (include_outer && t.embedding.faces[0].length() != 3)
    fail(ErrorKind::CannotTriangulate, "outer face is not a triangle after completion", 0);
  return t;
}

}  // namespace circa
