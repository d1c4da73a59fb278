#pragma once

// Shared helpers for the test suites: independent oracles (kept free of the
// library code paths they check) and deterministic instance generators.

#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <random>
#include <set>
#include <vector>

#include "circa/circa.hpp"

namespace testsupport {

// ---------------------------------------------------------------------------
// oracles

/// Stirling numbers of the second kind via the textbook recurrence
/// S(n,k) = k*S(n-1,k) + S(n-1,k-1).
inline long long stirling2(int n, int k) {
  if (n == k) return 1;
  if (k == 0 || k > n) return 0;
  std::vector<std::vector<long long>> s(n + 1, std::vector<long long>(k + 1, 0));
  s[0][0] = 1;
  for (int i = 1; i <= n; ++i)
    for (int j = 1; j <= std::min(i, k); ++j)
      s[i][j] = j * s[i - 1][j] + s[i - 1][j - 1];
  return s[n][k];
}

/// Direct double-loop evaluation of I_A^T F I_B from raw part sets; written
/// against the matrix definition, not the library's accessors.
inline double naive_pair_flux(const circa::NetFluxField& f, const std::vector<int>& a,
                              const std::vector<int>& b) {
  double s = 0.0;
  for (int i : a)
    for (int j : b) s += f.at(i, j);
  return s;
}

/// Exhaustive maximum circulation over ALL 3^n labelings with three nonempty
/// parts (no canonicalization), as an independent check of the canonical
/// enumeration. Only usable for small n.
inline double naive_cmax(const circa::NetFluxField& f, bool connected_only,
                         const std::vector<std::pair<int, int>>& edges) {
  const int n = f.size();
  double best = -1.0;
  std::vector<int> label(n, 0);
  const long long total = static_cast<long long>(std::pow(3, n));
  for (long long code = 0; code < total; ++code) {
    long long c = code;
    std::array<std::vector<int>, 3> parts;
    for (int v = 0; v < n; ++v) {
      parts[c % 3].push_back(v);
      c /= 3;
    }
    if (parts[0].empty() || parts[1].empty() || parts[2].empty()) continue;
    if (connected_only) {
      bool ok = true;
      for (const auto& part : parts) {
        std::set<int> in(part.begin(), part.end());
        std::set<int> seen{part[0]};
        std::vector<int> stack{part[0]};
        while (!stack.empty()) {
          int u = stack.back();
          stack.pop_back();
          for (auto [x, y] : edges) {
            int other = -1;
            if (x == u) other = y;
            if (y == u) other = x;
            if (other >= 0 && in.count(other) && !seen.count(other)) {
              seen.insert(other);
              stack.push_back(other);
            }
          }
        }
        ok = ok && seen.size() == in.size();
      }
      if (!ok) continue;
    }
    best = std::max(best, std::abs(naive_pair_flux(f, parts[0], parts[1])));
  }
  return best;
}

// ---------------------------------------------------------------------------
// flux-field generators

inline circa::NetFluxField field_from_edges(int n,
                                            const std::vector<std::array<double, 3>>& edges) {
  circa::NetFluxField f = circa::NetFluxField::zero(n);
  for (const auto& e : edges)
    f.set_pair(static_cast<int>(e[0]), static_cast<int>(e[1]), e[2]);
  return f;
}

/// The unit 6-cycle field: +1 along 1->2->...->6->1 (0-based 0..5).
inline circa::NetFluxField hexagon_field() {
  circa::NetFluxField f = circa::NetFluxField::zero(6);
  for (int i = 0; i < 6; ++i) f.set_pair(i, (i + 1) % 6, 1.0);
  return f;
}

inline std::vector<std::array<double, 2>> hexagon_coords() {
  return {{-0.75, 1.299}, {0.75, 1.299}, {1.5, 0.0}, {0.75, -1.299}, {-0.75, -1.299}, {-1.5, 0.0}};
}

inline std::vector<std::pair<int, int>> hexagon_edges() {
  return {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 5}, {0, 5}};
}

/// Three-state rotor: flux gamma around 0 -> 1 -> 2 -> 0.
inline circa::NetFluxField three_state_field(double gamma) {
  circa::NetFluxField f = circa::NetFluxField::zero(3);
  f.set_pair(0, 1, gamma);
  f.set_pair(1, 2, gamma);
  f.set_pair(2, 0, gamma);
  return f;
}

/// Random divergence-free antisymmetric field: a sum of random directed
/// triangle circulations. Divergence-free by construction.
inline circa::NetFluxField random_cycle_field(int n, std::mt19937& rng, int cycles = 8) {
  std::uniform_int_distribution<int> pick(0, n - 1);
  std::uniform_real_distribution<double> mag(0.1, 1.0);
  circa::NetFluxField f = circa::NetFluxField::zero(n);
  for (int c = 0; c < cycles; ++c) {
    int a = pick(rng), b = pick(rng), d = pick(rng);
    if (a == b || b == d || a == d) {
      --c;
      continue;
    }
    const double g = mag(rng) * (rng() % 2 ? 1.0 : -1.0);
    f.set_pair(a, b, f.at(a, b) + g);
    f.set_pair(b, d, f.at(b, d) + g);
    f.set_pair(d, a, f.at(d, a) + g);
  }
  return f;
}

/// Random valid 3-partition (all parts nonempty).
inline circa::ThreePartition random_partition(int n, std::mt19937& rng) {
  std::uniform_int_distribution<int> pick(0, 2);
  while (true) {
    std::vector<circa::PartLabel> labels(n);
    std::array<int, 3> count{0, 0, 0};
    for (int v = 0; v < n; ++v) {
      int k = pick(rng);
      labels[v] = static_cast<circa::PartLabel>(k);
      ++count[k];
    }
    if (count[0] && count[1] && count[2])
      return circa::validate_partition(std::move(labels), n);
  }
}

// ---------------------------------------------------------------------------
// planar instance generators

struct PlanarInstance {
  int n = 0;
  std::vector<std::array<double, 2>> coords;
  circa::NetFluxField field = circa::NetFluxField::zero(0);
  std::vector<double> expected_psi;  // per face id of the untriangulated embedding
  double expected_gap = 0.0;
};

/// Wheel graph W_k: hub 0, rim 1..k. All interior faces are triangles, so
/// with include_outer=false the triangulation is a no-op and psi can be
/// compared face by face.
inline std::vector<std::pair<int, int>> wheel_edges(int k) {
  std::vector<std::pair<int, int>> edges;
  for (int i = 1; i <= k; ++i) edges.push_back({0, i});
  for (int i = 1; i < k; ++i) edges.push_back({i, i + 1});
  edges.push_back({1, k});
  return edges;
}

inline std::vector<std::array<double, 2>> wheel_coords(int k) {
  std::vector<std::array<double, 2>> coords{{0.0, 0.0}};
  for (int i = 0; i < k; ++i) {
    const double a = 2.0 * M_PI * i / k;
    coords.push_back({std::cos(a), std::sin(a)});
  }
  return coords;
}

inline std::vector<std::pair<int, int>> grid_edges(int rows, int cols) {
  std::vector<std::pair<int, int>> edges;
  auto id = [&](int r, int c) { return r * cols + c; };
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) {
      if (c + 1 < cols) edges.push_back({id(r, c), id(r, c + 1)});
      if (r + 1 < rows) edges.push_back({id(r, c), id(r + 1, c)});
    }
  return edges;
}

inline std::vector<std::array<double, 2>> grid_coords(int rows, int cols) {
  std::vector<std::array<double, 2>> coords;
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c)
      coords.push_back({static_cast<double>(c), static_cast<double>(rows - r)});
  return coords;
}

/// Builds a random divergence-free flux on a given plane graph by drawing a
/// random potential per face and differencing it across each edge. The
/// construction IS the statement the potential solver must invert, which
/// makes the expected psi (and gap) known exactly.
inline PlanarInstance random_planar_instance(const std::vector<std::pair<int, int>>& edges,
                                             const std::vector<std::array<double, 2>>& coords,
                                             std::mt19937& rng) {
  const int n = static_cast<int>(coords.size());
  // placeholder unit fluxes give the support graph and its embedding
  circa::NetFluxField skeleton = circa::NetFluxField::zero(n);
  for (auto [u, v] : edges) skeleton.set_pair(u, v, 1.0);
  circa::FlowGraph skeleton_graph = circa::FlowGraph::from_flux(skeleton);
  circa::PlanarEmbedding embedding = circa::embed_from_coords(skeleton_graph, coords);

  std::uniform_real_distribution<double> level(-1.0, 1.0);
  std::vector<double> face_potential(embedding.face_count());
  // redraw on an exact zero difference (probability-zero collision) so the
  // support never loses an edge
  bool clean = false;
  while (!clean) {
    face_potential[0] = 0.0;  // outer pinned
    for (int f = 1; f < embedding.face_count(); ++f) face_potential[f] = level(rng);
    clean = true;
    for (auto [u, v] : edges)
      clean = clean && face_potential[embedding.face_left_of(u, v)] !=
                           face_potential[embedding.face_left_of(v, u)];
  }

  PlanarInstance inst;
  inst.n = n;
  inst.coords = coords;
  inst.field = circa::NetFluxField::zero(n);
  for (auto [u, v] : edges)
    inst.field.set_pair(u, v, face_potential[embedding.face_left_of(u, v)] -
                                  face_potential[embedding.face_left_of(v, u)]);
  inst.expected_psi = face_potential;
  double lo = 0.0, hi = 0.0;
  for (double p : face_potential) {
    lo = std::min(lo, p);
    hi = std::max(hi, p);
  }
  inst.expected_gap = hi - lo;
  return inst;
}

}  // namespace testsupport
