#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "circa/common.hpp"
#include "circa/flowfield.hpp"

namespace circa {

enum class PartLabel : uint8_t { A = 0, B = 1, C = 2 };

inline char to_char(PartLabel l) { return static_cast<char>('A' + static_cast<int>(l)); }

/// Disjoint cover of the vertex set by three nonempty parts A, B, C.
struct ThreePartition {
  std::vector<PartLabel> labels;

  int size() const { return static_cast<int>(labels.size()); }

  std::array<std::vector<int>, 3> parts() const {
    std::array<std::vector<int>, 3> out;
    for (int v = 0; v < size(); ++v) out[static_cast<int>(labels[v])].push_back(v);
    return out;
  }
};

inline ThreePartition validate_partition(std::vector<PartLabel> labels, int n) {
  if (static_cast<int>(labels.size()) != n)
    fail(ErrorKind::BadLength, "label vector has length " + std::to_string(labels.size()) +
                                   ", expected " + std::to_string(n));
  std::array<int, 3> count{0, 0, 0};
  for (PartLabel l : labels) ++count[static_cast<int>(l)];
  for (int k = 0; k < 3; ++k)
    if (count[k] == 0)
      fail(ErrorKind::EmptyPart,
           std::string("part ") + static_cast<char>('A' + k) + " is empty", k);
  return ThreePartition{std::move(labels)};
}

/// Convenience constructor from explicit part vertex lists (0-based).
inline ThreePartition partition_from_parts(const std::vector<int>& a, const std::vector<int>& b,
                                           const std::vector<int>& c, int n) {
  std::vector<PartLabel> labels(n, PartLabel::A);
  std::vector<char> seen(n, 0);
  auto place = [&](const std::vector<int>& part, PartLabel l) {
    for (int v : part) {
      if (v < 0 || v >= n) fail(ErrorKind::BadLength, "vertex id out of range");
      if (seen[v]) fail(ErrorKind::Validation, "vertex listed in two parts");
      seen[v] = 1;
      labels[v] = l;
    }
  };
  place(a, PartLabel::A);
  place(b, PartLabel::B);
  place(c, PartLabel::C);
  for (int v = 0; v < n; ++v)
    if (!seen[v]) fail(ErrorKind::Validation, "vertex " + std::to_string(v + 1) + " unassigned");
  return validate_partition(std::move(labels), n);
}

/// Signed flux I_from^T F I_to; antisymmetric under swapping the arguments.
inline double pair_flux(const NetFluxField& f, const ThreePartition& p, PartLabel from,
                        PartLabel to) {
  if (p.size() != f.size())
    fail(ErrorKind::DimensionMismatch, "partition size does not match the flux field");
  double s = 0.0;
  for (int i = 0; i < f.size(); ++i) {
    if (p.labels[i] != from) continue;
    for (int j = 0; j < f.size(); ++j)
      if (p.labels[j] == to) s += f.at(i, j);
  }
  return s;
}

struct BoundaryInfo {
  PartLabel from, to;
  std::vector<std::pair<int, int>> edges;  // flux-carrying pairs, u < v
};

/// Circulation of a 3-partition: the common magnitude of the three cyclic
/// inter-part fluxes, plus per-boundary sizes and density fluxes.
struct CirculationReport {
  double circulation = 0.0;
  std::array<double, 3> pairwise{};        // A->B, B->C, C->A (signed)
  std::array<BoundaryInfo, 3> boundaries;  // same order
  std::array<double, 3> density{};         // |flux| / |boundary|; 0 when undefined
  std::array<bool, 3> density_defined{};
  double f_min = 0.0;
  bool f_min_defined = false;
};

inline CirculationReport circulation(const NetFluxField& f, const ThreePartition& p,
                                     const Tolerances& tol = {}) {
  CirculationReport r;
  static constexpr std::array<std::pair<PartLabel, PartLabel>, 3> cyc{
      {{PartLabel::A, PartLabel::B}, {PartLabel::B, PartLabel::C}, {PartLabel::C, PartLabel::A}}};
  for (int k = 0; k < 3; ++k) {
    r.pairwise[k] = pair_flux(f, p, cyc[k].first, cyc[k].second);
    r.boundaries[k].from = cyc[k].first;
    r.boundaries[k].to = cyc[k].second;
  }
  // The three cyclic fluxes must agree for a divergence-free field; a gap
  // here means the input was not one.
  const double spread = std::max({r.pairwise[0], r.pairwise[1], r.pairwise[2]}) -
                        std::min({r.pairwise[0], r.pairwise[1], r.pairwise[2]});
  if (spread > tol.divergence * std::max(1, f.size()))
    fail(ErrorKind::CyclicFluxMismatch,
         "cyclic pair fluxes disagree by " + std::to_string(spread) +
             "; the flux field is not divergence-free",
         spread);
  r.circulation = std::abs(r.pairwise[0]);

  for (const auto& e : f.support()) {
    const PartLabel lu = p.labels[e.u];
    const PartLabel lv = p.labels[e.v];
    if (lu == lv) continue;
    for (int k = 0; k < 3; ++k) {
      const auto [x, y] = cyc[k];
      if ((lu == x && lv == y) || (lu == y && lv == x))
        r.boundaries[k].edges.push_back({e.u, e.v});
    }
  }
  bool any_defined = false;
  for (int k = 0; k < 3; ++k) {
    const size_t sz = r.boundaries[k].edges.size();
    if (sz == 0) {
      r.density[k] = 0.0;
      r.density_defined[k] = false;
      continue;
    }
    r.density[k] = std::abs(r.pairwise[k]) / static_cast<double>(sz);
    r.density_defined[k] = true;
    r.f_min = any_defined ? std::min(r.f_min, r.density[k]) : r.density[k];
    any_defined = true;
  }
  r.f_min_defined = any_defined;
  return r;
}

/// Visits every unordered 3-partition of {0..n-1} exactly once, in
/// lexicographic order of the canonical label vector. Canonical form:
/// vertex 0 is labeled A and the first non-A vertex is labeled B, which
/// quotients out the 3! label permutations.
template <typename Fn>
inline void enumerate_three_partitions(int n, Fn&& fn) {
  std::vector<PartLabel> labels(n, PartLabel::A);
  auto rec = [&](auto&& self, int pos, bool seen_b, bool seen_c) -> void {
    if (pos == n) {
      if (seen_b && seen_c) fn(const_cast<const std::vector<PartLabel>&>(labels));
      return;
    }
    // pruning: the remaining positions must be able to supply missing labels
    const int remaining = n - pos;
    const int missing = (seen_b ? 0 : 1) + (seen_c ? 0 : 1);
    if (remaining < missing) return;
    labels[pos] = PartLabel::A;
    self(self, pos + 1, seen_b, seen_c);
    labels[pos] = PartLabel::B;
    self(self, pos + 1, true, seen_c);
    if (seen_b) {
      labels[pos] = PartLabel::C;
      self(self, pos + 1, seen_b, true);
    }
    labels[pos] = PartLabel::A;
  };
  if (n < 3) return;
  // vertex 0 is pinned to A
  rec(rec, 1, false, false);
}

struct BruteForceResult {
  ThreePartition best;
  double value = 0.0;
  long long count_examined = 0;
};

namespace detail {

inline bool parts_connected(const std::vector<PartLabel>& labels,
                            const std::vector<std::vector<int>>& adj) {
  const int n = static_cast<int>(labels.size());
  std::array<int, 3> first{-1, -1, -1};
  std::array<int, 3> size{0, 0, 0};
  for (int v = 0; v < n; ++v) {
    const int k = static_cast<int>(labels[v]);
    if (first[k] < 0) first[k] = v;
    ++size[k];
  }
  std::vector<char> seen(n, 0);
  std::vector<int> stack;
  for (int k = 0; k < 3; ++k) {
    if (first[k] < 0) return false;
    int count = 1;
    seen[first[k]] = 1;
    stack.push_back(first[k]);
    while (!stack.empty()) {
      const int u = stack.back();
      stack.pop_back();
      for (int v : adj[u])
        if (!seen[v] && labels[v] == labels[u]) {
          seen[v] = 1;
          ++count;
          stack.push_back(v);
        }
    }
    if (count != size[k]) {
      std::fill(seen.begin(), seen.end(), 0);
      return false;
    }
  }
  return true;
}

}  // namespace detail

/// Exhaustive search for the maximal-circulation 3-partition. Examines
/// S(n,3) canonical labelings; ties break to the lexicographically smallest
/// label vector (which the enumeration order provides for free). With
/// `connected_only`, each part must induce a connected subgraph of
/// `adjacency` (normally the undirected support of F).
inline BruteForceResult brute_force_cmax(const NetFluxField& f, bool connected_only,
                                         const std::vector<std::pair<int, int>>& adjacency,
                                         int n_max = 12) {
  const int n = f.size();
  if (n > n_max)
    fail(ErrorKind::TooLarge,
         "n = " + std::to_string(n) + " exceeds the brute-force cap " + std::to_string(n_max), n);
  if (n < 3) fail(ErrorKind::TooLarge, "need at least 3 vertices for a 3-partition", n);

  std::vector<std::vector<int>> adj(n);
  for (auto [u, v] : adjacency) {
    adj[u].push_back(v);
    adj[v].push_back(u);
  }

  BruteForceResult result;
  result.value = -1.0;
  enumerate_three_partitions(n, [&](const std::vector<PartLabel>& labels) {
    ++result.count_examined;
    if (connected_only && !detail::parts_connected(labels, adj)) return;
    ThreePartition p{labels};
    const double c = std::abs(pair_flux(f, p, PartLabel::A, PartLabel::B));
    if (c > result.value) {
      result.value = c;
      result.best = std::move(p);
    }
  });
  if (result.value < 0.0)
    fail(ErrorKind::EmptyPart, "no admissible 3-partition found", 0);
  return result;
}

}  // namespace circa
