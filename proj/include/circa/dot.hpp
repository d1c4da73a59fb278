#pragma once

#include <sstream>
#include <string>

#include "circa/embedding.hpp"
#include "circa/partition.hpp"
#include "circa/potential.hpp"

namespace circa {

namespace detail {

inline std::string fmt(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

}  // namespace detail

/// Directed flux graph: arrows along positive flux, weight labels.
inline std::string export_flux_dot(const FlowGraph& g) {
  std::ostringstream os;
  os << "digraph flux {\n";
  for (int v = 0; v < g.n; ++v) os << "  v" << v + 1 << " [label=\"" << v + 1 << "\"];\n";
  for (const auto& e : g.edges) {
    const int from = e.flux >= 0.0 ? e.u : e.v;
    const int to = e.flux >= 0.0 ? e.v : e.u;
    os << "  v" << from + 1 << " -> v" << to + 1 << " [label=\"" << detail::fmt(e.weight())
       << "\"";
    if (e.chord) os << " style=dashed";
    os << "];\n";
  }
  os << "}\n";
  return os.str();
}

/// Triangulated graph as an undirected drawing; chords dashed.
inline std::string export_triangulated_dot(const TriangulatedGraph& t) {
  std::ostringstream os;
  os << "graph triangulated {\n";
  for (int v = 0; v < t.graph.n; ++v) os << "  v" << v + 1 << " [label=\"" << v + 1 << "\"];\n";
  for (const auto& e : t.graph.edges) {
    os << "  v" << e.u + 1 << " -- v" << e.v + 1;
    if (e.chord)
      os << " [style=dashed]";
    else
      os << " [label=\"" << detail::fmt(e.flux) << "\"]";
    os << ";\n";
  }
  os << "}\n";
  return os.str();
}

/// Dual graph; face nodes annotated with psi when available.
inline std::string export_dual_dot(const DualGraph& d, const CurlPotential* psi = nullptr) {
  std::ostringstream os;
  os << "graph dual {\n";
  for (int f = 0; f < d.vertex_count; ++f) {
    os << "  f" << f << " [label=\"f" << f;
    if (psi) os << "\\npsi=" << detail::fmt(psi->values[f]);
    os << "\"";
    if (f == 0) os << " shape=doublecircle";
    os << "];\n";
  }
  for (const auto& e : d.edges) {
    os << "  f" << e.face_a << " -- f" << e.face_b << " [label=\"" << e.u + 1 << "-" << e.v + 1
       << "\"";
    if (e.chord) os << " style=dashed";
    os << "];\n";
  }
  os << "}\n";
  return os.str();
}

/// Flux graph with parts rendered as fill colors.
inline std::string export_partition_dot(const FlowGraph& g, const ThreePartition& p) {
  static const char* colors[3] = {"palegreen", "lightcoral", "lightskyblue"};
  std::ostringstream os;
  os << "digraph partition {\n  node [style=filled];\n";
  for (int v = 0; v < g.n; ++v)
    os << "  v" << v + 1 << " [label=\"" << v + 1 << "\" fillcolor=\""
       << colors[static_cast<int>(p.labels[v])] << "\"];\n";
  for (const auto& e : g.edges) {
    if (e.chord) continue;
    const int from = e.flux >= 0.0 ? e.u : e.v;
    const int to = e.flux >= 0.0 ? e.v : e.u;
    os << "  v" << from + 1 << " -> v" << to + 1 << " [label=\"" << detail::fmt(e.weight())
       << "\"];\n";
  }
  os << "}\n";
  return os.str();
}

}  // namespace circa
