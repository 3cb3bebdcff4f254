#pragma once

#include <algorithm>
#include <string>
#include <tuple>
#include <vector>

#include "tracekit/graph.hpp"
#include "tracekit/model.hpp"

namespace tracekit {

namespace detail {

inline const char* dot_shape(EntityKind kind) {
  switch (kind) {
    case EntityKind::AcquirerRequirement:
    case EntityKind::OtherStakeholderRequirement:
    case EntityKind::SystemTechnicalRequirement:
    case EntityKind::SpecifiedRequirement:
      return "box";
    case EntityKind::Logical: return "ellipse";
    case EntityKind::Physical: return "component";
    case EntityKind::Interface: return "diamond";
    case EntityKind::TestCase: return "note";
    case EntityKind::Risk: return "octagon";
  }
  return "box";
}

}  // namespace detail

/// Renders the traceability graph as DOT. Nodes are shaped by entity kind
/// and edges labeled by link kind, with the requirement hierarchy drawn
/// dashed. Nodes sorted by id and edges by (kind, source, target), so equal
/// models produce byte-identical output.
inline std::string export_dot(const TraceGraph& graph) {
  std::string out = "digraph trace {\n";
  for (const EntityId& id : graph.nodes()) {
    out += "  \"" + id + "\" [shape=" + detail::dot_shape(*graph.kind_of(id)) +
           "];\n";
  }
  std::vector<GraphEdge> edges = graph.edges();
  std::sort(edges.begin(), edges.end(),
            [](const GraphEdge& a, const GraphEdge& b) {
              return std::make_tuple(static_cast<int>(a.kind), a.source,
                                     a.target) <
                     std::make_tuple(static_cast<int>(b.kind), b.source,
                                     b.target);
            });
  for (const GraphEdge& e : edges) {
    out += "  \"" + e.source + "\" -> \"" + e.target +
           "\" [label=" + to_string(e.kind);
    if (e.kind == EdgeKind::Parent) out += " style=dashed";
    out += "];\n";
  }
  out += "}\n";
  return out;
}

}  // namespace tracekit
