#pragma once

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "tracekit/graph.hpp"
#include "tracekit/model.hpp"

namespace tracekit {

/// How a change travels across one edge kind. Off entries take no part in
/// propagation; they exist so configuration can switch a kind off without
/// removing it from the table.
enum class Propagation { Forward, Reverse, Both, Off };

inline const char* to_string(Propagation p) {
  switch (p) {
    case Propagation::Forward: return "forward";
    case Propagation::Reverse: return "reverse";
    case Propagation::Both: return "both";
    case Propagation::Off: return "off";
  }
  return "?";
}

inline std::optional<Propagation> parse_propagation(std::string_view s) {
  if (s == "forward") return Propagation::Forward;
  if (s == "reverse") return Propagation::Reverse;
  if (s == "both") return Propagation::Both;
  if (s == "off") return Propagation::Off;
  return std::nullopt;
}

struct PropagationTable {
  std::map<EdgeKind, Propagation> entries;
};

/// The normative default: changes flow down the derivation/refinement/
/// hierarchy/allocation edges, back up satisfaction and verification edges
/// (a requirement change invalidates its satisfying elements and its test
/// cases), both ways across specification (specified requirement and
/// specified element are co-developed), and forward along covers so a safety
/// requirement change challenges its risks.
inline PropagationTable default_propagation() {
  PropagationTable t;
  t.entries = {
      {EdgeKind::Derive, Propagation::Forward},
      {EdgeKind::Refine, Propagation::Forward},
      {EdgeKind::Satisfy, Propagation::Reverse},
      {EdgeKind::Verify, Propagation::Reverse},
      {EdgeKind::Specify, Propagation::Both},
      {EdgeKind::Allocate, Propagation::Forward},
      {EdgeKind::Covers, Propagation::Forward},
      {EdgeKind::Parent, Propagation::Forward},
  };
  return t;
}

/// Expands the table into concrete traversal steps; Both yields two steps.
inline std::set<Step> expand(const PropagationTable& table) {
  std::set<Step> steps;
  for (const auto& [kind, direction] : table.entries) {
    if (direction == Propagation::Forward || direction == Propagation::Both)
      steps.insert({kind, Direction::Forward});
    if (direction == Propagation::Reverse || direction == Propagation::Both)
      steps.insert({kind, Direction::Reverse});
  }
  return steps;
}

struct ImpactedNode {
  EntityId id;
  int distance = 0;             // minimal step count from the change set
  std::vector<EntityId> path;   // witness: changed node ... id

  friend bool operator==(const ImpactedNode& a, const ImpactedNode& b) {
    return a.id == b.id && a.distance == b.distance && a.path == b.path;
  }
};

struct ImpactResult {
  std::set<EntityId> changed;
  std::vector<ImpactedNode> impacted;       // sorted by id; excludes changed
  std::vector<EntityId> challenged_risks;   // sorted
  std::vector<EntityId> stale_testcases;    // sorted
};

struct ImpactError {
  enum class Kind { UnknownReference, EmptyChangeSet };
  Kind kind = Kind::EmptyChangeSet;
  EntityId id;  // offending id for UnknownReference
};

/// Change-impact closure. Impacted nodes are everything reachable from the
/// change set under the propagation table, with BFS-minimal distances and one
/// witness path each (ties broken toward smallest ids). Challenged risks add
/// every risk covered by a changed or impacted safety requirement, so a risk
/// stays visible even when covers edges do not propagate. Stale test cases
/// are those verifying any changed or impacted requirement.
inline Result<ImpactResult, ImpactError> impact(const Model& model,
                                                const TraceGraph& graph,
                                                const std::set<EntityId>& changed,
                                                const PropagationTable& table) {
  if (changed.empty())
    return ImpactError{ImpactError::Kind::EmptyChangeSet, {}};
  for (const EntityId& id : changed)
    if (!graph.contains(id))
      return ImpactError{ImpactError::Kind::UnknownReference, id};

  ImpactResult result;
  result.changed = changed;

  auto layers = bfs_layers(graph, changed, expand(table));
  const BfsResult& bfs = layers.value();

  for (const auto& [id, distance] : bfs.distance) {
    if (changed.count(id) != 0) continue;
    ImpactedNode node;
    node.id = id;
    node.distance = distance;
    EntityId cursor = id;
    node.path.push_back(cursor);
    while (changed.count(cursor) == 0) {
      cursor = bfs.predecessor.at(cursor);
      node.path.push_back(cursor);
    }
    std::reverse(node.path.begin(), node.path.end());
    result.impacted.push_back(std::move(node));
  }

  std::set<EntityId> touched = changed;
  for (const auto& node : result.impacted) touched.insert(node.id);

  std::set<EntityId> risks;
  std::set<EntityId> testcases;
  for (const auto& node : result.impacted)
    if (graph.kind_of(node.id) == EntityKind::Risk) risks.insert(node.id);
  for (const EntityId& id : touched) {
    auto kind = graph.kind_of(id);
    if (!kind || !is_requirement_kind(*kind)) continue;
    if (model.find_requirement(id)->safety)
      for (const EntityId& risk : graph.targets(id, EdgeKind::Covers))
        if (graph.kind_of(risk) == EntityKind::Risk) risks.insert(risk);
    for (const EntityId& tc : graph.sources(id, EdgeKind::Verify))
      if (graph.kind_of(tc) == EntityKind::TestCase) testcases.insert(tc);
  }
  result.challenged_risks.assign(risks.begin(), risks.end());
  result.stale_testcases.assign(testcases.begin(), testcases.end());
  return result;
}

}  // namespace tracekit
