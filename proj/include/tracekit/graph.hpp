#pragma once

#include <algorithm>
#include <array>
#include <deque>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include "tracekit/model.hpp"

namespace tracekit {

/// Edge label in the traceability graph: the seven link kinds plus the
/// implicit requirement hierarchy. The first seven values mirror LinkKind.
enum class EdgeKind {
  Derive,
  Refine,
  Satisfy,
  Verify,
  Specify,
  Allocate,
  Covers,
  Parent,
};

inline constexpr int kEdgeKindCount = 8;

inline EdgeKind edge_kind(LinkKind k) {
  return static_cast<EdgeKind>(static_cast<int>(k));
}

inline const char* to_string(EdgeKind k) {
  if (k == EdgeKind::Parent) return "parent";
  return to_string(static_cast<LinkKind>(static_cast<int>(k)));
}

inline std::optional<EdgeKind> parse_edge_kind(std::string_view s) {
  if (s == "parent") return EdgeKind::Parent;
  if (auto link = parse_link_kind(s)) return edge_kind(*link);
  return std::nullopt;
}

enum class Direction { Forward, Reverse };

/// One traversal permission: edges of `kind` may be walked in `direction`.
struct Step {
  EdgeKind kind = EdgeKind::Derive;
  Direction direction = Direction::Forward;

  friend bool operator<(const Step& a, const Step& b) {
    return std::make_tuple(static_cast<int>(a.kind),
                           static_cast<int>(a.direction)) <
           std::make_tuple(static_cast<int>(b.kind),
                           static_cast<int>(b.direction));
  }
  friend bool operator==(const Step& a, const Step& b) {
    return a.kind == b.kind && a.direction == b.direction;
  }
};

struct GraphEdge {
  EdgeKind kind = EdgeKind::Derive;
  EntityId source;
  EntityId target;

  friend bool operator==(const GraphEdge& a, const GraphEdge& b) {
    return a.kind == b.kind && a.source == b.source && a.target == b.target;
  }
};

/// Directed typed graph over every entity of a model: one edge per link plus
/// one Parent edge per requirement with a parent. Immutable after
/// build_graph; all queries are read-only and safe to run concurrently.
class TraceGraph {
 public:
  /// Sorted; equals the model's entity ids.
  const std::vector<EntityId>& nodes() const { return nodes_; }
  /// Model link order, then Parent edges in requirement order.
  const std::vector<GraphEdge>& edges() const { return edges_; }

  bool contains(const EntityId& id) const { return kinds_.count(id) != 0; }

  std::optional<EntityKind> kind_of(const EntityId& id) const {
    auto it = kinds_.find(id);
    if (it == kinds_.end()) return std::nullopt;
    return it->second;
  }

  /// Nodes v with an edge id --kind--> v, sorted by id.
  const std::vector<EntityId>& targets(const EntityId& id, EdgeKind kind) const {
    return lookup(forward_, id, kind);
  }
  /// Nodes v with an edge v --kind--> id, sorted by id.
  const std::vector<EntityId>& sources(const EntityId& id, EdgeKind kind) const {
    return lookup(reverse_, id, kind);
  }

  friend TraceGraph build_graph(const Model& model);

 private:
  using Adjacency =
      std::array<std::map<EntityId, std::vector<EntityId>>, kEdgeKindCount>;

  static const std::vector<EntityId>& lookup(const Adjacency& adj,
                                             const EntityId& id,
                                             EdgeKind kind) {
    static const std::vector<EntityId> empty;
    const auto& per_kind = adj[static_cast<std::size_t>(kind)];
    auto it = per_kind.find(id);
    return it == per_kind.end() ? empty : it->second;
  }

  std::vector<EntityId> nodes_;
  std::map<EntityId, EntityKind> kinds_;
  std::vector<GraphEdge> edges_;
  Adjacency forward_;
  Adjacency reverse_;
};

inline TraceGraph build_graph(const Model& model) {
  TraceGraph g;
  g.nodes_ = model.ids();
  for (const auto& id : g.nodes_) g.kinds_[id] = *model.entity_kind(id);

  for (const auto& link : model.links())
    g.edges_.push_back({edge_kind(link.kind), link.source, link.target});
  for (const auto& req : model.requirements())
    if (req.parent) g.edges_.push_back({EdgeKind::Parent, *req.parent, req.id});

  for (const auto& e : g.edges_) {
    g.forward_[static_cast<std::size_t>(e.kind)][e.source].push_back(e.target);
    g.reverse_[static_cast<std::size_t>(e.kind)][e.target].push_back(e.source);
  }
  for (auto* adj : {&g.forward_, &g.reverse_})
    for (auto& per_kind : *adj)
      for (auto& [id, neighbors] : per_kind)
        std::sort(neighbors.begin(), neighbors.end());
  return g;
}

namespace detail {

/// All nodes one permitted step away from `id`, ascending and deduplicated.
inline std::vector<EntityId> step_neighbors(const TraceGraph& graph,
                                            const EntityId& id,
                                            const std::set<Step>& relation) {
  std::vector<EntityId> out;
  for (const Step& step : relation) {
    const auto& next = step.direction == Direction::Forward
                           ? graph.targets(id, step.kind)
                           : graph.sources(id, step.kind);
    out.insert(out.end(), next.begin(), next.end());
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace detail

/// Breadth-first discovery record for every node reachable from a start set.
/// Start nodes appear only if a path of one or more steps returns to them.
/// Predecessors are deterministic: each BFS layer is expanded in ascending id
/// order, so a node's predecessor is the smallest-id node in the previous
/// layer with a qualifying edge to it.
struct BfsResult {
  std::map<EntityId, int> distance;        // minimal step count, >= 1
  std::map<EntityId, EntityId> predecessor;  // discovery edge, per node
};

inline Result<BfsResult, LookupError> bfs_layers(
    const TraceGraph& graph, const std::set<EntityId>& start,
    const std::set<Step>& relation) {
  for (const auto& id : start)
    if (!graph.contains(id))
      return LookupError{LookupError::Kind::UnknownReference, id};

  BfsResult out;
  std::set<EntityId> expanded(start.begin(), start.end());
  std::vector<EntityId> frontier(start.begin(), start.end());
  int depth = 0;
  while (!frontier.empty()) {
    ++depth;
    std::vector<EntityId> next_frontier;
    for (const EntityId& u : frontier) {
      for (const EntityId& v : detail::step_neighbors(graph, u, relation)) {
        if (out.distance.count(v) != 0) continue;
        out.distance[v] = depth;
        out.predecessor[v] = u;
        if (expanded.insert(v).second) next_frontier.push_back(v);
      }
    }
    // Keep every layer in ascending id order; the predecessor guarantee
    // above depends on expanding smaller ids first.
    std::sort(next_frontier.begin(), next_frontier.end());
    frontier = std::move(next_frontier);
  }
  return out;
}

/// Least fixed point of the step relation applied to `start`; excludes start
/// nodes unless some non-empty path revisits them.
inline Result<std::set<EntityId>, LookupError> reachable(
    const TraceGraph& graph, const std::set<EntityId>& start,
    const std::set<Step>& relation) {
  auto layers = bfs_layers(graph, start, relation);
  if (!layers.ok()) return layers.error();
  std::set<EntityId> out;
  for (const auto& [id, unused] : layers.value().distance) out.insert(id);
  return out;
}

namespace detail {

/// Elementary-cycle enumeration (Johnson's blocked-set search, without the
/// strongly-connected-component prefilter; model graphs are small). For each
/// start node s in ascending order it searches the subgraph restricted to
/// nodes >= s, so every cycle is found exactly once, smallest id first.
class CycleFinder {
 public:
  CycleFinder(const TraceGraph& graph, const std::set<EdgeKind>& kinds) {
    for (const EntityId& u : graph.nodes()) {
      auto& out = adjacency_[u];
      for (EdgeKind kind : kinds) {
        const auto& ts = graph.targets(u, kind);
        out.insert(out.end(), ts.begin(), ts.end());
      }
      std::sort(out.begin(), out.end());
      out.erase(std::unique(out.begin(), out.end()), out.end());
    }
  }

  std::vector<std::vector<EntityId>> run() {
    for (const auto& [u, unused] : adjacency_) {
      start_ = u;
      blocked_.clear();
      blocked_by_.clear();
      path_.clear();
      circuit(u);
    }
    std::sort(cycles_.begin(), cycles_.end());
    return std::move(cycles_);
  }

 private:
  bool circuit(const EntityId& u) {
    bool found = false;
    path_.push_back(u);
    blocked_.insert(u);
    for (const EntityId& v : adjacency_[u]) {
      if (v < start_) continue;
      if (v == start_) {
        cycles_.push_back(path_);
        found = true;
      } else if (blocked_.count(v) == 0) {
        if (circuit(v)) found = true;
      }
    }
    if (found) {
      unblock(u);
    } else {
      for (const EntityId& v : adjacency_[u])
        if (v >= start_) blocked_by_[v].insert(u);
    }
    path_.pop_back();
    return found;
  }

  void unblock(const EntityId& u) {
    blocked_.erase(u);
    auto it = blocked_by_.find(u);
    if (it == blocked_by_.end()) return;
    std::set<EntityId> waiting = std::move(it->second);
    blocked_by_.erase(it);
    for (const EntityId& w : waiting)
      if (blocked_.count(w) != 0) unblock(w);
  }

  std::map<EntityId, std::vector<EntityId>> adjacency_;
  EntityId start_;
  std::set<EntityId> blocked_;
  std::map<EntityId, std::set<EntityId>> blocked_by_;
  std::vector<EntityId> path_;
  std::vector<std::vector<EntityId>> cycles_;
};

}  // namespace detail

/// Every elementary cycle in the subgraph restricted to `kinds`. Each cycle
/// lists its nodes in edge order starting from its smallest id; the list is
/// sorted. Empty exactly when the restricted subgraph is a DAG.
inline std::vector<std::vector<EntityId>> find_cycles(
    const TraceGraph& graph, const std::set<EdgeKind>& kinds) {
  return detail::CycleFinder(graph, kinds).run();
}

// --- traceability matrix ---

/// Entity-kind filter for matrix rows and columns: one of the nine concrete
/// kinds, or a union over all requirements or all solution elements.
enum class KindSelector {
  Acquirer,
  Stakeholder,
  Technical,
  Specified,
  AnyRequirement,
  Logical,
  Physical,
  Interface,
  AnyElement,
  TestCase,
  Risk,
};

inline const char* to_string(KindSelector s) {
  switch (s) {
    case KindSelector::Acquirer: return "acquirer";
    case KindSelector::Stakeholder: return "stakeholder";
    case KindSelector::Technical: return "technical";
    case KindSelector::Specified: return "specified";
    case KindSelector::AnyRequirement: return "requirement";
    case KindSelector::Logical: return "logical";
    case KindSelector::Physical: return "physical";
    case KindSelector::Interface: return "interface";
    case KindSelector::AnyElement: return "element";
    case KindSelector::TestCase: return "testcase";
    case KindSelector::Risk: return "risk";
  }
  return "requirement";
}

inline std::optional<KindSelector> parse_kind_selector(std::string_view s) {
  if (s == "acquirer") return KindSelector::Acquirer;
  if (s == "stakeholder") return KindSelector::Stakeholder;
  if (s == "technical") return KindSelector::Technical;
  if (s == "specified") return KindSelector::Specified;
  if (s == "requirement") return KindSelector::AnyRequirement;
  if (s == "logical") return KindSelector::Logical;
  if (s == "physical") return KindSelector::Physical;
  if (s == "interface") return KindSelector::Interface;
  if (s == "element") return KindSelector::AnyElement;
  if (s == "testcase") return KindSelector::TestCase;
  if (s == "risk") return KindSelector::Risk;
  return std::nullopt;
}

inline bool selector_matches(KindSelector s, EntityKind k) {
  switch (s) {
    case KindSelector::Acquirer: return k == EntityKind::AcquirerRequirement;
    case KindSelector::Stakeholder:
      return k == EntityKind::OtherStakeholderRequirement;
    case KindSelector::Technical:
      return k == EntityKind::SystemTechnicalRequirement;
    case KindSelector::Specified: return k == EntityKind::SpecifiedRequirement;
    case KindSelector::AnyRequirement: return is_requirement_kind(k);
    case KindSelector::Logical: return k == EntityKind::Logical;
    case KindSelector::Physical: return k == EntityKind::Physical;
    case KindSelector::Interface: return k == EntityKind::Interface;
    case KindSelector::AnyElement:
      return k == EntityKind::Logical || k == EntityKind::Physical ||
             k == EntityKind::Interface;
    case KindSelector::TestCase: return k == EntityKind::TestCase;
    case KindSelector::Risk: return k == EntityKind::Risk;
  }
  return false;
}

struct TraceMatrix {
  std::vector<EntityId> rows;     // sorted by id
  std::vector<EntityId> columns;  // sorted by id
  std::vector<std::vector<bool>> cells;  // cells[i][j]: rows[i] relates to columns[j]
  KindSelector row_kind = KindSelector::AnyRequirement;
  KindSelector column_kind = KindSelector::AnyRequirement;
  EdgeKind relation = EdgeKind::Derive;
  bool transitive = false;
};

/// Relation matrix between two entity-kind slices. Direct mode marks single
/// forward edges of `relation`; transitive mode marks any forward path of one
/// or more such edges.
inline TraceMatrix trace_matrix(const TraceGraph& graph, KindSelector row_kind,
                                KindSelector column_kind, EdgeKind relation,
                                bool transitive) {
  TraceMatrix m;
  m.row_kind = row_kind;
  m.column_kind = column_kind;
  m.relation = relation;
  m.transitive = transitive;
  for (const EntityId& id : graph.nodes()) {
    EntityKind k = *graph.kind_of(id);
    if (selector_matches(row_kind, k)) m.rows.push_back(id);
    if (selector_matches(column_kind, k)) m.columns.push_back(id);
  }

  std::map<EntityId, std::size_t> column_index;
  for (std::size_t j = 0; j < m.columns.size(); ++j)
    column_index[m.columns[j]] = j;

  m.cells.assign(m.rows.size(),
                 std::vector<bool>(m.columns.size(), false));
  const std::set<Step> relation_step = {{relation, Direction::Forward}};
  for (std::size_t i = 0; i < m.rows.size(); ++i) {
    if (transitive) {
      auto closure = reachable(graph, {m.rows[i]}, relation_step);
      for (const EntityId& id : closure.value()) {
        auto it = column_index.find(id);
        if (it != column_index.end()) m.cells[i][it->second] = true;
      }
    } else {
      for (const EntityId& id : graph.targets(m.rows[i], relation)) {
        auto it = column_index.find(id);
        if (it != column_index.end()) m.cells[i][it->second] = true;
      }
    }
  }
  return m;
}

}  // namespace tracekit
