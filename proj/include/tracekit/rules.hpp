#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "tracekit/graph.hpp"
#include "tracekit/model.hpp"

namespace tracekit {

/// One rule violation. Findings are facts, not exceptions: validation always
/// completes and reports everything it saw. A finding whose declaration
/// carries a matching `// tracekit:allow(Rn)` comment is kept but marked
/// suppressed, so reports can count it without failing the run.
struct Finding {
  std::string rule_id;
  Severity severity = Severity::Warning;
  std::vector<EntityId> subjects;
  std::string message;
  std::optional<SourceSpan> span;
  bool suppressed = false;

  friend bool operator==(const Finding& a, const Finding& b) {
    return a.rule_id == b.rule_id && a.severity == b.severity &&
           a.subjects == b.subjects && a.message == b.message &&
           a.span == b.span && a.suppressed == b.suppressed;
  }
};

struct RuleConfig {
  /// Rules to evaluate; disabling a rule removes exactly its findings.
  std::set<std::string> enabled = all_rule_ids();
  std::map<std::string, Severity> severity_overrides;
  /// Gates the criticality-monotonicity rule (R11), whose reading of the
  /// hierarchy is an interpretation some teams invert.
  bool criticality_monotone = true;
};

// --- shared obligation predicates ---
//
// Rules and coverage statistics must agree exactly (coverage 100% if and
// only if the matching rule is silent), so both are expressed through these
// predicates.

namespace detail {

inline bool requirement_is_verified(const TraceGraph& g, const EntityId& id) {
  for (const EntityId& s : g.sources(id, EdgeKind::Verify))
    if (g.kind_of(s) == EntityKind::TestCase) return true;
  return false;
}

inline bool risk_is_covered(const TraceGraph& g, const EntityId& id) {
  return !g.sources(id, EdgeKind::Covers).empty();
}

/// An acquirer/stakeholder requirement is transformed when some technical
/// requirement is reachable through one or more derive edges.
inline bool requirement_is_transformed(const TraceGraph& g,
                                       const EntityId& id) {
  auto closure = reachable(g, {id}, {{EdgeKind::Derive, Direction::Forward}});
  for (const EntityId& v : closure.value())
    if (g.kind_of(v) == EntityKind::SystemTechnicalRequirement) return true;
  return false;
}

/// A technical requirement is accounted for when some element satisfies it,
/// or when it defers downstream through a derive/refine edge.
inline bool technical_is_satisfied(const TraceGraph& g, const EntityId& id) {
  return !g.sources(id, EdgeKind::Satisfy).empty() ||
         !g.targets(id, EdgeKind::Derive).empty() ||
         !g.targets(id, EdgeKind::Refine).empty();
}

inline bool logical_is_allocated(const TraceGraph& g, const EntityId& id) {
  for (const EntityId& t : g.targets(id, EdgeKind::Allocate))
    if (g.kind_of(t) == EntityKind::Physical) return true;
  return false;
}

/// A safety requirement is grounded when it, or any requirement it descends
/// from along derive/refine edges, has an outgoing covers edge to a risk.
inline bool safety_is_grounded(const TraceGraph& g, const EntityId& id) {
  if (!g.targets(id, EdgeKind::Covers).empty()) return true;
  auto ancestors = reachable(g, {id},
                             {{EdgeKind::Derive, Direction::Reverse},
                              {EdgeKind::Refine, Direction::Reverse}});
  for (const EntityId& a : ancestors.value())
    if (!g.targets(a, EdgeKind::Covers).empty()) return true;
  return false;
}

class RuleEngine {
 public:
  RuleEngine(const Model& model, const TraceGraph& graph,
             const RuleConfig& config)
      : model_(model), graph_(graph), config_(config) {}

  std::vector<Finding> run() {
    source_consistency();
    stakeholder_transformation();
    technical_satisfaction();
    verification_coverage();
    risk_coverage();
    safety_grounding();
    link_checks();  // R7, R10, R11 share one pass over the links
    acyclic_derivation();
    interface_arity();
    allocation_completeness();
    std::stable_sort(findings_.begin(), findings_.end(),
                     [](const Finding& a, const Finding& b) {
                       return std::make_tuple(rule_number(a.rule_id),
                                              a.subjects) <
                              std::make_tuple(rule_number(b.rule_id),
                                              b.subjects);
                     });
    return std::move(findings_);
  }

 private:
  void emit(const char* rule, Severity severity, std::vector<EntityId> subjects,
            std::string message, std::optional<SourceSpan> span,
            const std::set<std::string>* allows) {
    if (config_.enabled.count(rule) == 0) return;
    auto override_it = config_.severity_overrides.find(rule);
    if (override_it != config_.severity_overrides.end())
      severity = override_it->second;
    Finding f;
    f.rule_id = rule;
    f.severity = severity;
    f.subjects = std::move(subjects);
    f.message = std::move(message);
    f.span = span;
    f.suppressed = allows != nullptr && allows->count(rule) != 0;
    findings_.push_back(std::move(f));
  }

  const std::set<std::string>* entity_allows(const EntityId& id) const {
    return model_.suppressions_for(id);
  }

  // R1: stakeholder requirements must record where they came from.
  void source_consistency() {
    for (const auto& r : model_.requirements()) {
      if (r.req_class != RequirementClass::OtherStakeholder) continue;
      if (r.source && !r.source->empty()) continue;
      emit("R1", Severity::Error, {r.id},
           "stakeholder requirement '" + r.id +
               "' has no recorded source; origin and stereotype must stay "
               "consistent",
           r.loc, entity_allows(r.id));
    }
  }

  // R2: acquirer/stakeholder requirements must be transformed into technical
  // requirements somewhere down the derive chain.
  void stakeholder_transformation() {
    for (const auto& r : model_.requirements()) {
      if (r.req_class != RequirementClass::Acquirer &&
          r.req_class != RequirementClass::OtherStakeholder)
        continue;
      if (requirement_is_transformed(graph_, r.id)) continue;
      emit("R2", Severity::Warning, {r.id},
           "requirement '" + r.id +
               "' is never transformed into a system technical requirement "
               "(no derive path reaches one)",
           r.loc, entity_allows(r.id));
    }
  }

  // R3: technical requirements must be satisfied by an element or deferred
  // downstream.
  void technical_satisfaction() {
    for (const auto& r : model_.requirements()) {
      if (r.req_class != RequirementClass::SystemTechnical) continue;
      if (technical_is_satisfied(graph_, r.id)) continue;
      emit("R3", Severity::Warning, {r.id},
           "technical requirement '" + r.id +
               "' is neither satisfied by a solution element nor derived "
               "onward",
           r.loc, entity_allows(r.id));
    }
  }

  // R4: every requirement needs a verifying test case; the gap is an error
  // for safety requirements, whose verification is planned at definition.
  void verification_coverage() {
    for (const auto& r : model_.requirements()) {
      if (requirement_is_verified(graph_, r.id)) continue;
      emit("R4", r.safety ? Severity::Error : Severity::Warning, {r.id},
           std::string(r.safety ? "safety requirement '" : "requirement '") +
               r.id + "' is not verified by any test case",
           r.loc, entity_allows(r.id));
    }
  }

  // R5: every identified risk must be taken into account by some
  // requirement.
  void risk_coverage() {
    for (const auto& k : model_.risks()) {
      if (risk_is_covered(graph_, k.id)) continue;
      emit("R5", Severity::Error, {k.id},
           "risk '" + k.id + "' is not covered by any safety requirement",
           k.loc, entity_allows(k.id));
    }
  }

  // R6: safety requirements must trace to a risk, directly or via the
  // requirements they descend from.
  void safety_grounding() {
    for (const auto& r : model_.requirements()) {
      if (!r.safety) continue;
      if (safety_is_grounded(graph_, r.id)) continue;
      emit("R6", Severity::Warning, {r.id},
           "safety requirement '" + r.id +
               "' does not trace to a risk (no covers link on it or on any "
               "requirement it derives from)",
           r.loc, entity_allows(r.id));
    }
  }

  // R7: link-type constraint table. R10: test cases and risks stay in their
  // verification/risk roles. R11: criticality may not decrease along
  // derive/refine between safety requirements. All three inspect each link
  // once.
  void link_checks() {
    for (std::size_t i = 0; i < model_.links().size(); ++i) {
      const Link& link = model_.links()[i];
      const std::set<std::string>* allows = model_.link_suppressions(i);
      EntityKind sk = *model_.entity_kind(link.source);
      EntityKind tk = *model_.entity_kind(link.target);

      bool source_is_safety = false;
      if (const auto* r = model_.find_requirement(link.source))
        source_is_safety = r->safety;

      if (!link_allowed(link.kind, sk, tk, source_is_safety)) {
        std::string message = std::string(to_string(link.kind)) +
                              " link from " + to_string(sk) + " '" +
                              link.source + "' to " + to_string(tk) + " '" +
                              link.target + "' is not an allowed combination";
        if (link.kind == LinkKind::Covers && is_requirement_kind(sk) &&
            tk == EntityKind::Risk && !source_is_safety)
          message = "covers link from '" + link.source + "' to '" +
                    link.target +
                    "': only safety requirements may cover risks";
        emit("R7", Severity::Error, {link.source, link.target},
             std::move(message), link.loc, allows);
      }

      std::vector<std::string> separation;
      if (sk == EntityKind::TestCase && link.kind != LinkKind::Verify)
        separation.push_back("a test case may only be the source of verify links");
      if (tk == EntityKind::TestCase)
        separation.push_back("a test case may not be a link target");
      if (sk == EntityKind::Risk)
        separation.push_back("a risk may not be a link source");
      if (tk == EntityKind::Risk && link.kind != LinkKind::Covers)
        separation.push_back("a risk may only be the target of covers links");
      if (!separation.empty()) {
        std::string message = std::string(to_string(link.kind)) +
                              " link '" + link.source + " -> " + link.target +
                              "' mixes verification and solution concepts: ";
        for (std::size_t p = 0; p < separation.size(); ++p) {
          if (p > 0) message += "; ";
          message += separation[p];
        }
        emit("R10", Severity::Error, {link.source, link.target},
             std::move(message), link.loc, allows);
      }

      if (config_.criticality_monotone &&
          (link.kind == LinkKind::Derive || link.kind == LinkKind::Refine)) {
        const auto* src = model_.find_requirement(link.source);
        const auto* dst = model_.find_requirement(link.target);
        if (src != nullptr && dst != nullptr && src->safety && dst->safety &&
            src->criticality && dst->criticality &&
            static_cast<int>(*dst->criticality) <
                static_cast<int>(*src->criticality)) {
          emit("R11", Severity::Warning, {link.source, link.target},
               std::string("criticality decreases along this ") +
                   to_string(link.kind) + " link: '" + link.source + "' is " +
                   to_string(*src->criticality) + " but '" + link.target +
                   "' is " + to_string(*dst->criticality),
               link.loc, allows);
        }
      }
    }
  }

  // R8: the derive/refine subgraph must stay a DAG; each elementary cycle is
  // one finding. Suppression is keyed on the cycle's smallest id, since a
  // cycle has no single declaration of its own.
  void acyclic_derivation() {
    auto cycles =
        find_cycles(graph_, {EdgeKind::Derive, EdgeKind::Refine});
    for (const auto& cycle : cycles) {
      std::string message = "derivation cycle: ";
      for (const EntityId& id : cycle) message += id + " -> ";
      message += cycle.front();
      emit("R8", Severity::Error, cycle, std::move(message),
           model_.location_of(cycle.front()), entity_allows(cycle.front()));
    }
  }

  // R9: an interface must join at least two distinct physical elements.
  void interface_arity() {
    for (const auto& e : model_.elements()) {
      if (e.kind != ElementKind::Interface) continue;
      std::set<EntityId> physical;
      for (const EntityId& c : e.connects)
        if (model_.entity_kind(c) == EntityKind::Physical) physical.insert(c);
      if (physical.size() >= 2) continue;
      emit("R9", Severity::Error, {e.id},
           "interface '" + e.id + "' connects " +
               std::to_string(physical.size()) +
               " distinct physical element(s); at least 2 are required",
           e.loc, entity_allows(e.id));
    }
  }

  // R12: logical elements must land on the physical architecture.
  void allocation_completeness() {
    for (const auto& e : model_.elements()) {
      if (e.kind != ElementKind::Logical) continue;
      if (logical_is_allocated(graph_, e.id)) continue;
      emit("R12", Severity::Warning, {e.id},
           "logical element '" + e.id +
               "' is not allocated to any physical element",
           e.loc, entity_allows(e.id));
    }
  }

  const Model& model_;
  const TraceGraph& graph_;
  const RuleConfig& config_;
  std::vector<Finding> findings_;
};

}  // namespace detail

/// Evaluates every enabled rule; deterministic: findings sorted by rule
/// number, then subjects.
inline std::vector<Finding> validate(const Model& model,
                                     const TraceGraph& graph,
                                     const RuleConfig& config = RuleConfig{}) {
  return detail::RuleEngine(model, graph, config).run();
}

// --- coverage statistics ---

/// Satisfied-obligation ratio. A total of zero is vacuously complete: empty
/// models lint clean.
struct CoverageRatio {
  std::size_t covered = 0;
  std::size_t total = 0;

  double percent() const {
    if (total == 0) return 100.0;
    return 100.0 * static_cast<double>(covered) / static_cast<double>(total);
  }

  friend bool operator==(const CoverageRatio& a, const CoverageRatio& b) {
    return a.covered == b.covered && a.total == b.total;
  }
};

struct CoverageStats {
  CoverageRatio verification;    // requirements with a verifying test case
  CoverageRatio risk;            // risks covered by a requirement
  CoverageRatio transformation;  // acquirer/stakeholder reqs derived to technical
  CoverageRatio satisfaction;    // technical reqs satisfied or deferred
  CoverageRatio allocation;      // logical elements allocated to physical
  std::map<EntityKind, std::size_t> entity_counts;  // all kinds, zeros kept
  std::map<LinkKind, std::size_t> link_counts;      // all kinds, zeros kept
};

inline CoverageStats coverage_stats(const Model& model,
                                    const TraceGraph& graph) {
  CoverageStats stats;

  for (int k = 0; k <= static_cast<int>(EntityKind::Risk); ++k)
    stats.entity_counts[static_cast<EntityKind>(k)] = 0;
  for (int k = 0; k <= static_cast<int>(LinkKind::Covers); ++k)
    stats.link_counts[static_cast<LinkKind>(k)] = 0;
  for (const EntityId& id : graph.nodes())
    ++stats.entity_counts[*graph.kind_of(id)];
  for (const auto& link : model.links()) ++stats.link_counts[link.kind];

  for (const auto& r : model.requirements()) {
    ++stats.verification.total;
    if (detail::requirement_is_verified(graph, r.id))
      ++stats.verification.covered;
    if (r.req_class == RequirementClass::Acquirer ||
        r.req_class == RequirementClass::OtherStakeholder) {
      ++stats.transformation.total;
      if (detail::requirement_is_transformed(graph, r.id))
        ++stats.transformation.covered;
    }
    if (r.req_class == RequirementClass::SystemTechnical) {
      ++stats.satisfaction.total;
      if (detail::technical_is_satisfied(graph, r.id))
        ++stats.satisfaction.covered;
    }
  }
  for (const auto& k : model.risks()) {
    ++stats.risk.total;
    if (detail::risk_is_covered(graph, k.id)) ++stats.risk.covered;
  }
  for (const auto& e : model.elements()) {
    if (e.kind != ElementKind::Logical) continue;
    ++stats.allocation.total;
    if (detail::logical_is_allocated(graph, e.id)) ++stats.allocation.covered;
  }
  return stats;
}

}  // namespace tracekit
