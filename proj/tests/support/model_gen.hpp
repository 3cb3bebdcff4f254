#pragma once

// Seeded random model generator for property tests. Produces structurally
// valid models (build_model always succeeds); rule findings are expected and
// welcome. Link legality and derivation acyclicity are controllable so each
// property can get the graph shape it needs.

#include <stdexcept>
#include <cstdio>
#include <map>
#include <random>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "tracekit/model.hpp"

namespace model_gen {

using tracekit::EntityId;
using tracekit::EntityKind;
using tracekit::LinkKind;

struct GenOptions {
  std::size_t max_requirements = 40;
  std::size_t max_elements = 30;
  std::size_t max_testcases = 15;
  std::size_t max_risks = 15;
  /// Only emit links the constraint table allows (rule R7 stays silent).
  bool legal_links_only = true;
  /// Keep derive/refine edges pointed from lower to higher ids, so the
  /// derivation subgraph is a DAG and cycle findings stay off.
  bool acyclic_derivation = true;
  /// Attach random tracekit:allow sets to some entities and links.
  bool with_suppressions = false;
};

namespace detail {

inline int pick(std::mt19937& rng, int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(rng);
}

inline bool chance(std::mt19937& rng, double p) {
  return std::uniform_real_distribution<double>(0.0, 1.0)(rng) < p;
}

inline std::string word(std::mt19937& rng) {
  static const char* kWords[] = {"brake",   "door",    "train",  "signal",
                                 "monitor", "command", "stop",   "detect",
                                 "isolate", "report",  "within", "latency"};
  return kWords[pick(rng, 0, 11)];
}

inline std::string sentence(std::mt19937& rng) {
  std::string out;
  int words = pick(rng, 1, 6);
  for (int i = 0; i < words; ++i) {
    if (i > 0) out += ' ';
    out += word(rng);
  }
  // Occasionally exercise the two string escapes.
  if (chance(rng, 0.15)) out += " \"quoted\"";
  if (chance(rng, 0.10)) out += " a\\b";
  return out;
}

inline double positive_real(std::mt19937& rng) {
  return std::uniform_real_distribution<double>(0.0001, 50000.0)(rng);
}

/// Zero-padded ids ("Q007") so lexicographic order equals numeric order.
inline std::string make_id(const char* prefix, std::size_t n) {
  std::string digits = std::to_string(n);
  if (digits.size() < 3) digits.insert(0, 3 - digits.size(), '0');
  return prefix + digits;
}

inline std::set<std::string> random_rules(std::mt19937& rng) {
  std::set<std::string> out;
  int count = pick(rng, 1, 3);
  for (int i = 0; i < count; ++i)
    out.insert("R" + std::to_string(pick(rng, 1, tracekit::kRuleCount)));
  return out;
}

}  // namespace detail

inline tracekit::Model random_model(std::mt19937& rng,
                                    const GenOptions& options = {}) {
  using namespace detail;
  tracekit::ModelInput input;

  std::size_t n_req = pick(rng, 1, static_cast<int>(options.max_requirements));
  std::size_t n_elem = pick(rng, 0, static_cast<int>(options.max_elements));
  std::size_t n_tc = pick(rng, 0, static_cast<int>(options.max_testcases));
  std::size_t n_risk = pick(rng, 0, static_cast<int>(options.max_risks));

  for (std::size_t i = 0; i < n_req; ++i) {
    tracekit::Requirement r;
    r.id = make_id("Q", i);
    r.req_class = static_cast<tracekit::RequirementClass>(pick(rng, 0, 3));
    r.text = sentence(rng);
    if (chance(rng, 0.7)) r.source = sentence(rng);
    r.safety = chance(rng, 0.35);
    if (r.safety || chance(rng, 0.1))
      r.criticality = static_cast<tracekit::Criticality>(pick(rng, 1, 4));
    if (r.safety && chance(rng, 0.6)) r.sil = pick(rng, 1, 4);
    if (r.safety && chance(rng, 0.25)) r.mtbf_hours = positive_real(rng);
    if (r.safety && chance(rng, 0.2)) r.mtbr_hours = positive_real(rng);
    if (r.safety && chance(rng, 0.2)) r.failure_rate_per_hour = positive_real(rng);
    if (i > 0 && chance(rng, 0.25)) r.parent = make_id("Q", pick(rng, 0, static_cast<int>(i) - 1));
    input.requirements.push_back(std::move(r));
  }

  std::vector<EntityId> physical_ids;
  for (std::size_t i = 0; i < n_elem; ++i) {
    tracekit::SolutionElement e;
    e.id = make_id("E", i);
    e.kind = static_cast<tracekit::ElementKind>(pick(rng, 0, 2));
    // Interfaces need physical elements to connect; fall back to physical.
    if (e.kind == tracekit::ElementKind::Interface && physical_ids.size() < 2)
      e.kind = tracekit::ElementKind::Physical;
    e.name = sentence(rng);
    if (e.kind == tracekit::ElementKind::Interface) {
      std::set<EntityId> connects;
      int wanted = pick(rng, 2, 4);
      for (int c = 0; c < wanted; ++c)
        connects.insert(
            physical_ids[pick(rng, 0, static_cast<int>(physical_ids.size()) - 1)]);
      e.connects.assign(connects.begin(), connects.end());
    }
    if (e.kind == tracekit::ElementKind::Physical) physical_ids.push_back(e.id);
    input.elements.push_back(std::move(e));
  }

  for (std::size_t i = 0; i < n_tc; ++i) {
    tracekit::TestCase t;
    t.id = make_id("T", i);
    t.method = static_cast<tracekit::TestMethod>(pick(rng, 0, 4));
    if (chance(rng, 0.6)) t.description = sentence(rng);
    input.testcases.push_back(std::move(t));
  }

  for (std::size_t i = 0; i < n_risk; ++i) {
    tracekit::Risk k;
    k.id = make_id("K", i);
    k.description = sentence(rng);
    k.severity = static_cast<tracekit::RiskSeverity>(pick(rng, 0, 3));
    k.likelihood = static_cast<tracekit::Likelihood>(pick(rng, 0, 3));
    k.tolerability = static_cast<tracekit::Tolerability>(pick(rng, 0, 2));
    input.risks.push_back(std::move(k));
  }

  // Entity pools by kind, for link endpoint selection.
  std::map<EntityKind, std::vector<EntityId>> pool;
  std::vector<EntityId> everything;
  for (const auto& r : input.requirements) {
    pool[kind_of_class(r.req_class)].push_back(r.id);
    everything.push_back(r.id);
  }
  std::vector<const tracekit::Requirement*> safety_reqs;
  for (const auto& r : input.requirements)
    if (r.safety) safety_reqs.push_back(&r);
  for (const auto& e : input.elements) {
    pool[kind_of_element(e.kind)].push_back(e.id);
    everything.push_back(e.id);
  }
  for (const auto& t : input.testcases) {
    pool[EntityKind::TestCase].push_back(t.id);
    everything.push_back(t.id);
  }
  for (const auto& k : input.risks) {
    pool[EntityKind::Risk].push_back(k.id);
    everything.push_back(k.id);
  }

  auto pick_from = [&](EntityKind kind) -> const EntityId* {
    auto it = pool.find(kind);
    if (it == pool.end() || it->second.empty()) return nullptr;
    return &it->second[pick(rng, 0, static_cast<int>(it->second.size()) - 1)];
  };

  std::set<std::tuple<int, EntityId, EntityId>> seen;
  std::size_t attempts = everything.size() * 2;
  for (std::size_t i = 0; i < attempts; ++i) {
    tracekit::Link link;
    const EntityId* source = nullptr;
    const EntityId* target = nullptr;

    if (!options.legal_links_only) {
      link.kind = static_cast<LinkKind>(pick(rng, 0, 6));
      if (everything.size() < 2) break;
      source = &everything[pick(rng, 0, static_cast<int>(everything.size()) - 1)];
      target = &everything[pick(rng, 0, static_cast<int>(everything.size()) - 1)];
    } else {
      switch (pick(rng, 0, 6)) {
        case 0: {  // derive
          link.kind = LinkKind::Derive;
          bool to_specified = chance(rng, 0.3);
          source = pick_from(to_specified
                                 ? EntityKind::SystemTechnicalRequirement
                                 : static_cast<EntityKind>(pick(rng, 0, 2)));
          target = pick_from(to_specified
                                 ? EntityKind::SpecifiedRequirement
                                 : EntityKind::SystemTechnicalRequirement);
          break;
        }
        case 1: {  // refine, within one class
          link.kind = LinkKind::Refine;
          EntityKind cls = static_cast<EntityKind>(pick(rng, 0, 3));
          source = pick_from(cls);
          target = pick_from(cls);
          break;
        }
        case 2:
          link.kind = LinkKind::Satisfy;
          source = pick_from(chance(rng, 0.5) ? EntityKind::Logical
                                              : EntityKind::Physical);
          target = pick_from(EntityKind::SystemTechnicalRequirement);
          break;
        case 3:
          link.kind = LinkKind::Verify;
          source = pick_from(EntityKind::TestCase);
          target = pick_from(static_cast<EntityKind>(pick(rng, 0, 3)));
          break;
        case 4:
          link.kind = LinkKind::Specify;
          source = pick_from(EntityKind::SpecifiedRequirement);
          target = pick_from(static_cast<EntityKind>(
              static_cast<int>(EntityKind::Logical) + pick(rng, 0, 2)));
          break;
        case 5:
          link.kind = LinkKind::Allocate;
          source = pick_from(EntityKind::Logical);
          target = pick_from(EntityKind::Physical);
          break;
        default:
          link.kind = LinkKind::Covers;
          if (!safety_reqs.empty())
            source = &safety_reqs[pick(
                          rng, 0, static_cast<int>(safety_reqs.size()) - 1)]
                          ->id;
          target = pick_from(EntityKind::Risk);
          break;
      }
    }

    if (source == nullptr || target == nullptr || *source == *target) continue;
    link.source = *source;
    link.target = *target;
    if (options.acyclic_derivation &&
        (link.kind == LinkKind::Derive || link.kind == LinkKind::Refine) &&
        link.source >= link.target)
      continue;  // ids are zero-padded, so id order is a topological order
    if (!seen.insert({static_cast<int>(link.kind), link.source, link.target})
             .second)
      continue;
    input.links.push_back(std::move(link));
  }

  if (options.with_suppressions) {
    for (const auto& id : everything)
      if (chance(rng, 0.1)) input.entity_suppressions[id] = random_rules(rng);
    for (std::size_t i = 0; i < input.links.size(); ++i)
      if (chance(rng, 0.1)) input.link_suppressions[i] = random_rules(rng);
  }

  auto built = tracekit::build_model(std::move(input));
  if (!built.ok()) throw std::logic_error("generator produced an invalid model");
  return std::move(built.value());
}

}  // namespace model_gen
