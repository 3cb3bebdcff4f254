#pragma once

#include <algorithm>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "tracekit/diagnostics.hpp"
#include "tracekit/result.hpp"

namespace tracekit {

/// Identifiers share one namespace across every entity kind of a model.
/// Valid ids match [A-Za-z][A-Za-z0-9_-]*.
using EntityId = std::string;

inline bool valid_entity_id(std::string_view id) {
  if (id.empty()) return false;
  auto alpha = [](char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z');
  };
  if (!alpha(id.front())) return false;
  for (char c : id.substr(1)) {
    if (!alpha(c) && !(c >= '0' && c <= '9') && c != '_' && c != '-')
      return false;
  }
  return true;
}

enum class RequirementClass { Acquirer, OtherStakeholder, SystemTechnical, Specified };
enum class Criticality { Low = 1, Medium = 2, High = 3, Catastrophic = 4 };
enum class ElementKind { Logical, Physical, Interface };
enum class TestMethod { Simulation, Test, Prototyping, ModelChecking, Review };
enum class RiskSeverity { Minor, Major, Hazardous, Catastrophic };
enum class Likelihood { Frequent, Probable, Remote, ExtremelyRemote };
enum class Tolerability { Acceptable, Tolerable, Unacceptable };
enum class LinkKind { Derive, Refine, Satisfy, Verify, Specify, Allocate, Covers };

/// Fine-grained kind of a model entity; requirement classes are distinguished
/// because link legality depends on them.
enum class EntityKind {
  AcquirerRequirement,
  OtherStakeholderRequirement,
  SystemTechnicalRequirement,
  SpecifiedRequirement,
  Logical,
  Physical,
  Interface,
  TestCase,
  Risk,
};

inline bool is_requirement_kind(EntityKind k) {
  return k == EntityKind::AcquirerRequirement ||
         k == EntityKind::OtherStakeholderRequirement ||
         k == EntityKind::SystemTechnicalRequirement ||
         k == EntityKind::SpecifiedRequirement;
}

inline EntityKind kind_of_class(RequirementClass c) {
  switch (c) {
    case RequirementClass::Acquirer: return EntityKind::AcquirerRequirement;
    case RequirementClass::OtherStakeholder: return EntityKind::OtherStakeholderRequirement;
    case RequirementClass::SystemTechnical: return EntityKind::SystemTechnicalRequirement;
    case RequirementClass::Specified: return EntityKind::SpecifiedRequirement;
  }
  return EntityKind::AcquirerRequirement;
}

inline EntityKind kind_of_element(ElementKind k) {
  switch (k) {
    case ElementKind::Logical: return EntityKind::Logical;
    case ElementKind::Physical: return EntityKind::Physical;
    case ElementKind::Interface: return EntityKind::Interface;
  }
  return EntityKind::Logical;
}

// --- name tables (concrete DSL syntax and report rendering) ---

inline const char* to_string(RequirementClass c) {
  switch (c) {
    case RequirementClass::Acquirer: return "acquirer";
    case RequirementClass::OtherStakeholder: return "stakeholder";
    case RequirementClass::SystemTechnical: return "technical";
    case RequirementClass::Specified: return "specified";
  }
  return "?";
}

inline const char* to_string(Criticality c) {
  switch (c) {
    case Criticality::Low: return "low";
    case Criticality::Medium: return "medium";
    case Criticality::High: return "high";
    case Criticality::Catastrophic: return "catastrophic";
  }
  return "?";
}

inline const char* to_string(ElementKind k) {
  switch (k) {
    case ElementKind::Logical: return "logical";
    case ElementKind::Physical: return "physical";
    case ElementKind::Interface: return "interface";
  }
  return "?";
}

inline const char* to_string(TestMethod m) {
  switch (m) {
    case TestMethod::Simulation: return "simulation";
    case TestMethod::Test: return "test";
    case TestMethod::Prototyping: return "prototyping";
    case TestMethod::ModelChecking: return "model_checking";
    case TestMethod::Review: return "review";
  }
  return "?";
}

inline const char* to_string(RiskSeverity s) {
  switch (s) {
    case RiskSeverity::Minor: return "minor";
    case RiskSeverity::Major: return "major";
    case RiskSeverity::Hazardous: return "hazardous";
    case RiskSeverity::Catastrophic: return "catastrophic";
  }
  return "?";
}

inline const char* to_string(Likelihood l) {
  switch (l) {
    case Likelihood::Frequent: return "frequent";
    case Likelihood::Probable: return "probable";
    case Likelihood::Remote: return "remote";
    case Likelihood::ExtremelyRemote: return "extremely_remote";
  }
  return "?";
}

inline const char* to_string(Tolerability t) {
  switch (t) {
    case Tolerability::Acceptable: return "acceptable";
    case Tolerability::Tolerable: return "tolerable";
    case Tolerability::Unacceptable: return "unacceptable";
  }
  return "?";
}

inline const char* to_string(LinkKind k) {
  switch (k) {
    case LinkKind::Derive: return "derive";
    case LinkKind::Refine: return "refine";
    case LinkKind::Satisfy: return "satisfy";
    case LinkKind::Verify: return "verify";
    case LinkKind::Specify: return "specify";
    case LinkKind::Allocate: return "allocate";
    case LinkKind::Covers: return "covers";
  }
  return "?";
}

inline const char* to_string(EntityKind k) {
  switch (k) {
    case EntityKind::AcquirerRequirement: return "acquirer requirement";
    case EntityKind::OtherStakeholderRequirement: return "stakeholder requirement";
    case EntityKind::SystemTechnicalRequirement: return "technical requirement";
    case EntityKind::SpecifiedRequirement: return "specified requirement";
    case EntityKind::Logical: return "logical element";
    case EntityKind::Physical: return "physical element";
    case EntityKind::Interface: return "interface element";
    case EntityKind::TestCase: return "test case";
    case EntityKind::Risk: return "risk";
  }
  return "?";
}

inline std::optional<RequirementClass> parse_requirement_class(std::string_view s) {
  if (s == "acquirer") return RequirementClass::Acquirer;
  if (s == "stakeholder") return RequirementClass::OtherStakeholder;
  if (s == "technical") return RequirementClass::SystemTechnical;
  if (s == "specified") return RequirementClass::Specified;
  return std::nullopt;
}

inline std::optional<Criticality> parse_criticality(std::string_view s) {
  if (s == "low") return Criticality::Low;
  if (s == "medium") return Criticality::Medium;
  if (s == "high") return Criticality::High;
  if (s == "catastrophic") return Criticality::Catastrophic;
  return std::nullopt;
}

inline std::optional<ElementKind> parse_element_kind(std::string_view s) {
  if (s == "logical") return ElementKind::Logical;
  if (s == "physical") return ElementKind::Physical;
  if (s == "interface") return ElementKind::Interface;
  return std::nullopt;
}

inline std::optional<TestMethod> parse_test_method(std::string_view s) {
  if (s == "simulation") return TestMethod::Simulation;
  if (s == "test") return TestMethod::Test;
  if (s == "prototyping") return TestMethod::Prototyping;
  if (s == "model_checking") return TestMethod::ModelChecking;
  if (s == "review") return TestMethod::Review;
  return std::nullopt;
}

inline std::optional<RiskSeverity> parse_risk_severity(std::string_view s) {
  if (s == "minor") return RiskSeverity::Minor;
  if (s == "major") return RiskSeverity::Major;
  if (s == "hazardous") return RiskSeverity::Hazardous;
  if (s == "catastrophic") return RiskSeverity::Catastrophic;
  return std::nullopt;
}

inline std::optional<Likelihood> parse_likelihood(std::string_view s) {
  if (s == "frequent") return Likelihood::Frequent;
  if (s == "probable") return Likelihood::Probable;
  if (s == "remote") return Likelihood::Remote;
  if (s == "extremely_remote") return Likelihood::ExtremelyRemote;
  return std::nullopt;
}

inline std::optional<Tolerability> parse_tolerability(std::string_view s) {
  if (s == "acceptable") return Tolerability::Acceptable;
  if (s == "tolerable") return Tolerability::Tolerable;
  if (s == "unacceptable") return Tolerability::Unacceptable;
  return std::nullopt;
}

inline std::optional<LinkKind> parse_link_kind(std::string_view s) {
  if (s == "derive") return LinkKind::Derive;
  if (s == "refine") return LinkKind::Refine;
  if (s == "satisfy") return LinkKind::Satisfy;
  if (s == "verify") return LinkKind::Verify;
  if (s == "specify") return LinkKind::Specify;
  if (s == "allocate") return LinkKind::Allocate;
  if (s == "covers") return LinkKind::Covers;
  return std::nullopt;
}

// --- rule ids ---

// R1..R12 are a stable public contract: they appear in config files, JSON
// reports, and `// tracekit:allow(Rn)` suppression comments stored on models.
inline constexpr int kRuleCount = 12;

inline bool is_known_rule_id(std::string_view id) {
  if (id.size() < 2 || id.size() > 3 || id[0] != 'R') return false;
  int n = 0;
  for (char c : id.substr(1)) {
    if (c < '0' || c > '9') return false;
    n = n * 10 + (c - '0');
  }
  return n >= 1 && n <= kRuleCount;
}

/// Numeric position of a rule id, for catalog-order sorting. Unknown ids sort
/// last.
inline int rule_number(std::string_view id) {
  if (!is_known_rule_id(id)) return kRuleCount + 1;
  int n = 0;
  for (char c : id.substr(1)) n = n * 10 + (c - '0');
  return n;
}

inline std::set<std::string> all_rule_ids() {
  std::set<std::string> out;
  for (int i = 1; i <= kRuleCount; ++i) out.insert("R" + std::to_string(i));
  return out;
}

// --- entities ---

/// One requirement statement with its class stereotype and, when it is a
/// safety requirement, the safety attributes (SIL, criticality, reliability
/// figures). Equality is structural and ignores source locations.
struct Requirement {
  EntityId id;
  RequirementClass req_class = RequirementClass::Acquirer;
  std::string text;
  std::optional<std::string> source;
  bool safety = false;
  std::optional<Criticality> criticality;
  std::optional<int> sil;  // 1..4
  std::optional<double> mtbf_hours;
  std::optional<double> mtbr_hours;
  std::optional<double> failure_rate_per_hour;
  std::optional<EntityId> parent;
  std::optional<SourceSpan> loc;

  friend bool operator==(const Requirement& a, const Requirement& b) {
    return a.id == b.id && a.req_class == b.req_class && a.text == b.text &&
           a.source == b.source && a.safety == b.safety &&
           a.criticality == b.criticality && a.sil == b.sil &&
           a.mtbf_hours == b.mtbf_hours && a.mtbr_hours == b.mtbr_hours &&
           a.failure_rate_per_hour == b.failure_rate_per_hour &&
           a.parent == b.parent;
  }
};

/// A solution element; interfaces are components themselves and name the
/// physical components they connect.
struct SolutionElement {
  EntityId id;
  ElementKind kind = ElementKind::Logical;
  std::string name;
  std::vector<EntityId> connects;  // non-empty only for interfaces
  std::optional<SourceSpan> loc;

  friend bool operator==(const SolutionElement& a, const SolutionElement& b) {
    return a.id == b.id && a.kind == b.kind && a.name == b.name &&
           a.connects == b.connects;
  }
};

struct TestCase {
  EntityId id;
  TestMethod method = TestMethod::Test;
  std::optional<std::string> description;
  std::optional<SourceSpan> loc;

  friend bool operator==(const TestCase& a, const TestCase& b) {
    return a.id == b.id && a.method == b.method && a.description == b.description;
  }
};

struct Risk {
  EntityId id;
  std::string description;
  RiskSeverity severity = RiskSeverity::Minor;
  Likelihood likelihood = Likelihood::Remote;
  Tolerability tolerability = Tolerability::Tolerable;
  std::optional<SourceSpan> loc;

  friend bool operator==(const Risk& a, const Risk& b) {
    return a.id == b.id && a.description == b.description &&
           a.severity == b.severity && a.likelihood == b.likelihood &&
           a.tolerability == b.tolerability;
  }
};

/// A typed, directed traceability edge. `derive A -> B` reads "B is derived
/// from A": the arrow follows the flow from stakeholder need to solution,
/// not the SysML dependency-arrow convention.
struct Link {
  LinkKind kind = LinkKind::Derive;
  EntityId source;
  EntityId target;
  std::optional<SourceSpan> loc;

  friend bool operator==(const Link& a, const Link& b) {
    return a.kind == b.kind && a.source == b.source && a.target == b.target;
  }
};

// --- link constraint table ---

/// Whether a (kind, source kind, target kind) triple is admissible.
/// `source_is_safety` matters only for covers links, which must start at a
/// safety requirement. Violations are representable in a model; rule R7
/// reports them.
inline bool link_allowed(LinkKind kind, EntityKind source, EntityKind target,
                         bool source_is_safety) {
  using EK = EntityKind;
  switch (kind) {
    case LinkKind::Derive:
      if (target == EK::SystemTechnicalRequirement)
        return source == EK::AcquirerRequirement ||
               source == EK::OtherStakeholderRequirement ||
               source == EK::SystemTechnicalRequirement;
      if (target == EK::SpecifiedRequirement)
        return source == EK::SystemTechnicalRequirement;
      return false;
    case LinkKind::Refine:
      return is_requirement_kind(source) && source == target;
    case LinkKind::Satisfy:
      return (source == EK::Logical || source == EK::Physical) &&
             target == EK::SystemTechnicalRequirement;
    case LinkKind::Verify:
      return source == EK::TestCase && is_requirement_kind(target);
    case LinkKind::Specify:
      return source == EK::SpecifiedRequirement &&
             (target == EK::Logical || target == EK::Physical ||
              target == EK::Interface);
    case LinkKind::Allocate:
      return source == EK::Logical && target == EK::Physical;
    case LinkKind::Covers:
      return is_requirement_kind(source) && source_is_safety &&
             target == EK::Risk;
  }
  return false;
}

// --- model construction ---

enum class ModelErrorCode {
  DuplicateId,
  UnknownReference,
  DuplicateLink,
  CyclicParentChain,
  SelfLink,
  InvalidField,
};

struct ModelError {
  ModelErrorCode code;
  std::string message;
  std::vector<EntityId> ids;
  std::optional<SourceSpan> span;
};

inline const char* diagnostic_code(ModelErrorCode c) {
  switch (c) {
    case ModelErrorCode::DuplicateId: return diag::DuplicateId;
    case ModelErrorCode::UnknownReference: return diag::UnknownReference;
    case ModelErrorCode::DuplicateLink: return diag::DuplicateLink;
    case ModelErrorCode::CyclicParentChain: return diag::CyclicParentChain;
    case ModelErrorCode::SelfLink: return diag::SelfLink;
    case ModelErrorCode::InvalidField: return diag::InvalidField;
  }
  return diag::InvalidField;
}

/// Raw, not-yet-validated model content. Suppression sets come from
/// `// tracekit:allow(Rn,...)` comments attached to declarations; link
/// suppressions are keyed by link index.
struct ModelInput {
  std::vector<Requirement> requirements;
  std::vector<SolutionElement> elements;
  std::vector<TestCase> testcases;
  std::vector<Risk> risks;
  std::vector<Link> links;
  std::map<EntityId, std::set<std::string>> entity_suppressions;
  std::map<std::size_t, std::set<std::string>> link_suppressions;
};

struct LookupError {
  enum class Kind { UnknownReference, NotARequirement };
  Kind kind;
  EntityId id;
};

/// The resolved system description. Immutable once built; concurrent reads
/// are safe. Use to_input() to derive a mutation, then rebuild.
class Model {
 public:
  const std::vector<Requirement>& requirements() const { return requirements_; }
  const std::vector<SolutionElement>& elements() const { return elements_; }
  const std::vector<TestCase>& testcases() const { return testcases_; }
  const std::vector<Risk>& risks() const { return risks_; }
  const std::vector<Link>& links() const { return links_; }

  bool contains(const EntityId& id) const { return kinds_.count(id) != 0; }

  /// Total over all ids present in the model; nullopt for absent ids.
  std::optional<EntityKind> entity_kind(const EntityId& id) const {
    auto it = kinds_.find(id);
    if (it == kinds_.end()) return std::nullopt;
    return it->second;
  }

  Result<bool, LookupError> is_safety_requirement(const EntityId& id) const {
    auto it = kinds_.find(id);
    if (it == kinds_.end())
      return LookupError{LookupError::Kind::UnknownReference, id};
    if (!is_requirement_kind(it->second))
      return LookupError{LookupError::Kind::NotARequirement, id};
    return find_requirement(id)->safety;
  }

  const Requirement* find_requirement(const EntityId& id) const {
    auto it = req_index_.find(id);
    return it == req_index_.end() ? nullptr : &requirements_[it->second];
  }
  const SolutionElement* find_element(const EntityId& id) const {
    auto it = elem_index_.find(id);
    return it == elem_index_.end() ? nullptr : &elements_[it->second];
  }
  const TestCase* find_testcase(const EntityId& id) const {
    auto it = tc_index_.find(id);
    return it == tc_index_.end() ? nullptr : &testcases_[it->second];
  }
  const Risk* find_risk(const EntityId& id) const {
    auto it = risk_index_.find(id);
    return it == risk_index_.end() ? nullptr : &risks_[it->second];
  }

  /// Declaration site of an entity, when the model came from source text.
  std::optional<SourceSpan> location_of(const EntityId& id) const;
  std::optional<SourceSpan> link_location(std::size_t link_index) const {
    if (link_index >= links_.size()) return std::nullopt;
    return links_[link_index].loc;
  }

  const std::set<std::string>* suppressions_for(const EntityId& id) const {
    auto it = entity_suppressions_.find(id);
    return it == entity_suppressions_.end() ? nullptr : &it->second;
  }
  const std::set<std::string>* link_suppressions(std::size_t link_index) const {
    auto it = link_suppressions_.find(link_index);
    return it == link_suppressions_.end() ? nullptr : &it->second;
  }

  /// All ids, sorted; one namespace across every entity kind.
  std::vector<EntityId> ids() const {
    std::vector<EntityId> out;
    out.reserve(kinds_.size());
    for (const auto& [id, kind] : kinds_) out.push_back(id);
    return out;
  }

  std::size_t entity_count() const { return kinds_.size(); }

  /// Copies the content back out for mutation-and-rebuild workflows.
  ModelInput to_input() const {
    ModelInput in;
    in.requirements = requirements_;
    in.elements = elements_;
    in.testcases = testcases_;
    in.risks = risks_;
    in.links = links_;
    in.entity_suppressions = entity_suppressions_;
    in.link_suppressions = link_suppressions_;
    return in;
  }

  friend bool operator==(const Model& a, const Model& b) {
    return a.requirements_ == b.requirements_ && a.elements_ == b.elements_ &&
           a.testcases_ == b.testcases_ && a.risks_ == b.risks_ &&
           a.links_ == b.links_ &&
           a.entity_suppressions_ == b.entity_suppressions_ &&
           a.link_suppressions_ == b.link_suppressions_;
  }

  friend Result<Model, std::vector<ModelError>> build_model(ModelInput input);

 private:
  std::vector<Requirement> requirements_;
  std::vector<SolutionElement> elements_;
  std::vector<TestCase> testcases_;
  std::vector<Risk> risks_;
  std::vector<Link> links_;
  std::map<EntityId, EntityKind> kinds_;
  std::map<EntityId, std::size_t> req_index_, elem_index_, tc_index_, risk_index_;
  std::map<EntityId, std::set<std::string>> entity_suppressions_;
  std::map<std::size_t, std::set<std::string>> link_suppressions_;
};

inline std::optional<SourceSpan> Model::location_of(const EntityId& id) const {
  if (const auto* r = find_requirement(id)) return r->loc;
  if (const auto* e = find_element(id)) return e->loc;
  if (const auto* t = find_testcase(id)) return t->loc;
  if (const auto* k = find_risk(id)) return k->loc;
  return std::nullopt;
}

namespace detail {

inline ModelError make_error(ModelErrorCode code, std::string message,
                             std::vector<EntityId> ids,
                             std::optional<SourceSpan> span) {
  return ModelError{code, std::move(message), std::move(ids), std::move(span)};
}

inline void check_requirement_fields(const Requirement& r,
                                     std::vector<ModelError>& errors) {
  auto invalid = [&](std::string msg) {
    errors.push_back(make_error(ModelErrorCode::InvalidField, std::move(msg),
                                {r.id}, r.loc));
  };
  if (r.text.empty())
    invalid("requirement '" + r.id + "' has empty text");
  if (r.sil && (*r.sil < 1 || *r.sil > 4))
    invalid("requirement '" + r.id + "': sil must be between 1 and 4");
  if (r.mtbf_hours && *r.mtbf_hours <= 0.0)
    invalid("requirement '" + r.id + "': mtbf_hours must be positive");
  if (r.mtbr_hours && *r.mtbr_hours <= 0.0)
    invalid("requirement '" + r.id + "': mtbr_hours must be positive");
  if (r.failure_rate_per_hour && *r.failure_rate_per_hour <= 0.0)
    invalid("requirement '" + r.id + "': failure_rate_per_hour must be positive");
  if (!r.safety) {
    if (r.sil)
      invalid("requirement '" + r.id + "': sil is only allowed on safety requirements");
    if (r.mtbf_hours)
      invalid("requirement '" + r.id + "': mtbf_hours is only allowed on safety requirements");
    if (r.mtbr_hours)
      invalid("requirement '" + r.id + "': mtbr_hours is only allowed on safety requirements");
    if (r.failure_rate_per_hour)
      invalid("requirement '" + r.id +
              "': failure_rate_per_hour is only allowed on safety requirements");
  } else if (!r.criticality) {
    invalid("safety requirement '" + r.id + "' must declare a criticality");
  }
}

}  // namespace detail

/// Validates structure and per-entity field invariants and produces a Model.
/// Rejected here: malformed or duplicate ids, dangling references, duplicate
/// links, self links, parent cycles, and field-level violations such as
/// safety attributes on non-safety requirements. Semantic obligations
/// (coverage, link typing, interface arity, stakeholder sources) stay
/// representable and are the rule engine's business.
///
/// All problems are collected; the input is rejected as a whole when any
/// exist. Identical inputs produce structurally identical models.
inline Result<Model, std::vector<ModelError>> build_model(ModelInput input) {
  using detail::make_error;
  std::vector<ModelError> errors;

  Model m;
  m.requirements_ = std::move(input.requirements);
  m.elements_ = std::move(input.elements);
  m.testcases_ = std::move(input.testcases);
  m.risks_ = std::move(input.risks);
  m.links_ = std::move(input.links);
  m.entity_suppressions_ = std::move(input.entity_suppressions);
  m.link_suppressions_ = std::move(input.link_suppressions);

  auto declare = [&](const EntityId& id, EntityKind kind,
                     const std::optional<SourceSpan>& loc) -> bool {
    if (!valid_entity_id(id)) {
      errors.push_back(make_error(
          ModelErrorCode::InvalidField,
          "invalid identifier '" + id +
              "' (expected a letter followed by letters, digits, '_' or '-')",
          {id}, loc));
      return false;
    }
    auto [it, inserted] = m.kinds_.emplace(id, kind);
    if (!inserted) {
      errors.push_back(make_error(ModelErrorCode::DuplicateId,
                                  "duplicate id '" + id + "'", {id}, loc));
      return false;
    }
    return true;
  };

  for (std::size_t i = 0; i < m.requirements_.size(); ++i) {
    const auto& r = m.requirements_[i];
    if (declare(r.id, kind_of_class(r.req_class), r.loc))
      m.req_index_.emplace(r.id, i);
  }
  for (std::size_t i = 0; i < m.elements_.size(); ++i) {
    const auto& e = m.elements_[i];
    if (declare(e.id, kind_of_element(e.kind), e.loc))
      m.elem_index_.emplace(e.id, i);
  }
  for (std::size_t i = 0; i < m.testcases_.size(); ++i) {
    const auto& t = m.testcases_[i];
    if (declare(t.id, EntityKind::TestCase, t.loc)) m.tc_index_.emplace(t.id, i);
  }
  for (std::size_t i = 0; i < m.risks_.size(); ++i) {
    const auto& k = m.risks_[i];
    if (declare(k.id, EntityKind::Risk, k.loc)) m.risk_index_.emplace(k.id, i);
  }

  for (const auto& r : m.requirements_) detail::check_requirement_fields(r, errors);

  // Parent references: must name an existing requirement.
  for (const auto& r : m.requirements_) {
    if (!r.parent) continue;
    auto kind = m.kinds_.find(*r.parent);
    if (kind == m.kinds_.end()) {
      errors.push_back(make_error(
          ModelErrorCode::UnknownReference,
          "parent of '" + r.id + "' references unknown id '" + *r.parent + "'",
          {*r.parent}, r.loc));
    } else if (!is_requirement_kind(kind->second)) {
      errors.push_back(make_error(
          ModelErrorCode::InvalidField,
          "parent of '" + r.id + "' must be a requirement, but '" + *r.parent +
              "' is a " + std::string(to_string(kind->second)),
          {r.id, *r.parent}, r.loc));
    }
  }

  // connects: empty unless interface; every id must resolve. Whether the
  // connected entities are >= 2 distinct physicals is rule R9's check.
  for (const auto& e : m.elements_) {
    if (e.kind != ElementKind::Interface && !e.connects.empty()) {
      errors.push_back(make_error(
          ModelErrorCode::InvalidField,
          "element '" + e.id + "' is not an interface and cannot declare connects",
          {e.id}, e.loc));
    }
    for (const auto& c : e.connects) {
      if (!m.kinds_.count(c)) {
        errors.push_back(make_error(
            ModelErrorCode::UnknownReference,
            "connects of '" + e.id + "' references unknown id '" + c + "'",
            {c}, e.loc));
      }
    }
  }

  std::set<std::tuple<LinkKind, EntityId, EntityId>> seen_links;
  for (const auto& l : m.links_) {
    for (const auto& endpoint : {l.source, l.target}) {
      if (!m.kinds_.count(endpoint)) {
        errors.push_back(make_error(
            ModelErrorCode::UnknownReference,
            std::string(to_string(l.kind)) + " link references unknown id '" +
                endpoint + "'",
            {endpoint}, l.loc));
      }
    }
    if (l.source == l.target) {
      errors.push_back(make_error(
          ModelErrorCode::SelfLink,
          std::string(to_string(l.kind)) + " link from '" + l.source +
              "' to itself",
          {l.source}, l.loc));
    }
    if (!seen_links.emplace(l.kind, l.source, l.target).second) {
      errors.push_back(make_error(
          ModelErrorCode::DuplicateLink,
          "duplicate " + std::string(to_string(l.kind)) + " link " + l.source +
              " -> " + l.target,
          {l.source, l.target}, l.loc));
    }
  }

  // Parent chains must be acyclic. Walk each chain once with memoization.
  {
    enum class Mark { None, InProgress, Done };
    std::map<EntityId, Mark> marks;
    for (const auto& r : m.requirements_) {
      std::vector<EntityId> trail;
      const Requirement* cur = &r;
      while (true) {
        Mark& mark = marks[cur->id];
        if (mark == Mark::Done) break;
        if (mark == Mark::InProgress) {
          // Report the cycle once, from its smallest member.
          auto begin = std::find(trail.begin(), trail.end(), cur->id);
          std::vector<EntityId> cycle(begin, trail.end());
          std::rotate(cycle.begin(),
                      std::min_element(cycle.begin(), cycle.end()),
                      cycle.end());
          std::ostringstream msg;
          msg << "parent chain cycle:";
          for (const auto& id : cycle) msg << ' ' << id;
          errors.push_back(make_error(ModelErrorCode::CyclicParentChain,
                                      msg.str(), cycle,
                                      m.find_requirement(cycle.front())->loc));
          break;
        }
        mark = Mark::InProgress;
        trail.push_back(cur->id);
        if (!cur->parent) break;
        const Requirement* next = m.find_requirement(*cur->parent);
        if (!next) break;  // dangling parent already reported
        cur = next;
      }
      for (const auto& id : trail) marks[id] = Mark::Done;
    }
  }

  if (!errors.empty()) return errors;
  return m;
}

}  // namespace tracekit
