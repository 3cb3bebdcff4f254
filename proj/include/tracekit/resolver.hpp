#pragma once

#include <cmath>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "tracekit/diagnostics.hpp"
#include "tracekit/lexer.hpp"
#include "tracekit/model.hpp"
#include "tracekit/parser.hpp"

namespace tracekit {

struct ResolveResult {
  std::optional<Model> model;  // absent when any error diagnostic exists
  std::vector<ParseDiagnostic> diagnostics;
};

namespace detail {

// Where a declaration sits in the file, for suppression attachment.
struct DeclExtent {
  std::size_t first_line = 0;
  std::size_t last_line = 0;
  bool is_link = false;
  EntityId entity_id;       // when !is_link
  std::size_t link_index = 0;  // when is_link
};

class Resolver {
 public:
  Resolver(const SyntaxTree& tree, const std::vector<AllowComment>& allows)
      : tree_(tree), allows_(allows) {}

  ResolveResult run() {
    for (const auto& decl : tree_.decls) {
      if (const auto* entity = std::get_if<EntityNode>(&decl)) {
        resolve_entity(*entity);
      } else {
        const auto& link = std::get<LinkNode>(decl);
        extents_.push_back({link.first_line, link.last_line, true, {},
                            input_.links.size()});
        input_.links.push_back(
            Link{link.kind, link.source, link.target, link.span});
      }
    }
    attach_allows();
    if (has_errors(diagnostics_)) return {std::nullopt, std::move(diagnostics_)};

    auto built = build_model(std::move(input_));
    if (!built.ok()) {
      for (const auto& err : built.error()) {
        SourceSpan span = err.span.value_or(SourceSpan{tree_.file, 1, 1, 0});
        diagnostics_.push_back({Severity::Error, err.message, span,
                                diagnostic_code(err.code)});
      }
      return {std::nullopt, std::move(diagnostics_)};
    }
    return {std::move(built.value()), std::move(diagnostics_)};
  }

 private:
  void error(const SourceSpan& span, std::string message, const char* code) {
    diagnostics_.push_back({Severity::Error, std::move(message), span, code});
  }
  void warn(const SourceSpan& span, std::string message, const char* code) {
    diagnostics_.push_back({Severity::Warning, std::move(message), span, code});
  }

  // One attribute occurrence, deduplicated per declaration.
  const AttrValue* claim(const EntityNode& node,
                         std::map<std::string, const AttrNode*>& seen,
                         const AttrNode& attr) {
    auto [it, inserted] = seen.emplace(attr.name, &attr);
    if (!inserted) {
      error(attr.name_span, "duplicate attribute '" + attr.name + "' on '" +
                                node.id + "'",
            diag::DuplicateAttribute);
      return nullptr;
    }
    return &attr.value;
  }

  std::optional<std::string> take_string(const AttrNode& attr) {
    if (attr.value.type != AttrValue::Type::String) {
      error(attr.value.span, "attribute '" + attr.name + "' expects a string",
            diag::TypeMismatch);
      return std::nullopt;
    }
    return attr.value.text;
  }

  std::optional<double> take_number(const AttrNode& attr) {
    if (attr.value.type != AttrValue::Type::Number) {
      error(attr.value.span, "attribute '" + attr.name + "' expects a number",
            diag::TypeMismatch);
      return std::nullopt;
    }
    return attr.value.number;
  }

  std::optional<bool> take_bool(const AttrNode& attr) {
    if (attr.value.type != AttrValue::Type::Bool) {
      error(attr.value.span,
            "attribute '" + attr.name + "' expects true or false",
            diag::TypeMismatch);
      return std::nullopt;
    }
    return attr.value.bool_value;
  }

  std::optional<std::string> take_name(const AttrNode& attr) {
    if (attr.value.type != AttrValue::Type::Name) {
      error(attr.value.span, "attribute '" + attr.name + "' expects a name",
            diag::TypeMismatch);
      return std::nullopt;
    }
    return attr.value.text;
  }

  void unknown_attribute(const EntityNode& node, const AttrNode& attr,
                         const char* entity_word) {
    error(attr.name_span,
          "unknown attribute '" + attr.name + "' on " + entity_word + " '" +
              node.id + "'",
          diag::UnknownAttribute);
  }

  void require_attr(const EntityNode& node,
                    const std::map<std::string, const AttrNode*>& seen,
                    const char* name, const char* entity_word) {
    if (!seen.count(name)) {
      error(node.span,
            std::string(entity_word) + " '" + node.id +
                "' is missing required attribute '" + name + "'",
            diag::MissingAttribute);
    }
  }

  void resolve_entity(const EntityNode& node) {
    extents_.push_back({node.first_line, node.last_line, false, node.id, 0});
    switch (node.kind) {
      case EntityNode::Kind::Requirement: resolve_requirement(node); break;
      case EntityNode::Kind::Element: resolve_element(node); break;
      case EntityNode::Kind::TestCase: resolve_testcase(node); break;
      case EntityNode::Kind::Risk: resolve_risk(node); break;
    }
  }

  void resolve_requirement(const EntityNode& node) {
    Requirement r;
    r.id = node.id;
    r.req_class = *parse_requirement_class(node.category);
    r.loc = node.span;
    std::map<std::string, const AttrNode*> seen;
    for (const auto& attr : node.attrs) {
      if (!claim(node, seen, attr)) continue;
      if (attr.name == "text") {
        if (auto v = take_string(attr)) {
          if (v->empty())
            error(attr.value.span, "text must not be empty", diag::InvalidValue);
          else
            r.text = *v;
        }
      } else if (attr.name == "source") {
        if (auto v = take_string(attr)) r.source = *v;
      } else if (attr.name == "safety") {
        if (auto v = take_bool(attr)) r.safety = *v;
      } else if (attr.name == "criticality") {
        if (auto v = take_name(attr)) {
          if (auto c = parse_criticality(*v))
            r.criticality = *c;
          else
            error(attr.value.span,
                  "'" + *v + "' is not a criticality (expected low, medium, high, or catastrophic)",
                  diag::InvalidValue);
        }
      } else if (attr.name == "sil") {
        if (auto v = take_number(attr)) {
          if (*v != std::floor(*v) || *v < 1 || *v > 4)
            error(attr.value.span, "sil must be an integer between 1 and 4",
                  diag::InvalidValue);
          else
            r.sil = static_cast<int>(*v);
        }
      } else if (attr.name == "mtbf_hours" || attr.name == "mtbr_hours" ||
                 attr.name == "failure_rate_per_hour") {
        if (auto v = take_number(attr)) {
          if (*v <= 0.0) {
            error(attr.value.span, attr.name + " must be positive",
                  diag::InvalidValue);
          } else if (attr.name == "mtbf_hours") {
            r.mtbf_hours = *v;
          } else if (attr.name == "mtbr_hours") {
            r.mtbr_hours = *v;
          } else {
            r.failure_rate_per_hour = *v;
          }
        }
      } else if (attr.name == "parent") {
        if (auto v = take_name(attr)) r.parent = *v;
      } else {
        unknown_attribute(node, attr, "requirement");
      }
    }
    require_attr(node, seen, "text", "requirement");
    input_.requirements.push_back(std::move(r));
  }

  void resolve_element(const EntityNode& node) {
    SolutionElement e;
    e.id = node.id;
    e.kind = *parse_element_kind(node.category);
    e.loc = node.span;
    std::map<std::string, const AttrNode*> seen;
    for (const auto& attr : node.attrs) {
      if (!claim(node, seen, attr)) continue;
      if (attr.name == "name") {
        if (auto v = take_string(attr)) e.name = *v;
      } else if (attr.name == "connects") {
        if (attr.value.type != AttrValue::Type::IdList) {
          error(attr.value.span, "attribute 'connects' expects an id list",
                diag::TypeMismatch);
        } else {
          e.connects = attr.value.ids;
        }
      } else {
        unknown_attribute(node, attr, "element");
      }
    }
    require_attr(node, seen, "name", "element");
    input_.elements.push_back(std::move(e));
  }

  void resolve_testcase(const EntityNode& node) {
    TestCase t;
    t.id = node.id;
    t.loc = node.span;
    std::map<std::string, const AttrNode*> seen;
    for (const auto& attr : node.attrs) {
      if (!claim(node, seen, attr)) continue;
      if (attr.name == "method") {
        if (auto v = take_name(attr)) {
          if (auto m = parse_test_method(*v))
            t.method = *m;
          else
            error(attr.value.span,
                  "'" + *v +
                      "' is not a verification method (expected simulation, test, prototyping, model_checking, or review)",
                  diag::InvalidValue);
        }
      } else if (attr.name == "description") {
        if (auto v = take_string(attr)) t.description = *v;
      } else {
        unknown_attribute(node, attr, "testcase");
      }
    }
    require_attr(node, seen, "method", "testcase");
    input_.testcases.push_back(std::move(t));
  }

  void resolve_risk(const EntityNode& node) {
    Risk k;
    k.id = node.id;
    k.loc = node.span;
    std::map<std::string, const AttrNode*> seen;
    for (const auto& attr : node.attrs) {
      if (!claim(node, seen, attr)) continue;
      if (attr.name == "description") {
        if (auto v = take_string(attr)) k.description = *v;
      } else if (attr.name == "severity") {
        if (auto v = take_name(attr)) {
          if (auto s = parse_risk_severity(*v))
            k.severity = *s;
          else
            error(attr.value.span,
                  "'" + *v + "' is not a risk severity (expected minor, major, hazardous, or catastrophic)",
                  diag::InvalidValue);
        }
      } else if (attr.name == "likelihood") {
        if (auto v = take_name(attr)) {
          if (auto l = parse_likelihood(*v))
            k.likelihood = *l;
          else
            error(attr.value.span,
                  "'" + *v + "' is not a likelihood (expected frequent, probable, remote, or extremely_remote)",
                  diag::InvalidValue);
        }
      } else if (attr.name == "tolerability") {
        if (auto v = take_name(attr)) {
          if (auto t = parse_tolerability(*v))
            k.tolerability = *t;
          else
            error(attr.value.span,
                  "'" + *v + "' is not a tolerability (expected acceptable, tolerable, or unacceptable)",
                  diag::InvalidValue);
        }
      } else {
        unknown_attribute(node, attr, "risk");
      }
    }
    require_attr(node, seen, "description", "risk");
    require_attr(node, seen, "severity", "risk");
    require_attr(node, seen, "likelihood", "risk");
    require_attr(node, seen, "tolerability", "risk");
    input_.risks.push_back(std::move(k));
  }

  // A suppression comment annotates the declaration whose lines contain it,
  // or, when it stands on its own line between declarations, the next one.
  void attach_allows() {
    for (const auto& allow : allows_) {
      const DeclExtent* chosen = nullptr;
      for (const auto& extent : extents_) {
        if (extent.first_line <= allow.line && allow.line <= extent.last_line) {
          chosen = &extent;
          break;
        }
      }
      if (!chosen) {
        for (const auto& extent : extents_) {
          if (extent.first_line > allow.line) {
            chosen = &extent;
            break;
          }
        }
      }
      if (!chosen) {
        warn(allow.span, "suppression comment does not attach to any declaration",
             diag::DanglingSuppression);
        continue;
      }
      for (const auto& rule : allow.rules) {
        if (!is_known_rule_id(rule)) {
          warn(allow.span, "unknown rule id '" + rule + "' in suppression comment",
               diag::UnknownRuleInAllow);
          continue;
        }
        if (chosen->is_link)
          input_.link_suppressions[chosen->link_index].insert(rule);
        else
          input_.entity_suppressions[chosen->entity_id].insert(rule);
      }
    }
  }

  const SyntaxTree& tree_;
  const std::vector<AllowComment>& allows_;
  ModelInput input_;
  std::vector<DeclExtent> extents_;
  std::vector<ParseDiagnostic> diagnostics_;
};

}  // namespace detail

/// Maps a syntax tree onto model entities and builds the model. Every
/// construction error surfaces as a diagnostic whose span points at the
/// offending declaration; a model is returned only when none are errors.
inline ResolveResult resolve(const SyntaxTree& tree,
                             const std::vector<AllowComment>& allows = {}) {
  return detail::Resolver(tree, allows).run();
}

/// Full frontend pipeline over source text. Stops after the first stage that
/// reports an error; diagnostics from all executed stages are concatenated.
inline ResolveResult load_model(std::string_view text, std::string file) {
  LexResult lexed = lex(text, file);
  if (has_errors(lexed.diagnostics))
    return {std::nullopt, std::move(lexed.diagnostics)};
  ParseResult parsed = parse(lexed.tokens, file);
  std::vector<ParseDiagnostic> diagnostics = std::move(lexed.diagnostics);
  for (auto& d : parsed.diagnostics) diagnostics.push_back(std::move(d));
  if (has_errors(diagnostics))
    return {std::nullopt, std::move(diagnostics)};
  ResolveResult resolved = resolve(parsed.tree, lexed.allows);
  for (auto& d : resolved.diagnostics) diagnostics.push_back(std::move(d));
  return {std::move(resolved.model), std::move(diagnostics)};
}

}  // namespace tracekit
