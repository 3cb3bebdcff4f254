#pragma once

#include <algorithm>
#include <array>
#include <charconv>
#include <cstdio>
#include <cstdlib>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "tracekit/model.hpp"

namespace tracekit {

namespace detail {

/// Formats a double without exponent notation, so the result stays inside the
/// model grammar (digits with an optional fraction) and parses back to the
/// exact same value. Model numbers are never negative.
inline std::string format_number(double value) {
  std::array<char, 32> shortest{};
  auto [end, ec] =
      std::to_chars(shortest.data(), shortest.data() + shortest.size(), value);
  if (ec == std::errc{}) {
    std::string s(shortest.data(), end);
    if (s.find('e') == std::string::npos && s.find('E') == std::string::npos)
      return s;
  }
  // Shortest form needed an exponent; search for the narrowest fixed form
  // that still round-trips. 400 fraction digits covers subnormals.
  std::vector<char> buf(512);
  for (int precision = 0; precision <= 400; ++precision) {
    std::snprintf(buf.data(), buf.size(), "%.*f", precision, value);
    if (std::strtod(buf.data(), nullptr) == value) return buf.data();
  }
  std::snprintf(buf.data(), buf.size(), "%f", value);
  return buf.data();
}

/// Quotes a string using the two supported escapes. Strings containing
/// newlines are not representable in the grammar; models loaded from source
/// text never contain them.
inline std::string quote_string(const std::string& s) {
  std::string out;
  out.reserve(s.size() + 2);
  out.push_back('"');
  for (char c : s) {
    if (c == '"' || c == '\\') out.push_back('\\');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

inline void emit_allow_comment(std::string& out,
                               const std::set<std::string>* rules) {
  if (rules == nullptr || rules->empty()) return;
  std::vector<std::string> sorted(rules->begin(), rules->end());
  std::sort(sorted.begin(), sorted.end(),
            [](const std::string& a, const std::string& b) {
              return rule_number(a) < rule_number(b);
            });
  out += "// tracekit:allow(";
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    if (i > 0) out += ", ";
    out += sorted[i];
  }
  out += ")\n";
}

}  // namespace detail

/// Renders a model as source text in a canonical form: requirements grouped
/// by class, then elements, test cases, risks, and links, each sorted by id
/// (links by kind, then endpoints), with attributes in a fixed order and
/// defaults omitted. Loading the output reproduces the model, and printing
/// again reproduces the text.
inline std::string print_canonical(const Model& model) {
  std::string out;

  std::vector<const Requirement*> reqs;
  reqs.reserve(model.requirements().size());
  for (const auto& r : model.requirements()) reqs.push_back(&r);
  std::sort(reqs.begin(), reqs.end(),
            [](const Requirement* a, const Requirement* b) {
              return std::make_tuple(static_cast<int>(a->req_class), a->id) <
                     std::make_tuple(static_cast<int>(b->req_class), b->id);
            });
  for (const Requirement* r : reqs) {
    detail::emit_allow_comment(out, model.suppressions_for(r->id));
    out += "requirement " + r->id + " : " + to_string(r->req_class) + " {\n";
    out += "  text: " + detail::quote_string(r->text) + "\n";
    if (r->source)
      out += "  source: " + detail::quote_string(*r->source) + "\n";
    if (r->safety) out += "  safety: true\n";
    if (r->criticality)
      out += std::string("  criticality: ") + to_string(*r->criticality) + "\n";
    if (r->sil) out += "  sil: " + std::to_string(*r->sil) + "\n";
    if (r->mtbf_hours)
      out += "  mtbf_hours: " + detail::format_number(*r->mtbf_hours) + "\n";
    if (r->mtbr_hours)
      out += "  mtbr_hours: " + detail::format_number(*r->mtbr_hours) + "\n";
    if (r->failure_rate_per_hour)
      out += "  failure_rate_per_hour: " +
             detail::format_number(*r->failure_rate_per_hour) + "\n";
    if (r->parent) out += "  parent: " + *r->parent + "\n";
    out += "}\n";
  }

  std::vector<const SolutionElement*> elems;
  elems.reserve(model.elements().size());
  for (const auto& e : model.elements()) elems.push_back(&e);
  std::sort(elems.begin(), elems.end(),
            [](const SolutionElement* a, const SolutionElement* b) {
              return std::make_tuple(static_cast<int>(a->kind), a->id) <
                     std::make_tuple(static_cast<int>(b->kind), b->id);
            });
  for (const SolutionElement* e : elems) {
    detail::emit_allow_comment(out, model.suppressions_for(e->id));
    out += "element " + e->id + " : " + to_string(e->kind) + " {\n";
    out += "  name: " + detail::quote_string(e->name) + "\n";
    if (!e->connects.empty()) {
      out += "  connects: [";
      for (std::size_t i = 0; i < e->connects.size(); ++i) {
        if (i > 0) out += ", ";
        out += e->connects[i];
      }
      out += "]\n";
    }
    out += "}\n";
  }

  std::vector<const TestCase*> tcs;
  tcs.reserve(model.testcases().size());
  for (const auto& t : model.testcases()) tcs.push_back(&t);
  std::sort(tcs.begin(), tcs.end(), [](const TestCase* a, const TestCase* b) {
    return a->id < b->id;
  });
  for (const TestCase* t : tcs) {
    detail::emit_allow_comment(out, model.suppressions_for(t->id));
    out += "testcase " + t->id + " {\n";
    out += std::string("  method: ") + to_string(t->method) + "\n";
    if (t->description)
      out += "  description: " + detail::quote_string(*t->description) + "\n";
    out += "}\n";
  }

  std::vector<const Risk*> risks;
  risks.reserve(model.risks().size());
  for (const auto& k : model.risks()) risks.push_back(&k);
  std::sort(risks.begin(), risks.end(),
            [](const Risk* a, const Risk* b) { return a->id < b->id; });
  for (const Risk* k : risks) {
    detail::emit_allow_comment(out, model.suppressions_for(k->id));
    out += "risk " + k->id + " {\n";
    out += "  description: " + detail::quote_string(k->description) + "\n";
    out += std::string("  severity: ") + to_string(k->severity) + "\n";
    out += std::string("  likelihood: ") + to_string(k->likelihood) + "\n";
    out += std::string("  tolerability: ") + to_string(k->tolerability) + "\n";
    out += "}\n";
  }

  std::vector<std::size_t> link_order(model.links().size());
  for (std::size_t i = 0; i < link_order.size(); ++i) link_order[i] = i;
  std::sort(link_order.begin(), link_order.end(),
            [&](std::size_t a, std::size_t b) {
              const Link& la = model.links()[a];
              const Link& lb = model.links()[b];
              return std::make_tuple(static_cast<int>(la.kind), la.source,
                                     la.target) <
                     std::make_tuple(static_cast<int>(lb.kind), lb.source,
                                     lb.target);
            });
  for (std::size_t i : link_order) {
    const Link& l = model.links()[i];
    detail::emit_allow_comment(out, model.link_suppressions(i));
    out += std::string("link ") + to_string(l.kind) + " " + l.source + " -> " +
           l.target + "\n";
  }

  return out;
}

}  // namespace tracekit
