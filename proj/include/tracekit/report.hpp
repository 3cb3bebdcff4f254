#pragma once

#include <algorithm>
#include <cstdio>
#include <map>
#include <string>
#include <vector>

#include "json.hpp"
#include "tracekit/diagnostics.hpp"
#include "tracekit/graph.hpp"
#include "tracekit/impact.hpp"
#include "tracekit/model.hpp"
#include "tracekit/rules.hpp"

namespace tracekit {

using Json = nlohmann::ordered_json;

namespace detail {

inline std::string format_percent(double p) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.1f%%", p);
  return buf;
}

inline std::string format_ratio_line(const char* label,
                                     const CoverageRatio& r) {
  return std::string(label) + " coverage: " + format_percent(r.percent()) +
         " (" + std::to_string(r.covered) + "/" + std::to_string(r.total) +
         ")\n";
}

/// Short quoted excerpt of an entity's descriptive text for report rows.
inline std::string excerpt_of(const Model& model, const EntityId& id) {
  std::string text;
  if (const auto* r = model.find_requirement(id)) text = r->text;
  else if (const auto* e = model.find_element(id)) text = e->name;
  else if (const auto* t = model.find_testcase(id)) text = t->description.value_or("");
  else if (const auto* k = model.find_risk(id)) text = k->description;
  if (text.empty()) return "";
  constexpr std::size_t kMax = 60;
  if (text.size() > kMax) text = text.substr(0, kMax - 3) + "...";
  return " \"" + text + "\"";
}

}  // namespace detail

// --- text rendering ---

/// `file:line:col: severity[Rn]: message (subjects)`; the location prefix is
/// present whenever the model was loaded from source text.
inline std::string render_finding_line(const Finding& f) {
  std::string out;
  if (f.span) {
    out += f.span->file + ":" + std::to_string(f.span->line) + ":" +
           std::to_string(f.span->column) + ": ";
  }
  out += std::string(severity_name(f.severity)) + "[" + f.rule_id +
         "]: " + f.message + " (";
  for (std::size_t i = 0; i < f.subjects.size(); ++i) {
    if (i > 0) out += ", ";
    out += f.subjects[i];
  }
  out += ")";
  if (f.suppressed) out += " [suppressed]";
  return out;
}

inline std::string render_coverage_text(const CoverageStats& stats) {
  std::string out;
  out += detail::format_ratio_line("verification", stats.verification);
  out += detail::format_ratio_line("risk", stats.risk);
  out += detail::format_ratio_line("transformation", stats.transformation);
  out += detail::format_ratio_line("satisfaction", stats.satisfaction);
  out += detail::format_ratio_line("allocation", stats.allocation);
  return out;
}

inline std::string render_check_text(const std::vector<Finding>& findings,
                                     const CoverageStats& stats) {
  std::string out;
  for (const Finding& f : findings) out += render_finding_line(f) + "\n";
  if (!findings.empty()) out += "\n";
  out += render_coverage_text(stats);
  std::size_t errors = 0, warnings = 0, suppressed = 0;
  for (const Finding& f : findings) {
    if (f.suppressed) {
      ++suppressed;
    } else if (f.severity == Severity::Error) {
      ++errors;
    } else {
      ++warnings;
    }
  }
  out += "\n" + std::to_string(errors) + (errors == 1 ? " error" : " errors") +
         ", " + std::to_string(warnings) +
         (warnings == 1 ? " warning" : " warnings");
  if (suppressed > 0)
    out += " (" + std::to_string(suppressed) + " suppressed)";
  out += "\n";
  return out;
}

inline std::string render_stats_text(const CoverageStats& stats) {
  std::string out = "entities:\n";
  for (const auto& [kind, count] : stats.entity_counts)
    out += "  " + std::string(to_string(kind)) + ": " + std::to_string(count) +
           "\n";
  out += "links:\n";
  for (const auto& [kind, count] : stats.link_counts)
    out += "  " + std::string(to_string(kind)) + ": " + std::to_string(count) +
           "\n";
  out += "coverage:\n";
  std::string coverage = render_coverage_text(stats);
  std::size_t pos = 0;
  while (pos < coverage.size()) {
    std::size_t eol = coverage.find('\n', pos);
    out += "  " + coverage.substr(pos, eol - pos) + "\n";
    pos = eol + 1;
  }
  return out;
}

/// Human impact report: what changed, what it reaches (grouped by entity
/// kind, with distances and witness paths), which risks are challenged, and
/// which test cases went stale.
inline std::string render_impact_text(const ImpactResult& result,
                                      const Model& model,
                                      const TraceGraph& graph) {
  std::string out = "changed (" + std::to_string(result.changed.size()) +
                    "):\n";
  for (const EntityId& id : result.changed)
    out += "  " + id + ": " + to_string(*graph.kind_of(id)) +
           detail::excerpt_of(model, id) + "\n";

  if (result.impacted.empty()) {
    out += "no downstream impact\n";
  } else {
    out += "impacted (" + std::to_string(result.impacted.size()) + "):\n";
    for (int k = 0; k <= static_cast<int>(EntityKind::Risk); ++k) {
      EntityKind kind = static_cast<EntityKind>(k);
      bool any = false;
      for (const ImpactedNode& node : result.impacted) {
        if (graph.kind_of(node.id) != kind) continue;
        if (!any) {
          out += "  " + std::string(to_string(kind)) + ":\n";
          any = true;
        }
        out += "    " + node.id + " (distance " +
               std::to_string(node.distance) + ")" +
               detail::excerpt_of(model, node.id) + "\n";
        out += "      path: ";
        for (std::size_t i = 0; i < node.path.size(); ++i) {
          if (i > 0) out += " -> ";
          out += node.path[i];
        }
        out += "\n";
      }
    }
  }

  out += "challenged risks (" + std::to_string(result.challenged_risks.size()) +
         "):\n";
  for (const EntityId& id : result.challenged_risks) {
    const Risk* risk = model.find_risk(id);
    out += "  " + id + " (tolerability: " +
           to_string(risk->tolerability) + ")";
    if (risk->tolerability == Tolerability::Unacceptable)
      out += " <<< UNACCEPTABLE";
    out += detail::excerpt_of(model, id) + "\n";
  }

  out += "stale test cases (" + std::to_string(result.stale_testcases.size()) +
         "):\n";
  for (const EntityId& id : result.stale_testcases)
    out += "  " + id + detail::excerpt_of(model, id) + "\n";
  return out;
}

/// Aligned grid with `x` marks; a dimension of zero collapses to a one-line
/// message.
inline std::string render_matrix_text(const TraceMatrix& m) {
  std::string out = std::string("relation: ") + to_string(m.relation) +
                    (m.transitive ? " (transitive)" : " (direct)") + "\n";
  if (m.rows.empty() || m.columns.empty()) {
    out += std::to_string(m.rows.size()) + "x" +
           std::to_string(m.columns.size()) +
           " matrix (no entities match the requested kinds)\n";
    return out;
  }
  std::size_t label_width = 0;
  for (const EntityId& id : m.rows) label_width = std::max(label_width, id.size());
  out += std::string(label_width, ' ');
  for (const EntityId& id : m.columns) out += "  " + id;
  out += "\n";
  for (std::size_t i = 0; i < m.rows.size(); ++i) {
    std::string row = m.rows[i] + std::string(label_width - m.rows[i].size(), ' ');
    for (std::size_t j = 0; j < m.columns.size(); ++j) {
      row += "  " + std::string(m.cells[i][j] ? "x" : ".") +
             std::string(m.columns[j].size() - 1, ' ');
    }
    while (!row.empty() && row.back() == ' ') row.pop_back();
    out += row + "\n";
  }
  return out;
}

// --- JSON rendering ---

inline Json coverage_ratio_json(const CoverageRatio& r) {
  return Json{{"covered", r.covered},
              {"total", r.total},
              {"percent", r.percent()}};
}

inline Json coverage_json(const CoverageStats& stats) {
  return Json{{"verification", coverage_ratio_json(stats.verification)},
              {"risk", coverage_ratio_json(stats.risk)},
              {"transformation", coverage_ratio_json(stats.transformation)},
              {"satisfaction", coverage_ratio_json(stats.satisfaction)},
              {"allocation", coverage_ratio_json(stats.allocation)}};
}

inline Json model_summary_json(const CoverageStats& stats) {
  Json entities = Json::object();
  std::size_t total_entities = 0;
  for (const auto& [kind, count] : stats.entity_counts) {
    entities[to_string(kind)] = count;
    total_entities += count;
  }
  Json links = Json::object();
  std::size_t total_links = 0;
  for (const auto& [kind, count] : stats.link_counts) {
    links[to_string(kind)] = count;
    total_links += count;
  }
  return Json{{"entities", entities},
              {"links", links},
              {"total_entities", total_entities},
              {"total_links", total_links}};
}

inline Json findings_json(const std::vector<Finding>& findings) {
  Json arr = Json::array();
  for (const Finding& f : findings) {
    Json item{{"rule_id", f.rule_id},
              {"severity", severity_name(f.severity)},
              {"subjects", f.subjects},
              {"message", f.message}};
    if (f.span) {
      item["span"] = Json{{"file", f.span->file},
                          {"line", f.span->line},
                          {"column", f.span->column}};
    } else {
      item["span"] = nullptr;
    }
    item["suppressed"] = f.suppressed;
    arr.push_back(std::move(item));
  }
  return arr;
}

inline Json check_report_json(const CoverageStats& stats,
                              const std::vector<Finding>& findings) {
  return Json{{"schema_version", "1"},
              {"model_summary", model_summary_json(stats)},
              {"findings", findings_json(findings)},
              {"coverage", coverage_json(stats)}};
}

inline Json impact_json(const ImpactResult& result) {
  Json impacted = Json::array();
  for (const ImpactedNode& node : result.impacted)
    impacted.push_back(Json{{"id", node.id},
                            {"distance", node.distance},
                            {"path", node.path}});
  return Json{{"changed", result.changed},
              {"impacted", impacted},
              {"challenged_risks", result.challenged_risks},
              {"stale_testcases", result.stale_testcases}};
}

inline Json impact_report_json(const CoverageStats& stats,
                               const ImpactResult& result) {
  return Json{{"schema_version", "1"},
              {"model_summary", model_summary_json(stats)},
              {"impact", impact_json(result)}};
}

inline Json stats_report_json(const CoverageStats& stats) {
  return Json{{"schema_version", "1"},
              {"model_summary", model_summary_json(stats)},
              {"coverage", coverage_json(stats)}};
}

inline Json matrix_report_json(const TraceMatrix& m) {
  Json cells = Json::array();
  for (const auto& row : m.cells) {
    Json row_json = Json::array();
    for (bool cell : row) row_json.push_back(cell);
    cells.push_back(std::move(row_json));
  }
  Json matrix{{"row_kind", to_string(m.row_kind)},
              {"column_kind", to_string(m.column_kind)},
              {"relation", to_string(m.relation)},
              {"transitive", m.transitive},
              {"rows", m.rows},
              {"columns", m.columns},
              {"cells", cells}};
  return Json{{"schema_version", "1"}, {"matrix", matrix}};
}

}  // namespace tracekit
