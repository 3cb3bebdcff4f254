// Command-line front door for the traceability toolkit.
//
// Verbs: check, impact, matrix, stats, export-dot. Reports go to standard
// output; diagnostics and usage errors go to standard error. Exit codes:
// 0 success, 1 findings at or above the failure threshold, 2 the model did
// not parse or resolve, 3 usage or configuration error.

#include <array>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "tracekit/tracekit.hpp"

namespace {

constexpr int kExitClean = 0;
constexpr int kExitFindings = 1;
constexpr int kExitLoadFailed = 2;
constexpr int kExitUsage = 3;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class FailOn { Error, Warning, Never };

/// Everything a command needs beyond the model itself, merged from flags and
/// the optional config file (flags win).
struct Settings {
  bool json = false;
  FailOn fail_on = FailOn::Error;
  tracekit::RuleConfig rules;
  tracekit::PropagationTable propagation = tracekit::default_propagation();
};

/// Raw option values before validation; unset fields fall through to the
/// config file and then to defaults.
struct RawOptions {
  std::string model_path;
  std::string config_path;
  std::string format;
  std::string fail_on;
  std::string disable;
  std::string criticality_monotone;
  std::array<std::string, tracekit::kEdgeKindCount> propagate;

  // impact
  std::vector<std::string> changed;
  // matrix
  std::string rows;
  std::string cols;
  std::string relation;
  bool transitive = false;
};

const std::array<const char*, tracekit::kEdgeKindCount> kEdgeKindNames = {
    "derive", "refine", "satisfy", "verify",
    "specify", "allocate", "covers", "parent"};

void add_common_options(CLI::App* cmd, RawOptions& raw) {
  cmd->add_option("model", raw.model_path, "Model file (.sreq)")
      ->required()
      ->type_name("FILE");
  cmd->add_option("--format", raw.format, "Output format: text or json")
      ->type_name("FORMAT");
  cmd->add_option("--fail-on", raw.fail_on,
                  "Findings threshold for exit code 1: error, warning, or never")
      ->type_name("LEVEL");
  cmd->add_option("--config", raw.config_path,
                  "Config file (default: tracekit.conf next to the model)")
      ->type_name("FILE");
  cmd->add_option("--disable", raw.disable,
                  "Comma-separated rule ids to skip (e.g. R4,R11)")
      ->type_name("RULES");
  cmd->add_option("--criticality-monotone", raw.criticality_monotone,
                  "Evaluate the criticality-monotonicity rule: true or false")
      ->type_name("BOOL");
  for (std::size_t i = 0; i < kEdgeKindNames.size(); ++i) {
    cmd->add_option(std::string("--propagate.") + kEdgeKindNames[i],
                    raw.propagate[i],
                    std::string("Impact propagation across ") +
                        kEdgeKindNames[i] +
                        " edges: forward, reverse, both, or off")
        ->type_name("DIR");
  }
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot read '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

/// `key = value` lines; blank lines and #-comments skipped.
std::map<std::string, std::string> parse_config_file(const std::string& path,
                                                     const std::string& text) {
  auto trim = [](std::string s) {
    std::size_t b = s.find_first_not_of(" \t\r");
    std::size_t e = s.find_last_not_of(" \t\r");
    return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
  };
  std::map<std::string, std::string> out;
  std::istringstream in(text);
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    std::string stripped = trim(line);
    if (stripped.empty() || stripped[0] == '#') continue;
    std::size_t eq = stripped.find('=');
    if (eq == std::string::npos)
      throw UsageError(path + ":" + std::to_string(number) +
                       ": expected 'key = value'");
    std::string key = trim(stripped.substr(0, eq));
    std::string value = trim(stripped.substr(eq + 1));
    if (key.empty())
      throw UsageError(path + ":" + std::to_string(number) + ": empty key");
    out[key] = value;  // last occurrence wins
  }
  return out;
}

/// Flag value if the flag was given, else the config-file value, else empty.
std::string pick(const CLI::App* cmd, const char* flag,
                 const std::string& flag_value,
                 const std::map<std::string, std::string>& config,
                 const char* key) {
  if (cmd->count(flag) > 0) return flag_value;
  auto it = config.find(key);
  return it == config.end() ? std::string() : it->second;
}

Settings resolve_settings(const CLI::App* cmd, const RawOptions& raw) {
  std::map<std::string, std::string> config;
  if (cmd->count("--config") > 0) {
    config = parse_config_file(raw.config_path, read_file(raw.config_path));
  } else {
    namespace fs = std::filesystem;
    fs::path sibling = fs::path(raw.model_path).parent_path() / "tracekit.conf";
    std::error_code ec;
    if (fs::exists(sibling, ec))
      config = parse_config_file(sibling.string(),
                                 read_file(sibling.string()));
  }

  const std::set<std::string> known_keys = [] {
    std::set<std::string> keys = {"format", "fail-on", "disable",
                                  "criticality-monotone"};
    for (const char* kind : kEdgeKindNames)
      keys.insert(std::string("propagate.") + kind);
    return keys;
  }();
  for (const auto& [key, value] : config)
    if (known_keys.count(key) == 0)
      throw UsageError("unknown config key '" + key + "'");

  Settings settings;

  std::string format = pick(cmd, "--format", raw.format, config, "format");
  if (format == "json") settings.json = true;
  else if (!format.empty() && format != "text")
    throw UsageError("invalid format '" + format + "' (expected text or json)");

  std::string fail_on = pick(cmd, "--fail-on", raw.fail_on, config, "fail-on");
  if (fail_on == "warning") settings.fail_on = FailOn::Warning;
  else if (fail_on == "never") settings.fail_on = FailOn::Never;
  else if (!fail_on.empty() && fail_on != "error")
    throw UsageError("invalid fail-on level '" + fail_on +
                     "' (expected error, warning, or never)");

  std::string disable = pick(cmd, "--disable", raw.disable, config, "disable");
  std::stringstream ids(disable);
  std::string id;
  while (std::getline(ids, id, ',')) {
    if (id.empty()) continue;
    if (!tracekit::is_known_rule_id(id))
      throw UsageError("unknown rule id '" + id + "'");
    settings.rules.enabled.erase(id);
  }

  std::string monotone = pick(cmd, "--criticality-monotone",
                              raw.criticality_monotone, config,
                              "criticality-monotone");
  if (monotone == "false") settings.rules.criticality_monotone = false;
  else if (!monotone.empty() && monotone != "true")
    throw UsageError("invalid criticality-monotone value '" + monotone +
                     "' (expected true or false)");

  for (std::size_t i = 0; i < kEdgeKindNames.size(); ++i) {
    std::string flag = std::string("--propagate.") + kEdgeKindNames[i];
    std::string key = std::string("propagate.") + kEdgeKindNames[i];
    std::string value =
        pick(cmd, flag.c_str(), raw.propagate[i], config, key.c_str());
    if (value.empty()) continue;
    auto direction = tracekit::parse_propagation(value);
    if (!direction)
      throw UsageError("invalid propagation '" + value + "' for " +
                       kEdgeKindNames[i] +
                       " (expected forward, reverse, both, or off)");
    settings.propagation.entries[*tracekit::parse_edge_kind(
        kEdgeKindNames[i])] = *direction;
  }

  return settings;
}

/// Loads and resolves the model, sending diagnostics to stderr. Returns
/// nothing if the model did not build (exit 2 path).
std::optional<tracekit::Model> load_or_report(const std::string& path) {
  std::string text = read_file(path);
  auto loaded = tracekit::load_model(text, path);
  for (const auto& d : loaded.diagnostics)
    std::cerr << tracekit::render_diagnostic(d) << "\n";
  return loaded.model;
}

int run_check(const Settings& settings, const tracekit::Model& model) {
  tracekit::TraceGraph graph = tracekit::build_graph(model);
  auto findings = tracekit::validate(model, graph, settings.rules);
  auto stats = tracekit::coverage_stats(model, graph);
  if (settings.json)
    std::cout << tracekit::check_report_json(stats, findings).dump(2) << "\n";
  else
    std::cout << tracekit::render_check_text(findings, stats);

  if (settings.fail_on == FailOn::Never) return kExitClean;
  for (const auto& f : findings) {
    if (f.suppressed) continue;
    if (f.severity == tracekit::Severity::Error ||
        settings.fail_on == FailOn::Warning)
      return kExitFindings;
  }
  return kExitClean;
}

int run_impact(const Settings& settings, const tracekit::Model& model,
               const std::vector<std::string>& changed_list) {
  tracekit::TraceGraph graph = tracekit::build_graph(model);
  std::set<tracekit::EntityId> changed(changed_list.begin(),
                                       changed_list.end());
  auto result = tracekit::impact(model, graph, changed, settings.propagation);
  if (!result.ok()) {
    const auto& error = result.error();
    if (error.kind == tracekit::ImpactError::Kind::UnknownReference)
      throw UsageError("unknown entity '" + error.id + "'");
    throw UsageError("the change set is empty");
  }
  if (settings.json) {
    auto stats = tracekit::coverage_stats(model, graph);
    std::cout << tracekit::impact_report_json(stats, result.value()).dump(2)
              << "\n";
  } else {
    std::cout << tracekit::render_impact_text(result.value(), model, graph);
  }
  return kExitClean;
}

int run_matrix(const Settings& settings, const tracekit::Model& model,
               const RawOptions& raw) {
  auto row_kind = tracekit::parse_kind_selector(raw.rows);
  if (!row_kind) throw UsageError("unknown entity kind '" + raw.rows + "'");
  auto column_kind = tracekit::parse_kind_selector(raw.cols);
  if (!column_kind) throw UsageError("unknown entity kind '" + raw.cols + "'");
  auto relation = tracekit::parse_edge_kind(raw.relation);
  if (!relation)
    throw UsageError("unknown relation '" + raw.relation + "'");

  tracekit::TraceGraph graph = tracekit::build_graph(model);
  auto matrix = tracekit::trace_matrix(graph, *row_kind, *column_kind,
                                       *relation, raw.transitive);
  if (settings.json)
    std::cout << tracekit::matrix_report_json(matrix).dump(2) << "\n";
  else
    std::cout << tracekit::render_matrix_text(matrix);
  return kExitClean;
}

int run_stats(const Settings& settings, const tracekit::Model& model) {
  tracekit::TraceGraph graph = tracekit::build_graph(model);
  auto stats = tracekit::coverage_stats(model, graph);
  if (settings.json)
    std::cout << tracekit::stats_report_json(stats).dump(2) << "\n";
  else
    std::cout << tracekit::render_stats_text(stats);
  return kExitClean;
}

int run_export_dot(const tracekit::Model& model) {
  std::cout << tracekit::export_dot(tracekit::build_graph(model));
  return kExitClean;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Safety-requirements traceability toolkit"};
  app.require_subcommand(1);

  RawOptions raw;

  CLI::App* check = app.add_subcommand("check", "Validate a model");
  add_common_options(check, raw);

  CLI::App* impact_cmd =
      app.add_subcommand("impact", "Compute change impact");
  add_common_options(impact_cmd, raw);
  impact_cmd
      ->add_option("--changed", raw.changed,
                   "Ids of changed entities (comma-separated or repeated)")
      ->required()
      ->delimiter(',')
      ->type_name("IDS");

  CLI::App* matrix = app.add_subcommand("matrix", "Render a traceability matrix");
  add_common_options(matrix, raw);
  matrix->add_option("--rows", raw.rows, "Row entity kind")->required();
  matrix->add_option("--cols", raw.cols, "Column entity kind")->required();
  matrix->add_option("--relation", raw.relation, "Link kind to trace")
      ->required();
  matrix->add_flag("--transitive", raw.transitive,
                   "Mark any path, not only direct links");

  CLI::App* stats = app.add_subcommand("stats", "Coverage and model statistics");
  add_common_options(stats, raw);

  CLI::App* export_dot =
      app.add_subcommand("export-dot", "Emit the traceability graph as DOT");
  add_common_options(export_dot, raw);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);  // help text, exit 0
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    const CLI::App* active = app.get_subcommands().front();
    Settings settings = resolve_settings(active, raw);
    std::optional<tracekit::Model> model = load_or_report(raw.model_path);
    if (!model) return kExitLoadFailed;

    if (active == check) return run_check(settings, *model);
    if (active == impact_cmd) return run_impact(settings, *model, raw.changed);
    if (active == matrix) return run_matrix(settings, *model, raw);
    if (active == stats) return run_stats(settings, *model);
    return run_export_dot(*model);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
}
