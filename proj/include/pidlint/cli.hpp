#pragma once

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "pidlint/builtin_rules.hpp"
#include "pidlint/engine.hpp"
#include "pidlint/fixture.hpp"
#include "pidlint/http_server.hpp"
#include "pidlint/ingest.hpp"
#include "pidlint/report.hpp"
#include "pidlint/rule_library.hpp"
#include "pidlint/service.hpp"

namespace pidlint::cli {

// Process exit codes.
enum ExitCode : int { kClean = 0, kFindings = 1, kInputError = 2, kNonConvergence = 3 };

inline constexpr const char* kRulesDirEnv = "PIDLINT_RULES_DIR";

struct RunOptions {
  std::string graph_path;
  std::string rules_dir;
  std::string level;
  std::string milestone;
  std::string out_path;
  std::string report_path;
  std::string dot_path;
  bool json = false;
  bool timings = false;
  int max_applications = 100;
};

namespace detail {

// Thrown for any bad input; becomes exit code 2.
struct InputError : Error {
  using Error::Error;
};

inline std::vector<RuleGraph> resolve_rules(const std::string& rules_dir) {
  std::string dir = rules_dir;
  if (dir.empty()) {
    if (const char* env = std::getenv(kRulesDirEnv); env && *env) dir = env;
  }
  if (dir.empty()) return builtin_rules();
  RuleLibrary lib;
  try {
    lib = load_rule_directory(dir);
  } catch (const Error& e) {
    throw InputError(e.what());
  }
  if (!lib.failures.empty()) {
    const auto& f = lib.failures.front();
    throw InputError(f.file.string() + ": " + f.reason);
  }
  return std::move(lib.rules);
}

inline PidGraph load_graph(const std::string& path, std::ostream& err) {
  std::string text;
  try {
    text = read_file(path);
  } catch (const Error& e) {
    throw InputError(e.what());
  }
  std::vector<std::string> warnings;
  try {
    PidGraph g = parse_graph(text, builtin_taxonomy(), &warnings);
    for (const auto& w : warnings) err << "warning: " << path << ": " << w << "\n";
    return g;
  } catch (const ParseError& e) {
    throw InputError(path + ": " + e.what());
  }
}

inline EngineConfig make_config(const RunOptions& opt, EngineMode mode) {
  EngineConfig c;
  c.mode = mode;
  auto level = parse_recommendation(opt.level);
  if (!level) throw InputError("unknown --level '" + opt.level + "'");
  c.recommendation_threshold = *level;
  if (!opt.milestone.empty()) c.milestone_filter = opt.milestone;
  if (opt.max_applications < 1) throw InputError("--max-applications must be at least 1");
  c.max_applications_per_rule = opt.max_applications;
  return c;
}

inline void write_output(const std::string& path, const std::string& content) {
  try {
    write_file(path, content);
  } catch (const Error& e) {
    throw InputError(e.what());
  }
}

inline std::string default_fixed_path(const std::string& input) {
  const std::string suffix = ".pidg.json";
  if (input.size() > suffix.size() && input.ends_with(suffix)) {
    return input.substr(0, input.size() - suffix.size()) + ".fixed" + suffix;
  }
  return input + ".fixed.pidg.json";
}

}  // namespace detail

// Detection only. Exit 0 when clean, 1 when proposals exist.
inline int cmd_check(const RunOptions& opt, std::ostream& out, std::ostream& err) {
  PidGraph graph = detail::load_graph(opt.graph_path, err);
  auto rules = detail::resolve_rules(opt.rules_dir);
  EngineConfig config = detail::make_config(opt, EngineMode::detect);
  PidGraph scratch = graph;
  RunReport report = make_report(graph, config, run_all(rules, scratch, config));
  if (opt.json) {
    out << render_json(report, opt.timings);
  } else {
    out << render_text(report, opt.timings);
  }
  if (!opt.report_path.empty()) detail::write_output(opt.report_path, render_json(report, opt.timings));
  if (!opt.dot_path.empty()) detail::write_output(opt.dot_path, export_dot(graph));
  return report.records.empty() ? kClean : kFindings;
}

// Applies corrections and writes the corrected graph. Exit 0 when nothing
// needed fixing, 1 when corrections were applied.
inline int cmd_fix(const RunOptions& opt, std::ostream& out, std::ostream& err) {
  PidGraph graph = detail::load_graph(opt.graph_path, err);
  auto rules = detail::resolve_rules(opt.rules_dir);
  EngineConfig config = detail::make_config(opt, EngineMode::fix);
  PidGraph corrected = graph;
  RunResult result;
  try {
    result = run_all(rules, corrected, config);
  } catch (const NonConvergenceError& e) {
    err << "error: " << e.what() << "\n";
    return kNonConvergence;
  }
  RunReport report = make_report(graph, config, std::move(result));
  std::string out_path = opt.out_path.empty() ? detail::default_fixed_path(opt.graph_path) : opt.out_path;
  detail::write_output(out_path, serialize_graph(corrected));
  if (opt.json) {
    out << render_json(report, opt.timings);
  } else {
    out << render_text(report, opt.timings);
    out << "Corrected graph: " << out_path << " (" << corrected.node_count() << " nodes, "
        << corrected.edge_count() << " edges)\n";
  }
  if (!opt.report_path.empty()) detail::write_output(opt.report_path, render_json(report, opt.timings));
  if (!opt.dot_path.empty()) {
    GraphDiff d = diff(graph, corrected);
    detail::write_output(opt.dot_path, export_dot(corrected, &d));
  }
  return report.records.empty() ? kClean : kFindings;
}

// Lists rules in application order. Invalid files are listed with the reason
// and make the exit code 2.
inline int cmd_rules(const std::string& rules_dir, std::ostream& out, std::ostream& err) {
  std::string dir = rules_dir;
  if (dir.empty()) {
    if (const char* env = std::getenv(kRulesDirEnv); env && *env) dir = env;
  }
  RuleLibrary lib;
  if (dir.empty()) {
    lib.rules = builtin_rules();
  } else {
    try {
      lib = load_rule_directory(dir);
    } catch (const Error& e) {
      err << "error: " << e.what() << "\n";
      return kInputError;
    }
  }
  for (const auto& r : lib.rules) {
    out << r.meta.id << "\torder=" << r.meta.order << "\t" << to_string(r.meta.recommendation)
        << "\t" << r.meta.description << "\n";
  }
  for (const auto& f : lib.failures) {
    out << "invalid\t" << f.file.filename().string() << "\t" << f.reason << "\n";
  }
  return lib.failures.empty() ? kClean : kInputError;
}

inline int cmd_fixture(const std::string& out_path, std::ostream& out) {
  detail::write_output(out_path, serialize_graph(build_case_study_fixture()));
  out << "wrote " << out_path << "\n";
  return kClean;
}

struct ServeOptions {
  std::string host = "127.0.0.1";
  int port = 8080;
  std::string rules_dir;
  std::string ui_dir;
  std::string snapshot_dir;
};

// Blocks until the server stops. Exit 2 when the port cannot be bound.
inline int cmd_serve(const ServeOptions& opt, std::ostream& out, std::ostream& err) {
  ServiceOptions service_options;
  if (!opt.snapshot_dir.empty()) service_options.snapshot_dir = opt.snapshot_dir;
  ReviewService service(detail::resolve_rules(opt.rules_dir), service_options);
  httplib::Server server;
  std::optional<std::filesystem::path> ui;
  if (!opt.ui_dir.empty()) ui = opt.ui_dir;
  bind_routes(server, service, ui);
  // httplib's defaults add SO_REUSEPORT, which would let us share a busy port.
  server.set_socket_options([](socket_t sock) {
    int yes = 1;
    setsockopt(sock, SOL_SOCKET, SO_REUSEADDR, &yes, sizeof yes);
  });
  if (!server.bind_to_port(opt.host, opt.port)) {
    err << "error: cannot listen on " << opt.host << ":" << opt.port << "\n";
    return kInputError;
  }
  out << "serving on http://" << opt.host << ":" << opt.port << "\n" << std::flush;
  server.listen_after_bind();
  return kClean;
}

inline int run(int argc, const char* const* argv, std::ostream& out = std::cout,
               std::ostream& err = std::cerr) {
  CLI::App app{"Rule-based P&ID checker and autocorrector", "pidlint"};
  app.require_subcommand(1);

  RunOptions check_opt, fix_opt;
  check_opt.level = "consideration";
  fix_opt.level = "mandatory";
  auto add_run_flags = [](CLI::App* sub, RunOptions& o) {
    sub->add_option("graph", o.graph_path, "Graph file (*.pidg.json)")->required();
    sub->add_option("--rules", o.rules_dir, "Rules directory (default: $PIDLINT_RULES_DIR or built-ins)");
    sub->add_option("--level", o.level, "Lowest recommendation level to apply")
        ->check(CLI::IsMember({"mandatory", "suggested", "consideration"}));
    sub->add_option("--milestone", o.milestone, "Only rules for this milestone");
    sub->add_option("--report", o.report_path, "Also write the JSON report here");
    sub->add_option("--dot", o.dot_path, "Write a Graphviz rendering here");
    sub->add_option("--max-applications", o.max_applications, "Per-rule application cap");
    sub->add_flag("--json", o.json, "Print the JSON report instead of text");
    sub->add_flag("--timings", o.timings, "Include wall-clock timings in reports");
  };
  auto* check = app.add_subcommand("check", "Detect rule violations");
  add_run_flags(check, check_opt);
  auto* fix = app.add_subcommand("fix", "Apply corrections and write the corrected graph");
  add_run_flags(fix, fix_opt);
  fix->add_option("--out", fix_opt.out_path, "Corrected graph path (default: <input>.fixed.pidg.json)");

  std::string rules_dir;
  auto* rules = app.add_subcommand("rules", "List rules in application order");
  rules->add_option("--rules", rules_dir, "Rules directory");

  std::string fixture_out;
  auto* fixture = app.add_subcommand("fixture", "Write the built-in case-study graph");
  fixture->add_option("out", fixture_out, "Output path")->required();

  ServeOptions serve_opt;
  auto* serve = app.add_subcommand("serve", "Run the interactive review HTTP API");
  serve->add_option("--host", serve_opt.host, "Bind address");
  serve->add_option("--port", serve_opt.port, "Port");
  serve->add_option("--rules", serve_opt.rules_dir, "Rules directory");
  serve->add_option("--ui", serve_opt.ui_dir, "Built web UI to serve at /");
  serve->add_option("--snapshots", serve_opt.snapshot_dir, "Persist sessions to this directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? kClean : kInputError;
  }

  try {
    if (*check) return cmd_check(check_opt, out, err);
    if (*fix) return cmd_fix(fix_opt, out, err);
    if (*rules) return cmd_rules(rules_dir, out, err);
    if (*fixture) return cmd_fixture(fixture_out, out);
    if (*serve) return cmd_serve(serve_opt, out, err);
  } catch (const detail::InputError& e) {
    err << "error: " << e.what() << "\n";
    return kInputError;
  } catch (const NonConvergenceError& e) {
    err << "error: " << e.what() << "\n";
    return kNonConvergence;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kInputError;
  }
  return kInputError;
}

}  // namespace pidlint::cli
