#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "pidlint/engine.hpp"
#include "pidlint/ingest.hpp"

namespace pidlint {

struct RunReport {
  PidGraph::Metadata graph_metadata;
  EngineConfig config;
  std::vector<CorrectionRecord> records;
  std::vector<RuleTiming> timings;
  double total_elapsed_ms = 0.0;

  // records per status, then per recommendation level
  std::map<RecordStatus, std::map<Recommendation, int>> summary() const {
    std::map<RecordStatus, std::map<Recommendation, int>> out;
    for (auto s : {RecordStatus::proposed, RecordStatus::applied, RecordStatus::rejected}) {
      for (auto r : {Recommendation::mandatory, Recommendation::suggested,
                     Recommendation::consideration}) {
        out[s][r] = 0;
      }
    }
    for (const auto& rec : records) ++out[rec.status][rec.recommendation];
    return out;
  }

  bool operator==(const RunReport&) const = default;
};

inline RunReport make_report(const PidGraph& input, const EngineConfig& config, RunResult result) {
  RunReport r;
  r.graph_metadata = input.metadata();
  r.config = config;
  r.records = std::move(result.records);
  r.timings = std::move(result.timings);
  r.total_elapsed_ms = result.total_elapsed_ms;
  return r;
}

// ---------------------------------------------------------------------------
// Text

namespace detail {

inline std::string join(const std::vector<std::string>& items, const char* sep = ", ") {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) out += sep;
    out += items[i];
  }
  return out;
}

inline std::string signed_count(long n) { return (n >= 0 ? "+" : "") + std::to_string(n); }

}  // namespace detail

inline std::string render_text(const RunReport& report, bool include_timings = true) {
  std::ostringstream os;
  auto title = report.graph_metadata.find("title");
  os << "P&ID check";
  if (title != report.graph_metadata.end()) os << ": " << title->second;
  os << "\n";
  os << "mode: " << to_string(report.config.mode)
     << ", level: " << to_string(report.config.recommendation_threshold)
     << ", milestone: " << report.config.milestone_filter.value_or("any") << "\n\n";

  if (report.records.empty()) {
    os << "No violations found.\n";
  }
  for (std::size_t i = 0; i < report.records.size(); ++i) {
    const auto& r = report.records[i];
    os << "[" << (i + 1) << "] Rule " << r.rule_id << " (" << to_string(r.recommendation) << ", "
       << to_string(r.status) << ")\n";
    os << "    " << r.description << "\n";
    os << "    Why: " << r.explanation << "\n";
    std::vector<std::string> affected = r.affected_tags;
    if (affected.empty()) affected = r.match.node_image();
    os << "    Affected: " << detail::join(affected) << "\n";
    if (!r.inserted_node_ids.empty()) {
      os << "    Insert nodes: " << detail::join(r.inserted_node_ids) << "\n";
    }
    if (!r.deleted_node_ids.empty()) {
      os << "    Delete nodes: " << detail::join(r.deleted_node_ids) << "\n";
    }
    if (!r.inserted_edge_ids.empty()) {
      os << "    Insert edges: " << detail::join(r.inserted_edge_ids) << "\n";
    }
    if (!r.deleted_edge_ids.empty()) {
      os << "    Delete edges: " << detail::join(r.deleted_edge_ids) << "\n";
    }
    long dn = static_cast<long>(r.inserted_node_ids.size()) - static_cast<long>(r.deleted_node_ids.size());
    long de = static_cast<long>(r.inserted_edge_ids.size()) - static_cast<long>(r.deleted_edge_ids.size());
    os << "    Change: " << detail::signed_count(dn) << " nodes, " << detail::signed_count(de)
       << " edges\n\n";
  }

  auto summary = report.summary();
  os << "Summary: " << report.records.size() << " record(s)";
  for (auto s : {RecordStatus::proposed, RecordStatus::applied, RecordStatus::rejected}) {
    const auto& by_level = summary.at(s);
    int total = 0;
    for (const auto& [lvl, n] : by_level) total += n;
    if (total == 0) continue;
    os << "; " << total << " " << to_string(s) << " (" << by_level.at(Recommendation::mandatory)
       << " mandatory, " << by_level.at(Recommendation::suggested) << " suggested, "
       << by_level.at(Recommendation::consideration) << " consideration)";
  }
  os << "\n";
  if (include_timings) {
    os << "Timing: " << report.total_elapsed_ms << " ms total";
    for (const auto& t : report.timings) os << "; rule " << t.rule_id << " " << t.elapsed_ms << " ms";
    os << "\n";
  }
  return os.str();
}

// ---------------------------------------------------------------------------
// JSON

namespace detail {

inline Json string_list(const std::vector<std::string>& items) {
  Json a = Json::array();
  for (const auto& s : items) a.push_back(s);
  return a;
}

inline std::vector<std::string> string_list_from(const Json& obj, const char* name,
                                                 const std::string& path) {
  const Json& a = JsonReader::array(JsonReader::field(obj, name, path), path + "." + name);
  std::vector<std::string> out;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!a[i].is_string()) {
      throw ParseError(path + "." + name + "[" + std::to_string(i) + "]", "expected a string");
    }
    out.push_back(a[i].get<std::string>());
  }
  return out;
}

inline std::map<std::string, std::string> string_map_from(const Json& j, const std::string& path) {
  JsonReader::object(j, path);
  std::map<std::string, std::string> out;
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (!it.value().is_string()) throw ParseError(path + "." + it.key(), "expected a string");
    out[it.key()] = it.value().get<std::string>();
  }
  return out;
}

}  // namespace detail

inline Json match_to_json(const Match& m) {
  Json nodes = Json::object(), edges = Json::object();
  for (const auto& [k, v] : m.node_map) nodes[k] = v;
  for (const auto& [k, v] : m.edge_map) edges[k] = v;
  Json j = Json::object();
  j["nodes"] = std::move(nodes);
  j["edges"] = std::move(edges);
  return j;
}

inline Json record_to_json(const CorrectionRecord& r) {
  Json j = Json::object();
  j["ruleId"] = r.rule_id;
  j["description"] = r.description;
  j["explanation"] = r.explanation;
  j["recommendation"] = std::string(to_string(r.recommendation));
  j["status"] = std::string(to_string(r.status));
  j["match"] = match_to_json(r.match);
  j["insertedNodeIds"] = detail::string_list(r.inserted_node_ids);
  j["insertedEdgeIds"] = detail::string_list(r.inserted_edge_ids);
  j["deletedNodeIds"] = detail::string_list(r.deleted_node_ids);
  j["deletedEdgeIds"] = detail::string_list(r.deleted_edge_ids);
  j["affectedTags"] = detail::string_list(r.affected_tags);
  return j;
}

inline CorrectionRecord record_from_json(const Json& j, const std::string& path) {
  using R = detail::JsonReader;
  R::object(j, path);
  CorrectionRecord r;
  r.rule_id = R::string(j, "ruleId", path);
  r.description = R::string(j, "description", path);
  r.explanation = R::string(j, "explanation", path);
  auto level = parse_recommendation(R::string(j, "recommendation", path));
  if (!level) throw ParseError(path + ".recommendation", "unknown level");
  r.recommendation = *level;
  auto status = parse_record_status(R::string(j, "status", path));
  if (!status) throw ParseError(path + ".status", "unknown status");
  r.status = *status;
  const Json& m = R::object(R::field(j, "match", path), path + ".match");
  r.match.node_map = detail::string_map_from(R::field(m, "nodes", path + ".match"), path + ".match.nodes");
  r.match.edge_map = detail::string_map_from(R::field(m, "edges", path + ".match"), path + ".match.edges");
  r.inserted_node_ids = detail::string_list_from(j, "insertedNodeIds", path);
  r.inserted_edge_ids = detail::string_list_from(j, "insertedEdgeIds", path);
  r.deleted_node_ids = detail::string_list_from(j, "deletedNodeIds", path);
  r.deleted_edge_ids = detail::string_list_from(j, "deletedEdgeIds", path);
  r.affected_tags = detail::string_list_from(j, "affectedTags", path);
  return r;
}

inline Json report_to_json(const RunReport& report, bool include_timings = true) {
  Json root = Json::object();
  root["formatVersion"] = kFormatVersion;
  Json meta = Json::object();
  for (const auto& [k, v] : report.graph_metadata) meta[k] = v;
  root["graphMetadata"] = std::move(meta);
  Json config = Json::object();
  config["mode"] = std::string(to_string(report.config.mode));
  config["recommendationThreshold"] = std::string(to_string(report.config.recommendation_threshold));
  config["milestoneFilter"] =
      report.config.milestone_filter ? Json(*report.config.milestone_filter) : Json(nullptr);
  config["maxApplicationsPerRule"] = report.config.max_applications_per_rule;
  root["config"] = std::move(config);
  Json records = Json::array();
  for (const auto& r : report.records) records.push_back(record_to_json(r));
  root["records"] = std::move(records);
  if (include_timings) {
    Json per_rule = Json::object();
    for (const auto& t : report.timings) per_rule[t.rule_id] = t.elapsed_ms;
    Json timings = Json::object();
    timings["perRuleMs"] = std::move(per_rule);
    timings["totalMs"] = report.total_elapsed_ms;
    root["timings"] = std::move(timings);
  }
  Json summary = Json::object();
  summary["records"] = report.records.size();
  for (const auto& [status, by_level] : report.summary()) {
    Json counts = Json::object();
    for (auto lvl : {Recommendation::mandatory, Recommendation::suggested,
                     Recommendation::consideration}) {
      counts[std::string(to_string(lvl))] = by_level.at(lvl);
    }
    summary[std::string(to_string(status))] = std::move(counts);
  }
  root["summary"] = std::move(summary);
  return root;
}

inline std::string render_json(const RunReport& report, bool include_timings = true) {
  return detail::dump(report_to_json(report, include_timings));
}

// Inverse of render_json. The summary block is derived data and is checked
// against the records rather than stored.
inline RunReport parse_report(std::string_view text) {
  using R = detail::JsonReader;
  Json root = R::parse_text(text);
  R::object(root, "$");
  R::version(root);
  RunReport report;
  report.graph_metadata = detail::string_map_from(R::field(root, "graphMetadata", "$"), "$.graphMetadata");
  const Json& config = R::object(R::field(root, "config", "$"), "$.config");
  std::string mode = R::string(config, "mode", "$.config");
  if (mode == "detect") {
    report.config.mode = EngineMode::detect;
  } else if (mode == "fix") {
    report.config.mode = EngineMode::fix;
  } else if (mode == "interactive") {
    report.config.mode = EngineMode::interactive;
  } else {
    throw ParseError("$.config.mode", "unknown mode '" + mode + "'");
  }
  auto level = parse_recommendation(R::string(config, "recommendationThreshold", "$.config"));
  if (!level) throw ParseError("$.config.recommendationThreshold", "unknown level");
  report.config.recommendation_threshold = *level;
  if (R::optional_field(config, "milestoneFilter")) {
    report.config.milestone_filter = R::string(config, "milestoneFilter", "$.config");
  }
  report.config.max_applications_per_rule =
      static_cast<int>(R::integer(config, "maxApplicationsPerRule", "$.config"));
  const Json& records = R::array(R::field(root, "records", "$"), "$.records");
  for (std::size_t i = 0; i < records.size(); ++i) {
    report.records.push_back(record_from_json(records[i], "$.records[" + std::to_string(i) + "]"));
  }
  if (const Json* timings = R::optional_field(root, "timings")) {
    R::object(*timings, "$.timings");
    const Json& per_rule = R::object(R::field(*timings, "perRuleMs", "$.timings"), "$.timings.perRuleMs");
    for (auto it = per_rule.begin(); it != per_rule.end(); ++it) {
      if (!it.value().is_number()) throw ParseError("$.timings.perRuleMs." + it.key(), "expected a number");
      report.timings.push_back({it.key(), it.value().get<double>()});
    }
    const Json& total = R::field(*timings, "totalMs", "$.timings");
    if (!total.is_number()) throw ParseError("$.timings.totalMs", "expected a number");
    report.total_elapsed_ms = total.get<double>();
  }
  if (const Json* summary = R::optional_field(root, "summary")) {
    if (*summary != report_to_json(report, false)["summary"]) {
      throw ParseError("$.summary", "counts disagree with records");
    }
  }
  return report;
}

// ---------------------------------------------------------------------------
// DOT

namespace detail {

inline std::string dot_quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    if (c == '\n') {
      out += "\\n";
      continue;
    }
    out += c;
  }
  return out + "\"";
}

inline std::string dot_node_label(const PidNode& n) {
  return n.tag ? *n.tag + "\n" + n.cls : n.id + "\n" + n.cls;
}

inline std::string dot_edge_style(const PidEdge& e) {
  std::string s = "label=" + dot_quote(std::string(to_string(e.kind)));
  if (e.kind == EdgeKind::signal) s += ", style=dashed";
  return s;
}

}  // namespace detail

// Graphviz rendering. With a diff, inserted elements are drawn red and
// removed ones (re-added as ghosts) blue; without one no colors are emitted.
inline std::string export_dot(const PidGraph& graph, const GraphDiff* changes = nullptr) {
  using detail::dot_quote;
  std::set<std::string> red_nodes, red_edges;
  if (changes) {
    for (const auto& n : changes->added_nodes) red_nodes.insert(n.id);
    for (const auto& e : changes->added_edges) red_edges.insert(e.id);
  }
  std::ostringstream os;
  os << "digraph pid {\n  rankdir=LR;\n  node [shape=box];\n";
  for (const auto& [id, n] : graph.nodes()) {
    os << "  " << dot_quote(id) << " [label=" << dot_quote(detail::dot_node_label(n));
    if (red_nodes.count(id)) os << ", color=red, fontcolor=red";
    os << "];\n";
  }
  if (changes) {
    for (const auto& n : changes->removed_nodes) {
      if (graph.has_node(n.id)) continue;
      os << "  " << dot_quote(n.id) << " [label=" << dot_quote(detail::dot_node_label(n))
         << ", color=blue, fontcolor=blue, style=dashed];\n";
    }
  }
  for (const auto& [id, e] : graph.edges()) {
    os << "  " << dot_quote(e.source) << " -> " << dot_quote(e.target) << " [id=" << dot_quote(id)
       << ", " << detail::dot_edge_style(e);
    if (red_edges.count(id)) os << ", color=red";
    os << "];\n";
  }
  if (changes) {
    for (const auto& e : changes->removed_edges) {
      if (graph.has_edge(e.id)) continue;
      os << "  " << dot_quote(e.source) << " -> " << dot_quote(e.target) << " [id="
         << dot_quote(e.id) << ", label=" << dot_quote(std::string(to_string(e.kind)))
         << ", color=blue, style=dashed];\n";
    }
  }
  os << "}\n";
  return os.str();
}

}  // namespace pidlint
