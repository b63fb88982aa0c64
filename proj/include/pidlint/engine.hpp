#pragma once

#include <algorithm>
#include <chrono>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <tuple>
#include <utility>
#include <vector>

#include "pidlint/graph.hpp"
#include "pidlint/match.hpp"
#include "pidlint/rule.hpp"

namespace pidlint {

enum class EngineMode { detect, fix, interactive };

inline std::string_view to_string(EngineMode m) {
  switch (m) {
    case EngineMode::detect: return "detect";
    case EngineMode::fix: return "fix";
    case EngineMode::interactive: return "interactive";
  }
  return "?";
}

enum class RecordStatus { proposed, applied, rejected };

inline std::string_view to_string(RecordStatus s) {
  switch (s) {
    case RecordStatus::proposed: return "proposed";
    case RecordStatus::applied: return "applied";
    case RecordStatus::rejected: return "rejected";
  }
  return "?";
}

inline std::optional<RecordStatus> parse_record_status(std::string_view s) {
  if (s == "proposed") return RecordStatus::proposed;
  if (s == "applied") return RecordStatus::applied;
  if (s == "rejected") return RecordStatus::rejected;
  return std::nullopt;
}

struct EngineConfig {
  Recommendation recommendation_threshold = Recommendation::consideration;
  std::optional<std::string> milestone_filter;
  int max_applications_per_rule = 100;
  EngineMode mode = EngineMode::fix;

  bool operator==(const EngineConfig&) const = default;
};

// One rule instance, either proposed against a graph or already applied to it.
struct CorrectionRecord {
  std::string rule_id;
  std::string description;
  Match match;
  std::vector<std::string> inserted_node_ids;
  std::vector<std::string> inserted_edge_ids;
  std::vector<std::string> deleted_node_ids;
  std::vector<std::string> deleted_edge_ids;
  std::string explanation;
  Recommendation recommendation = Recommendation::suggested;
  RecordStatus status = RecordStatus::proposed;
  std::vector<std::string> affected_tags;  // tags of the matched nodes, sorted

  bool operator==(const CorrectionRecord&) const = default;
};

// Identity of a proposal across re-analyses: rule id plus the sorted node image.
inline std::string fingerprint(const std::string& rule_id, const Match& m) {
  std::string fp = rule_id + "|";
  bool first = true;
  for (const auto& id : m.node_image()) {
    if (!first) fp += ",";
    fp += id;
    first = false;
  }
  return fp;
}

inline std::string fingerprint(const CorrectionRecord& r) { return fingerprint(r.rule_id, r.match); }

// True when a missing-component rule's erroneous match lies inside a match of
// its corrected pattern, i.e. the protective component is already there.
inline bool is_suppressed(const RuleGraph& rule, const Match& erroneous_match,
                          const PidGraph& graph) {
  if (!rule.meta.missing_component) return false;
  auto wanted = erroneous_match.node_image();
  // Kept nodes with a concrete class (the pump, the vessel) are anchors and
  // must be the same graph node in both matches. Wildcard neighbours may shift
  // roles, e.g. an existing block valve is the erroneous match's `upstream`.
  auto same_anchors = [&](const Match& m) {
    for (const auto& n : rule.nodes) {
      if (n.action != Action::keep || n.pattern.cls == kRootClass) continue;
      if (m.node_map.at(n.pattern.key) != erroneous_match.node_map.at(n.pattern.key)) return false;
    }
    return true;
  };
  for (const auto& m : find_matches(corrected_pattern(rule), graph)) {
    auto have = m.node_image();
    if (std::includes(have.begin(), have.end(), wanted.begin(), wanted.end()) && same_anchors(m)) {
      return true;
    }
  }
  return false;
}

namespace detail {

// `<prefix><n>` with the smallest n >= 1 not yet used.
template <typename Taken>
std::string fresh_id(const std::string& prefix, Taken&& taken) {
  for (std::size_t n = 1;; ++n) {
    std::string id = prefix + std::to_string(n);
    if (!taken(id)) return id;
  }
}

}  // namespace detail

// Executes one correction in place. Throws StaleMatchError if `match` is no
// longer an erroneous-pattern match in `graph`.
inline CorrectionRecord apply_match(const RuleGraph& rule, const Match& match, PidGraph& graph) {
  if (!verify_match(erroneous_pattern(rule), match, graph)) {
    throw StaleMatchError("match for rule " + rule.meta.id + " is no longer valid");
  }
  CorrectionRecord rec;
  rec.rule_id = rule.meta.id;
  rec.description = rule.meta.description;
  rec.explanation = rule.meta.explanation;
  rec.recommendation = rule.meta.recommendation;
  rec.match = match;
  rec.status = RecordStatus::applied;

  std::set<std::string> tags;
  for (const auto& [key, id] : match.node_map) {
    if (const auto& tag = graph.node(id).tag) tags.insert(*tag);
  }
  rec.affected_tags.assign(tags.begin(), tags.end());

  // Attribute sources are captured before anything is removed.
  std::map<std::string, AttributeMap> edge_attributes;
  for (const auto& [key, id] : match.edge_map) edge_attributes[key] = graph.edge(id).attributes;

  std::set<std::string> removed_edges;
  for (const auto& e : rule.edges) {
    if (e.action != Action::del) continue;
    const std::string& id = match.edge_map.at(e.pattern.key);
    graph.remove_edge(id);
    removed_edges.insert(id);
    rec.deleted_edge_ids.push_back(id);
  }
  for (const auto& n : rule.nodes) {
    if (n.action != Action::del) continue;
    const std::string& id = match.node_map.at(n.pattern.key);
    for (auto& eid : graph.remove_node(id)) {
      if (removed_edges.insert(eid).second) rec.deleted_edge_ids.push_back(eid);
    }
    rec.deleted_node_ids.push_back(id);
  }

  std::map<std::string, std::string> endpoint = match.node_map;
  for (const auto& n : rule.nodes) {
    if (n.action != Action::insert) continue;
    std::string id = detail::fresh_id(rule.meta.id + ":" + n.pattern.cls + ":",
                                      [&](const std::string& c) { return graph.has_node(c); });
    graph.add_node({id, n.pattern.cls, std::nullopt, {}});
    endpoint[n.pattern.key] = id;
    rec.inserted_node_ids.push_back(id);
  }
  for (const auto& e : rule.edges) {
    if (e.action != Action::insert) continue;
    std::string id = detail::fresh_id(rule.meta.id + ":" + std::string(to_string(e.pattern.kind)) + ":",
                                      [&](const std::string& c) { return graph.has_edge(c); });
    PidEdge edge{id, endpoint.at(e.pattern.source_key), endpoint.at(e.pattern.target_key),
                 e.pattern.kind, {}};
    if (e.copy_attributes_from) edge.attributes = edge_attributes.at(*e.copy_attributes_from);
    graph.add_edge(std::move(edge));
    rec.inserted_edge_ids.push_back(id);
  }
  return rec;
}

// Proposals for every unsuppressed erroneous match, without touching `graph`.
inline std::vector<CorrectionRecord> detect_rule(const RuleGraph& rule, const PidGraph& graph) {
  std::vector<CorrectionRecord> out;
  for (const auto& m : find_matches(erroneous_pattern(rule), graph)) {
    if (is_suppressed(rule, m, graph)) continue;
    PidGraph scratch = graph;
    CorrectionRecord rec = apply_match(rule, m, scratch);
    rec.status = RecordStatus::proposed;
    out.push_back(std::move(rec));
  }
  return out;
}

// Fix mode: apply the first unsuppressed match, re-match, repeat until none
// remain. Detect and interactive modes only propose.
inline std::vector<CorrectionRecord> run_rule(const RuleGraph& rule, PidGraph& graph,
                                              const EngineConfig& config = {}) {
  if (config.mode != EngineMode::fix) return detect_rule(rule, graph);
  std::vector<CorrectionRecord> records;
  while (true) {
    std::optional<Match> next;
    for (auto& m : find_matches(erroneous_pattern(rule), graph)) {
      if (!is_suppressed(rule, m, graph)) {
        next = std::move(m);
        break;
      }
    }
    if (!next) break;
    if (static_cast<int>(records.size()) >= config.max_applications_per_rule) {
      throw NonConvergenceError(rule.meta.id, config.max_applications_per_rule);
    }
    records.push_back(apply_match(rule, *next, graph));
  }
  return records;
}

struct RuleTiming {
  std::string rule_id;
  double elapsed_ms = 0.0;

  bool operator==(const RuleTiming&) const = default;
};

struct RunResult {
  std::vector<CorrectionRecord> records;
  std::vector<RuleTiming> timings;  // in application order
  double total_elapsed_ms = 0.0;
};

// The rules that run under `config`, in application order (meta.order, then id).
inline std::vector<const RuleGraph*> select_rules(const std::vector<RuleGraph>& rules,
                                                  const EngineConfig& config) {
  std::set<std::string> ids;
  std::vector<const RuleGraph*> selected;
  for (const auto& r : rules) {
    if (!ids.insert(r.meta.id).second) throw RuleError("duplicate rule id '" + r.meta.id + "'");
    if (!at_least(r.meta.recommendation, config.recommendation_threshold)) continue;
    if (config.milestone_filter && r.meta.milestone != *config.milestone_filter) continue;
    selected.push_back(&r);
  }
  std::stable_sort(selected.begin(), selected.end(), [](const RuleGraph* a, const RuleGraph* b) {
    return std::tie(a->meta.order, a->meta.id) < std::tie(b->meta.order, b->meta.id);
  });
  return selected;
}

inline RunResult run_all(const std::vector<RuleGraph>& rules, PidGraph& graph,
                         const EngineConfig& config = {}) {
  if (config.max_applications_per_rule < 1) {
    throw RuleError("maxApplicationsPerRule must be at least 1");
  }
  using Clock = std::chrono::steady_clock;
  auto ms_since = [](Clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
  };
  RunResult result;
  auto start = Clock::now();
  for (const RuleGraph* rule : select_rules(rules, config)) {
    auto t0 = Clock::now();
    auto records = run_rule(*rule, graph, config);
    result.timings.push_back({rule->meta.id, ms_since(t0)});
    for (auto& r : records) result.records.push_back(std::move(r));
  }
  result.total_elapsed_ms = ms_since(start);
  return result;
}

struct GraphDiff {
  std::vector<PidNode> added_nodes;
  std::vector<PidNode> removed_nodes;
  std::vector<PidEdge> added_edges;
  std::vector<PidEdge> removed_edges;

  bool empty() const {
    return added_nodes.empty() && removed_nodes.empty() && added_edges.empty() &&
           removed_edges.empty();
  }

  bool operator==(const GraphDiff&) const = default;
};

// Set differences by id. An element whose id survives but whose content
// changed appears as removed and added.
inline GraphDiff diff(const PidGraph& before, const PidGraph& after) {
  GraphDiff d;
  for (const auto& [id, n] : before.nodes()) {
    auto it = after.nodes().find(id);
    if (it == after.nodes().end() || !(it->second == n)) d.removed_nodes.push_back(n);
  }
  for (const auto& [id, n] : after.nodes()) {
    auto it = before.nodes().find(id);
    if (it == before.nodes().end() || !(it->second == n)) d.added_nodes.push_back(n);
  }
  for (const auto& [id, e] : before.edges()) {
    auto it = after.edges().find(id);
    if (it == after.edges().end() || !(it->second == e)) d.removed_edges.push_back(e);
  }
  for (const auto& [id, e] : after.edges()) {
    auto it = before.edges().find(id);
    if (it == before.edges().end() || !(it->second == e)) d.added_edges.push_back(e);
  }
  return d;
}

inline PidGraph apply_diff(const PidGraph& before, const GraphDiff& d) {
  PidGraph g = before;
  for (const auto& e : d.removed_edges) {
    if (g.has_edge(e.id)) g.remove_edge(e.id);
  }
  for (const auto& n : d.removed_nodes) g.remove_node(n.id);
  for (const auto& n : d.added_nodes) g.add_node(n);
  for (const auto& e : d.added_edges) g.add_edge(e);
  return g;
}

}  // namespace pidlint
