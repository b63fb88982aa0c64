#pragma once

#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "pidlint/match.hpp"

namespace pidlint {

// Ordered from weakest to strongest.
enum class Recommendation { consideration, suggested, mandatory };

inline std::string_view to_string(Recommendation r) {
  switch (r) {
    case Recommendation::consideration: return "consideration";
    case Recommendation::suggested: return "suggested";
    case Recommendation::mandatory: return "mandatory";
  }
  return "?";
}

inline std::optional<Recommendation> parse_recommendation(std::string_view s) {
  if (s == "consideration") return Recommendation::consideration;
  if (s == "suggested") return Recommendation::suggested;
  if (s == "mandatory") return Recommendation::mandatory;
  return std::nullopt;
}

inline bool at_least(Recommendation level, Recommendation threshold) {
  return static_cast<int>(level) >= static_cast<int>(threshold);
}

// Red marks insert, blue marks delete; everything else is kept.
enum class Action { keep, insert, del };

inline std::string_view to_string(Action a) {
  switch (a) {
    case Action::keep: return "keep";
    case Action::insert: return "insert";
    case Action::del: return "delete";
  }
  return "?";
}

inline std::optional<Action> parse_action(std::string_view s) {
  if (s == "keep") return Action::keep;
  if (s == "insert") return Action::insert;
  if (s == "delete") return Action::del;
  return std::nullopt;
}

struct RuleMeta {
  std::string id;
  std::string milestone;
  std::string description;
  std::string explanation;
  Recommendation recommendation = Recommendation::suggested;
  bool missing_component = false;
  std::string source;
  int order = 0;  // lower runs first

  bool operator==(const RuleMeta&) const = default;
};

struct RuleNode {
  PatternNode pattern;
  Action action = Action::keep;

  bool operator==(const RuleNode&) const = default;
};

struct RuleEdge {
  PatternEdge pattern;
  Action action = Action::keep;
  // Key of an erroneous-pattern edge whose attributes the inserted edge inherits.
  std::optional<std::string> copy_attributes_from;

  bool operator==(const RuleEdge&) const = default;
};

struct RuleGraph {
  RuleMeta meta;
  std::vector<RuleNode> nodes;
  std::vector<RuleEdge> edges;

  const RuleNode* find_node(const std::string& key) const {
    for (const auto& n : nodes) {
      if (n.pattern.key == key) return &n;
    }
    return nullptr;
  }

  const RuleEdge* find_edge(const std::string& key) const {
    for (const auto& e : edges) {
      if (e.pattern.key == key) return &e;
    }
    return nullptr;
  }

  bool operator==(const RuleGraph&) const = default;
};

namespace detail {

inline Pattern project(const RuleGraph& rule, Action excluded) {
  Pattern p;
  for (const auto& n : rule.nodes) {
    if (n.action != excluded) p.nodes.push_back(n.pattern);
  }
  for (const auto& e : rule.edges) {
    if (e.action != excluded) p.edges.push_back(e.pattern);
  }
  return p;
}

}  // namespace detail

// Keep + delete elements: what must be present for the rule to fire.
inline Pattern erroneous_pattern(const RuleGraph& rule) {
  return detail::project(rule, Action::insert);
}

// Keep + insert elements: the region after the correction has been applied.
inline Pattern corrected_pattern(const RuleGraph& rule) {
  return detail::project(rule, Action::del);
}

struct RuleViolation {
  std::string element;  // element key, or "meta.<field>"
  std::string reason;

  bool operator==(const RuleViolation&) const = default;
};

inline std::vector<RuleViolation> validate_rule(const RuleGraph& rule,
                                                const Taxonomy& taxonomy = *builtin_taxonomy()) {
  std::vector<RuleViolation> out;
  auto require = [&](const std::string& value, const char* field) {
    if (value.empty()) out.push_back({std::string("meta.") + field, "must not be empty"});
  };
  require(rule.meta.id, "id");
  require(rule.meta.milestone, "milestone");
  require(rule.meta.description, "description");
  require(rule.meta.explanation, "explanation");
  require(rule.meta.source, "source");

  std::set<std::string> keys;
  for (const auto& n : rule.nodes) {
    const auto& key = n.pattern.key;
    if (key.empty()) out.push_back({key, "node key must not be empty"});
    if (!keys.insert(key).second) out.push_back({key, "duplicate key"});
    if (!taxonomy.contains(n.pattern.cls)) {
      out.push_back({key, "unknown class '" + n.pattern.cls + "'"});
    }
    if (n.action == Action::insert && !n.pattern.conditions.empty()) {
      out.push_back({key, "inserted node carries conditions"});
    }
    for (const auto& c : n.pattern.conditions) {
      if (auto why = check_condition(c); !why.empty()) out.push_back({key, why});
    }
  }
  for (const auto& e : rule.edges) {
    const auto& key = e.pattern.key;
    if (key.empty()) out.push_back({key, "edge key must not be empty"});
    if (!keys.insert(key).second) out.push_back({key, "duplicate key"});
    const RuleNode* src = rule.find_node(e.pattern.source_key);
    const RuleNode* dst = rule.find_node(e.pattern.target_key);
    if (!src) out.push_back({key, "unknown source key '" + e.pattern.source_key + "'"});
    if (!dst) out.push_back({key, "unknown target key '" + e.pattern.target_key + "'"});
    if (src && dst) {
      auto touches = [&](Action a) { return src->action == a || dst->action == a; };
      switch (e.action) {
        case Action::insert:
          if (touches(Action::del)) out.push_back({key, "inserted edge references a deleted node"});
          break;
        case Action::del:
          if (touches(Action::insert)) {
            out.push_back({key, "deleted edge references an inserted node"});
          }
          break;
        case Action::keep:
          if (touches(Action::del) || touches(Action::insert)) {
            out.push_back({key, "kept edge must connect kept nodes"});
          }
          break;
      }
    }
    if (e.action == Action::insert && !e.pattern.conditions.empty()) {
      out.push_back({key, "inserted edge carries conditions"});
    }
    for (const auto& c : e.pattern.conditions) {
      if (auto why = check_condition(c); !why.empty()) out.push_back({key, why});
    }
    if (e.copy_attributes_from) {
      const RuleEdge* from = rule.find_edge(*e.copy_attributes_from);
      if (e.action != Action::insert) {
        out.push_back({key, "copyAttributesFrom is only allowed on inserted edges"});
      }
      if (!from || from->action == Action::insert) {
        out.push_back({key, "copyAttributesFrom must name an erroneous-pattern edge"});
      }
    }
  }

  Pattern erroneous = erroneous_pattern(rule);
  if (erroneous.nodes.empty()) {
    out.push_back({rule.meta.id, "erroneous pattern is empty"});
  } else if (!is_connected(erroneous)) {
    out.push_back({rule.meta.id, "erroneous pattern is not connected"});
  }
  if (!is_connected(corrected_pattern(rule))) {
    out.push_back({rule.meta.id, "corrected pattern is not connected"});
  }
  return out;
}

}  // namespace pidlint
