#pragma once

#include <cstdint>
#include <memory>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "pidlint/graph.hpp"
#include "pidlint/rule.hpp"

namespace pidlint {

inline constexpr const char* kFormatVersion = "1";

using Json = nlohmann::ordered_json;

namespace detail {

// Checked accessors that report failures as ParseError at a JSON path.
class JsonReader {
 public:
  static Json parse_text(std::string_view text) {
    try {
      return Json::parse(text.begin(), text.end());
    } catch (const nlohmann::json::parse_error& e) {
      throw ParseError("$", std::string("syntax error at byte ") + std::to_string(e.byte));
    }
  }

  static const Json& object(const Json& j, const std::string& path) {
    if (!j.is_object()) throw ParseError(path, "expected an object");
    return j;
  }

  static const Json& array(const Json& j, const std::string& path) {
    if (!j.is_array()) throw ParseError(path, "expected an array");
    return j;
  }

  static const Json& field(const Json& obj, const char* name, const std::string& path) {
    auto it = obj.find(name);
    if (it == obj.end()) throw ParseError(path + "." + name, "missing required field");
    return *it;
  }

  static const Json* optional_field(const Json& obj, const char* name) {
    auto it = obj.find(name);
    if (it == obj.end() || it->is_null()) return nullptr;
    return &*it;
  }

  static std::string string(const Json& obj, const char* name, const std::string& path) {
    const Json& v = field(obj, name, path);
    if (!v.is_string()) throw ParseError(path + "." + name, "expected a string");
    return v.get<std::string>();
  }

  static std::string nonempty_string(const Json& obj, const char* name, const std::string& path) {
    auto s = string(obj, name, path);
    if (s.empty()) throw ParseError(path + "." + name, "must not be empty");
    return s;
  }

  static bool boolean(const Json& obj, const char* name, const std::string& path) {
    const Json& v = field(obj, name, path);
    if (!v.is_boolean()) throw ParseError(path + "." + name, "expected a boolean");
    return v.get<bool>();
  }

  static std::int64_t integer(const Json& obj, const char* name, const std::string& path) {
    const Json& v = field(obj, name, path);
    if (v.is_number_unsigned()) {
      auto u = v.get<std::uint64_t>();
      if (u > static_cast<std::uint64_t>(INT64_MAX)) {
        throw ParseError(path + "." + name, "integer out of range");
      }
      return static_cast<std::int64_t>(u);
    }
    if (!v.is_number_integer()) throw ParseError(path + "." + name, "expected an integer");
    return v.get<std::int64_t>();
  }

  static Value scalar(const Json& v, const std::string& path) {
    if (v.is_boolean()) return v.get<bool>();
    if (v.is_number_unsigned()) {
      auto u = v.get<std::uint64_t>();
      if (u > static_cast<std::uint64_t>(INT64_MAX)) return static_cast<double>(u);
      return static_cast<std::int64_t>(u);
    }
    if (v.is_number_integer()) return v.get<std::int64_t>();
    if (v.is_number_float()) return v.get<double>();
    if (v.is_string()) return v.get<std::string>();
    throw ParseError(path, "expected a scalar (string, number or boolean)");
  }

  static AttributeMap attributes(const Json& obj, const std::string& path) {
    AttributeMap out;
    const Json* attrs = optional_field(obj, "attributes");
    if (!attrs) return out;
    std::string p = path + ".attributes";
    object(*attrs, p);
    for (auto it = attrs->begin(); it != attrs->end(); ++it) {
      out.emplace(it.key(), scalar(it.value(), p + "." + it.key()));
    }
    return out;
  }

  static void version(const Json& root) {
    std::string v = string(root, "formatVersion", "$");
    if (v != kFormatVersion) throw ParseError("$.formatVersion", "unsupported version '" + v + "'");
  }
};

inline Json value_to_json(const Value& v) {
  return std::visit([](const auto& x) { return Json(x); }, v);
}

inline Json attributes_to_json(const AttributeMap& attrs) {
  Json j = Json::object();
  for (const auto& [k, v] : attrs) j[k] = value_to_json(v);
  return j;
}

inline std::string dump(const Json& j) {
  return j.dump(2, ' ', false, Json::error_handler_t::replace) + "\n";
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Graph documents (*.pidg.json)

inline PidGraph graph_from_json(const Json& root,
                                std::shared_ptr<const Taxonomy> taxonomy = builtin_taxonomy(),
                                std::vector<std::string>* warnings = nullptr) {
  using R = detail::JsonReader;
  R::object(root, "$");
  R::version(root);
  static const std::set<std::string> known{"formatVersion", "metadata", "nodes", "edges"};
  for (auto it = root.begin(); it != root.end(); ++it) {
    if (!known.count(it.key()) && warnings) {
      warnings->push_back("ignoring unknown top-level field '" + it.key() + "'");
    }
  }

  PidGraph g(std::move(taxonomy));
  if (const Json* meta = R::optional_field(root, "metadata")) {
    R::object(*meta, "$.metadata");
    for (auto it = meta->begin(); it != meta->end(); ++it) {
      if (!it.value().is_string()) throw ParseError("$.metadata." + it.key(), "expected a string");
      g.metadata()[it.key()] = it.value().get<std::string>();
    }
  }

  const Json& nodes = R::array(R::field(root, "nodes", "$"), "$.nodes");
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    std::string p = "$.nodes[" + std::to_string(i) + "]";
    const Json& jn = R::object(nodes[i], p);
    PidNode n;
    n.id = R::nonempty_string(jn, "id", p);
    n.cls = R::nonempty_string(jn, "class", p);
    if (R::optional_field(jn, "tag")) n.tag = R::string(jn, "tag", p);
    n.attributes = R::attributes(jn, p);
    if (g.has_node(n.id)) throw ParseError(p + ".id", "duplicate node id '" + n.id + "'");
    if (!g.taxonomy().contains(n.cls)) {
      throw ParseError(p + ".class", "unknown class '" + n.cls + "'");
    }
    g.add_node(std::move(n));
  }

  const Json& edges = R::array(R::field(root, "edges", "$"), "$.edges");
  for (std::size_t i = 0; i < edges.size(); ++i) {
    std::string p = "$.edges[" + std::to_string(i) + "]";
    const Json& je = R::object(edges[i], p);
    PidEdge e;
    e.id = R::nonempty_string(je, "id", p);
    e.source = R::string(je, "source", p);
    e.target = R::string(je, "target", p);
    std::string kind = R::string(je, "kind", p);
    auto k = parse_edge_kind(kind);
    if (!k) throw ParseError(p + ".kind", "unknown edge kind '" + kind + "'");
    e.kind = *k;
    e.attributes = R::attributes(je, p);
    if (g.has_edge(e.id)) throw ParseError(p + ".id", "duplicate edge id '" + e.id + "'");
    if (!g.has_node(e.source)) throw ParseError(p + ".source", "unknown node '" + e.source + "'");
    if (!g.has_node(e.target)) throw ParseError(p + ".target", "unknown node '" + e.target + "'");
    g.add_edge(std::move(e));
  }
  return g;
}

inline PidGraph parse_graph(std::string_view text,
                            std::shared_ptr<const Taxonomy> taxonomy = builtin_taxonomy(),
                            std::vector<std::string>* warnings = nullptr) {
  return graph_from_json(detail::JsonReader::parse_text(text), std::move(taxonomy), warnings);
}

inline Json graph_to_json(const PidGraph& g) {
  Json root = Json::object();
  root["formatVersion"] = kFormatVersion;
  Json meta = Json::object();
  for (const auto& [k, v] : g.metadata()) meta[k] = v;
  root["metadata"] = meta;
  Json nodes = Json::array();
  for (const auto& [id, n] : g.nodes()) {
    Json jn = Json::object();
    jn["id"] = n.id;
    jn["class"] = n.cls;
    if (n.tag) jn["tag"] = *n.tag;
    jn["attributes"] = detail::attributes_to_json(n.attributes);
    nodes.push_back(std::move(jn));
  }
  root["nodes"] = std::move(nodes);
  Json edges = Json::array();
  for (const auto& [id, e] : g.edges()) {
    Json je = Json::object();
    je["id"] = e.id;
    je["source"] = e.source;
    je["target"] = e.target;
    je["kind"] = std::string(to_string(e.kind));
    je["attributes"] = detail::attributes_to_json(e.attributes);
    edges.push_back(std::move(je));
  }
  root["edges"] = std::move(edges);
  return root;
}

// Canonical: nodes and edges in id order, two-space indent, trailing newline.
inline std::string serialize_graph(const PidGraph& g) { return detail::dump(graph_to_json(g)); }

// ---------------------------------------------------------------------------
// Rule documents (*.rule.json)

namespace detail {

inline std::vector<Condition> conditions_from_json(const Json& obj, const std::string& path) {
  using R = JsonReader;
  std::vector<Condition> out;
  const Json* list = R::optional_field(obj, "conditions");
  if (!list) return out;
  std::string lp = path + ".conditions";
  R::array(*list, lp);
  for (std::size_t i = 0; i < list->size(); ++i) {
    std::string p = lp + "[" + std::to_string(i) + "]";
    const Json& jc = R::object((*list)[i], p);
    Condition c;
    c.attribute = R::nonempty_string(jc, "attribute", p);
    std::string op = R::string(jc, "operator", p);
    auto parsed = parse_condition_op(op);
    if (!parsed) throw ParseError(p + ".operator", "unknown operator '" + op + "'");
    c.op = *parsed;
    const Json& value = R::field(jc, "value", p);
    if (value.is_array()) {
      if (c.op != ConditionOp::in_set && c.op != ConditionOp::in_range) {
        throw ParseError(p + ".value", "operator '" + op + "' takes a single value");
      }
      for (std::size_t k = 0; k < value.size(); ++k) {
        c.operands.push_back(R::scalar(value[k], p + ".value[" + std::to_string(k) + "]"));
      }
    } else {
      if (c.op == ConditionOp::in_set || c.op == ConditionOp::in_range) {
        throw ParseError(p + ".value", "operator '" + op + "' takes a list");
      }
      c.operands.push_back(R::scalar(value, p + ".value"));
    }
    if (auto why = check_condition(c); !why.empty()) throw ParseError(p, why);
    out.push_back(std::move(c));
  }
  return out;
}

inline Json conditions_to_json(const std::vector<Condition>& conditions) {
  Json list = Json::array();
  for (const auto& c : conditions) {
    Json jc = Json::object();
    jc["attribute"] = c.attribute;
    jc["operator"] = std::string(to_string(c.op));
    if (c.op == ConditionOp::in_set || c.op == ConditionOp::in_range) {
      Json values = Json::array();
      for (const auto& v : c.operands) values.push_back(value_to_json(v));
      jc["value"] = std::move(values);
    } else {
      jc["value"] = value_to_json(c.operands.at(0));
    }
    list.push_back(std::move(jc));
  }
  return list;
}

inline Action action_from_json(const Json& obj, const std::string& path) {
  const Json* a = JsonReader::optional_field(obj, "action");
  if (!a) return Action::keep;
  if (!a->is_string()) throw ParseError(path + ".action", "expected a string");
  auto parsed = parse_action(a->get<std::string>());
  if (!parsed) throw ParseError(path + ".action", "unknown action '" + a->get<std::string>() + "'");
  return *parsed;
}

// Maps a validation violation onto the document path of the offending element.
inline std::string violation_path(const RuleGraph& rule, const RuleViolation& v) {
  if (v.element.rfind("meta.", 0) == 0) return "$." + v.element;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    if (rule.nodes[i].pattern.key == v.element) return "$.pattern.nodes[" + std::to_string(i) + "]";
  }
  for (std::size_t i = 0; i < rule.edges.size(); ++i) {
    if (rule.edges[i].pattern.key == v.element) return "$.pattern.edges[" + std::to_string(i) + "]";
  }
  return "$.pattern";
}

}  // namespace detail

inline RuleGraph rule_from_json(const Json& root, const Taxonomy& taxonomy = *builtin_taxonomy()) {
  using R = detail::JsonReader;
  R::object(root, "$");
  R::version(root);
  RuleGraph rule;
  const Json& meta = R::object(R::field(root, "meta", "$"), "$.meta");
  rule.meta.id = R::nonempty_string(meta, "id", "$.meta");
  rule.meta.milestone = R::nonempty_string(meta, "milestone", "$.meta");
  rule.meta.description = R::nonempty_string(meta, "description", "$.meta");
  rule.meta.explanation = R::nonempty_string(meta, "explanation", "$.meta");
  std::string level = R::string(meta, "recommendation", "$.meta");
  auto rec = parse_recommendation(level);
  if (!rec) throw ParseError("$.meta.recommendation", "unknown level '" + level + "'");
  rule.meta.recommendation = *rec;
  rule.meta.missing_component = R::boolean(meta, "missingComponent", "$.meta");
  rule.meta.source = R::nonempty_string(meta, "source", "$.meta");
  auto order = R::integer(meta, "order", "$.meta");
  if (order < INT32_MIN || order > INT32_MAX) throw ParseError("$.meta.order", "out of range");
  rule.meta.order = static_cast<int>(order);

  const Json& pattern = R::object(R::field(root, "pattern", "$"), "$.pattern");
  const Json& nodes = R::array(R::field(pattern, "nodes", "$.pattern"), "$.pattern.nodes");
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    std::string p = "$.pattern.nodes[" + std::to_string(i) + "]";
    const Json& jn = R::object(nodes[i], p);
    RuleNode n;
    n.pattern.key = R::nonempty_string(jn, "key", p);
    n.pattern.cls = R::nonempty_string(jn, "class", p);
    n.action = detail::action_from_json(jn, p);
    n.pattern.conditions = detail::conditions_from_json(jn, p);
    rule.nodes.push_back(std::move(n));
  }
  const Json& edges = R::array(R::field(pattern, "edges", "$.pattern"), "$.pattern.edges");
  for (std::size_t i = 0; i < edges.size(); ++i) {
    std::string p = "$.pattern.edges[" + std::to_string(i) + "]";
    const Json& je = R::object(edges[i], p);
    RuleEdge e;
    e.pattern.key = R::nonempty_string(je, "key", p);
    e.pattern.source_key = R::nonempty_string(je, "sourceKey", p);
    e.pattern.target_key = R::nonempty_string(je, "targetKey", p);
    if (!rule.find_node(e.pattern.source_key)) {
      throw ParseError(p + ".sourceKey", "no pattern node '" + e.pattern.source_key + "'");
    }
    if (!rule.find_node(e.pattern.target_key)) {
      throw ParseError(p + ".targetKey", "no pattern node '" + e.pattern.target_key + "'");
    }
    std::string kind = R::string(je, "kind", p);
    auto k = parse_edge_kind(kind);
    if (!k) throw ParseError(p + ".kind", "unknown edge kind '" + kind + "'");
    e.pattern.kind = *k;
    e.action = detail::action_from_json(je, p);
    e.pattern.conditions = detail::conditions_from_json(je, p);
    if (R::optional_field(je, "copyAttributesFrom")) {
      e.copy_attributes_from = R::nonempty_string(je, "copyAttributesFrom", p);
    }
    rule.edges.push_back(std::move(e));
  }

  auto violations = validate_rule(rule, taxonomy);
  if (!violations.empty()) {
    const auto& v = violations.front();
    throw ParseError(detail::violation_path(rule, v),
                     v.reason + (violations.size() > 1
                                     ? " (and " + std::to_string(violations.size() - 1) + " more)"
                                     : ""));
  }
  return rule;
}

inline RuleGraph load_rule(std::string_view text, const Taxonomy& taxonomy = *builtin_taxonomy()) {
  return rule_from_json(detail::JsonReader::parse_text(text), taxonomy);
}

inline Json rule_to_json(const RuleGraph& rule) {
  Json root = Json::object();
  root["formatVersion"] = kFormatVersion;
  Json meta = Json::object();
  meta["id"] = rule.meta.id;
  meta["milestone"] = rule.meta.milestone;
  meta["description"] = rule.meta.description;
  meta["explanation"] = rule.meta.explanation;
  meta["recommendation"] = std::string(to_string(rule.meta.recommendation));
  meta["missingComponent"] = rule.meta.missing_component;
  meta["source"] = rule.meta.source;
  meta["order"] = rule.meta.order;
  root["meta"] = std::move(meta);
  Json nodes = Json::array();
  for (const auto& n : rule.nodes) {
    Json jn = Json::object();
    jn["key"] = n.pattern.key;
    jn["class"] = n.pattern.cls;
    jn["action"] = std::string(to_string(n.action));
    jn["conditions"] = detail::conditions_to_json(n.pattern.conditions);
    nodes.push_back(std::move(jn));
  }
  Json edges = Json::array();
  for (const auto& e : rule.edges) {
    Json je = Json::object();
    je["key"] = e.pattern.key;
    je["sourceKey"] = e.pattern.source_key;
    je["targetKey"] = e.pattern.target_key;
    je["kind"] = std::string(to_string(e.pattern.kind));
    je["action"] = std::string(to_string(e.action));
    je["conditions"] = detail::conditions_to_json(e.pattern.conditions);
    if (e.copy_attributes_from) je["copyAttributesFrom"] = *e.copy_attributes_from;
    edges.push_back(std::move(je));
  }
  Json pattern = Json::object();
  pattern["nodes"] = std::move(nodes);
  pattern["edges"] = std::move(edges);
  root["pattern"] = std::move(pattern);
  return root;
}

inline std::string serialize_rule(const RuleGraph& rule) { return detail::dump(rule_to_json(rule)); }

// ---------------------------------------------------------------------------
// Taxonomy documents: {"classes": [{"name": ..., "parent": ...}, ...]}

inline Taxonomy parse_taxonomy(std::string_view text) {
  using R = detail::JsonReader;
  Json root = R::parse_text(text);
  R::object(root, "$");
  const Json& classes = R::array(R::field(root, "classes", "$"), "$.classes");
  std::vector<std::pair<std::string, std::string>> pairs;
  for (std::size_t i = 0; i < classes.size(); ++i) {
    std::string p = "$.classes[" + std::to_string(i) + "]";
    const Json& jc = R::object(classes[i], p);
    std::string name = R::nonempty_string(jc, "name", p);
    if (name == kRootClass) continue;
    pairs.emplace_back(name, R::nonempty_string(jc, "parent", p));
  }
  try {
    return Taxonomy::from_pairs(std::move(pairs));
  } catch (const TaxonomyError& e) {
    throw ParseError("$.classes", e.what());
  }
}

inline std::string serialize_taxonomy(const Taxonomy& taxonomy) {
  Json classes = Json::array();
  for (const auto& c : taxonomy.classes()) {
    Json jc = Json::object();
    jc["name"] = c.name;
    if (c.parent) jc["parent"] = *c.parent;
    classes.push_back(std::move(jc));
  }
  Json root = Json::object();
  root["classes"] = std::move(classes);
  return detail::dump(root);
}

}  // namespace pidlint
