#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pidlint/graph.hpp"

namespace pidlint {

// Reserved attribute name under which node conditions can read the node's class.
inline constexpr const char* kClassAttribute = "class";

enum class ConditionOp { eq, ne, lt, le, gt, ge, in_set, in_range };

inline std::string_view to_string(ConditionOp op) {
  switch (op) {
    case ConditionOp::eq: return "eq";
    case ConditionOp::ne: return "ne";
    case ConditionOp::lt: return "lt";
    case ConditionOp::le: return "le";
    case ConditionOp::gt: return "gt";
    case ConditionOp::ge: return "ge";
    case ConditionOp::in_set: return "in_set";
    case ConditionOp::in_range: return "in_range";
  }
  return "?";
}

inline std::optional<ConditionOp> parse_condition_op(std::string_view s) {
  for (auto op : {ConditionOp::eq, ConditionOp::ne, ConditionOp::lt, ConditionOp::le,
                  ConditionOp::gt, ConditionOp::ge, ConditionOp::in_set, ConditionOp::in_range}) {
    if (to_string(op) == s) return op;
  }
  return std::nullopt;
}

// Predicate on one attribute of a node or edge.
//   scalar operators (eq..ge): operands has exactly one value
//   in_set:                    one or more values
//   in_range:                  [low, high], inclusive, numeric
struct Condition {
  std::string attribute;
  ConditionOp op = ConditionOp::eq;
  std::vector<Value> operands;

  bool operator==(const Condition&) const = default;
};

inline bool is_numeric_op(ConditionOp op) {
  return op == ConditionOp::lt || op == ConditionOp::le || op == ConditionOp::gt ||
         op == ConditionOp::ge || op == ConditionOp::in_range;
}

// Empty string when well formed, otherwise the reason.
inline std::string check_condition(const Condition& c) {
  if (c.attribute.empty()) return "condition attribute must not be empty";
  switch (c.op) {
    case ConditionOp::in_set:
      if (c.operands.empty()) return "in_set needs at least one value";
      break;
    case ConditionOp::in_range:
      if (c.operands.size() != 2) return "in_range needs [low, high]";
      break;
    default:
      if (c.operands.size() != 1) {
        return std::string(to_string(c.op)) + " needs exactly one value";
      }
  }
  if (is_numeric_op(c.op)) {
    for (const auto& v : c.operands) {
      if (!is_numeric(v)) return std::string(to_string(c.op)) + " needs numeric operands";
    }
    if (c.op == ConditionOp::in_range && as_double(c.operands[0]) > as_double(c.operands[1])) {
      return "in_range low exceeds high";
    }
  }
  return {};
}

namespace detail {

// nullopt when the two values are not comparable (different kinds).
inline std::optional<int> compare_values(const Value& a, const Value& b) {
  if (is_numeric(a) && is_numeric(b)) {
    double x = as_double(a), y = as_double(b);
    return x < y ? -1 : (x > y ? 1 : 0);
  }
  if (a.index() != b.index()) return std::nullopt;
  if (auto* s = std::get_if<std::string>(&a)) {
    int c = s->compare(std::get<std::string>(b));
    return c < 0 ? -1 : (c > 0 ? 1 : 0);
  }
  bool x = std::get<bool>(a), y = std::get<bool>(b);
  return x == y ? 0 : (x ? 1 : -1);
}

}  // namespace detail

// Total: an absent attribute or a type mismatch yields false.
inline bool eval_condition(const Condition& c, const Value& actual) {
  using detail::compare_values;
  if (c.operands.empty()) return false;
  switch (c.op) {
    case ConditionOp::eq:
    case ConditionOp::ne: {
      auto cmp = compare_values(actual, c.operands[0]);
      if (!cmp) return false;
      return c.op == ConditionOp::eq ? *cmp == 0 : *cmp != 0;
    }
    case ConditionOp::lt:
    case ConditionOp::le:
    case ConditionOp::gt:
    case ConditionOp::ge: {
      if (!is_numeric(actual) || !is_numeric(c.operands[0])) return false;
      int cmp = *compare_values(actual, c.operands[0]);
      if (c.op == ConditionOp::lt) return cmp < 0;
      if (c.op == ConditionOp::le) return cmp <= 0;
      if (c.op == ConditionOp::gt) return cmp > 0;
      return cmp >= 0;
    }
    case ConditionOp::in_set:
      return std::any_of(c.operands.begin(), c.operands.end(), [&](const Value& v) {
        auto cmp = compare_values(actual, v);
        return cmp && *cmp == 0;
      });
    case ConditionOp::in_range: {
      if (c.operands.size() != 2 || !is_numeric(actual) || !is_numeric(c.operands[0]) ||
          !is_numeric(c.operands[1])) {
        return false;
      }
      double x = as_double(actual);
      return as_double(c.operands[0]) <= x && x <= as_double(c.operands[1]);
    }
  }
  return false;
}

inline bool eval_condition(const Condition& c, const AttributeMap& attributes) {
  auto it = attributes.find(c.attribute);
  if (it == attributes.end()) return false;
  return eval_condition(c, it->second);
}

// Node conditions additionally see the node's class under kClassAttribute.
inline bool eval_condition(const Condition& c, const PidNode& node) {
  if (c.attribute == kClassAttribute) return eval_condition(c, Value{node.cls});
  return eval_condition(c, node.attributes);
}

inline bool eval_condition(const Condition& c, const PidEdge& edge) {
  return eval_condition(c, edge.attributes);
}

}  // namespace pidlint
