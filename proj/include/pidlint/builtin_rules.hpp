#pragma once

#include <string>
#include <vector>

#include "pidlint/rule.hpp"

namespace pidlint {

namespace detail {

inline RuleNode rule_node(std::string key, std::string cls, Action action = Action::keep,
                          std::vector<Condition> conditions = {}) {
  return {PatternNode{std::move(key), std::move(cls), std::move(conditions)}, action};
}

inline RuleEdge rule_edge(std::string key, std::string source, std::string target, EdgeKind kind,
                          Action action = Action::keep, std::vector<Condition> conditions = {},
                          std::optional<std::string> copy_from = std::nullopt) {
  return {PatternEdge{std::move(key), std::move(source), std::move(target), kind,
                      std::move(conditions)},
          action, std::move(copy_from)};
}

inline Condition class_is_not(std::string cls) {
  return {kClassAttribute, ConditionOp::ne, {Value{std::move(cls)}}};
}

}  // namespace detail

// Globe control valve on a line of DN 100 or more is replaced by a ball valve.
inline RuleGraph rule_large_globe_valve() {
  using namespace detail;
  RuleGraph r;
  r.meta = {"3",
            "issue for design",
            "Do not install a globe valve as a control valve if the pipe diameter is greater or "
            "equal to 100 DN (or 4\").",
            "Large globe valves have higher costs compared to other valve types.",
            Recommendation::suggested,
            false,
            "Engineering heuristics; replacement valve class BallValve is an implementation choice.",
            10};
  const auto P = EdgeKind::pipe;
  const auto S = EdgeKind::signal;
  r.nodes = {
      rule_node("upstream", kRootClass),
      rule_node("globe", "GlobeValve", Action::del),
      rule_node("downstream", kRootClass),
      rule_node("actuator", "Actuator"),
      rule_node("ball", "BallValve", Action::insert),
  };
  r.edges = {
      rule_edge("inlet", "upstream", "globe", P, Action::del,
                {Condition{"nominalDiameterDN", ConditionOp::ge, {Value{std::int64_t{100}}}}}),
      rule_edge("outlet", "globe", "downstream", P, Action::del),
      rule_edge("drive", "actuator", "globe", S, Action::del),
      rule_edge("new_inlet", "upstream", "ball", P, Action::insert, {}, "inlet"),
      rule_edge("new_outlet", "ball", "downstream", P, Action::insert, {}, "outlet"),
      rule_edge("new_drive", "actuator", "ball", S, Action::insert, {}, "drive"),
  };
  return r;
}

inline RuleGraph rule_vessel_level_instrument() {
  using namespace detail;
  RuleGraph r;
  r.meta = {"9",
            "issue for review",
            "Install a level instrument on a vessel.",
            "Monitoring the vessel level regularly can prevent accidents caused by overflow.",
            Recommendation::mandatory,
            true,
            "Engineering heuristics",
            20};
  r.nodes = {
      rule_node("vessel", "Vessel"),
      rule_node("level", "LevelInstrument", Action::insert),
  };
  r.edges = {rule_edge("sensing", "vessel", "level", EdgeKind::signal, Action::insert)};
  return r;
}

inline RuleGraph rule_pump_suction_strainer() {
  using namespace detail;
  RuleGraph r;
  r.meta = {"10",
            "issue for review",
            "Install a strainer in the suction line of a pump.",
            "The strainer separates solid matter, which can potentially damage the pump, from the "
            "fluid.",
            Recommendation::suggested,
            true,
            "Engineering heuristics",
            40};
  const auto P = EdgeKind::pipe;
  r.nodes = {
      rule_node("upstream", kRootClass),
      rule_node("pump", "Pump"),
      rule_node("strainer", "Strainer", Action::insert),
  };
  r.edges = {
      rule_edge("suction", "upstream", "pump", P, Action::del),
      rule_edge("to_strainer", "upstream", "strainer", P, Action::insert, {}, "suction"),
      rule_edge("to_pump", "strainer", "pump", P, Action::insert, {}, "suction"),
  };
  return r;
}

inline RuleGraph rule_pump_discharge_check_valve() {
  using namespace detail;
  RuleGraph r;
  r.meta = {"19",
            "issue for review",
            "Install a check valve on a pump's discharge line to avoid backflow.",
            "Backflow is dangerous to the pump because the pump is designed for one-way flow.",
            Recommendation::suggested,
            true,
            "Engineering heuristics",
            50};
  const auto P = EdgeKind::pipe;
  r.nodes = {
      rule_node("pump", "Pump"),
      rule_node("downstream", kRootClass),
      rule_node("check", "CheckValve", Action::insert),
  };
  r.edges = {
      rule_edge("discharge", "pump", "downstream", P, Action::del),
      rule_edge("to_check", "pump", "check", P, Action::insert, {}, "discharge"),
      rule_edge("from_check", "check", "downstream", P, Action::insert, {}, "discharge"),
  };
  return r;
}

// Block valves on both sides of the pump, each with a drain. The suction side
// must not already end in a strainer and the discharge side not in a check
// valve; those are placed inside the block valves by the later pump rules.
inline RuleGraph rule_pump_isolation() {
  using namespace detail;
  RuleGraph r;
  r.meta = {"21",
            "issue for review",
            "Install block valves and a drain in the suction and discharge of a pump.",
            "Isolate the pump during maintenance.",
            Recommendation::mandatory,
            true,
            "Engineering heuristics",
            30};
  const auto P = EdgeKind::pipe;
  r.nodes = {
      rule_node("upstream", kRootClass, Action::keep, {class_is_not("Strainer")}),
      rule_node("pump", "Pump"),
      rule_node("downstream", kRootClass, Action::keep, {class_is_not("CheckValve")}),
      rule_node("suction_block", "GateValve", Action::insert),
      rule_node("discharge_block", "GateValve", Action::insert),
      rule_node("suction_drain", "DrainValve", Action::insert),
      rule_node("discharge_drain", "DrainValve", Action::insert),
  };
  r.edges = {
      rule_edge("suction", "upstream", "pump", P, Action::del),
      rule_edge("discharge", "pump", "downstream", P, Action::del),
      rule_edge("to_suction_block", "upstream", "suction_block", P, Action::insert, {}, "suction"),
      rule_edge("suction_block_to_pump", "suction_block", "pump", P, Action::insert, {}, "suction"),
      rule_edge("pump_to_discharge_block", "pump", "discharge_block", P, Action::insert, {},
                "discharge"),
      rule_edge("from_discharge_block", "discharge_block", "downstream", P, Action::insert, {},
                "discharge"),
      rule_edge("suction_drain_line", "suction_block", "suction_drain", P, Action::insert),
      rule_edge("discharge_drain_line", "discharge_block", "discharge_drain", P, Action::insert),
  };
  return r;
}

// Sorted by application order.
inline std::vector<RuleGraph> builtin_rules() {
  return {rule_large_globe_valve(), rule_vessel_level_instrument(), rule_pump_isolation(),
          rule_pump_suction_strainer(), rule_pump_discharge_check_valve()};
}

}  // namespace pidlint
