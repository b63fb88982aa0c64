#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "pidlint/error.hpp"

namespace pidlint {

inline constexpr const char* kRootClass = "AnyComponent";

struct ComponentClass {
  std::string name;
  std::optional<std::string> parent;  // empty only for the root

  bool operator==(const ComponentClass&) const = default;
};

// Rooted class tree used for subsumption when matching pattern classes.
// Classes are registered parent-first, so the tree can never contain a cycle.
class Taxonomy {
 public:
  Taxonomy() { classes_.emplace(kRootClass, ComponentClass{kRootClass, std::nullopt}); }

  void add_class(const std::string& name, const std::string& parent) {
    if (name.empty()) throw TaxonomyError("class name must not be empty");
    if (classes_.count(name)) throw TaxonomyError("duplicate class '" + name + "'");
    if (!classes_.count(parent)) {
      throw TaxonomyError("unknown parent class '" + parent + "' for '" + name + "'");
    }
    classes_.emplace(name, ComponentClass{name, parent});
  }

  bool contains(const std::string& name) const { return classes_.count(name) != 0; }

  const ComponentClass& at(const std::string& name) const {
    auto it = classes_.find(name);
    if (it == classes_.end()) throw TaxonomyError("unknown class '" + name + "'");
    return it->second;
  }

  // True iff `candidate` equals `ancestor` or `ancestor` lies on its parent chain.
  bool is_subclass(const std::string& candidate, const std::string& ancestor) const {
    at(ancestor);
    const ComponentClass* cls = &at(candidate);
    while (true) {
      if (cls->name == ancestor) return true;
      if (!cls->parent) return false;
      cls = &at(*cls->parent);
    }
  }

  std::vector<std::string> ancestors(const std::string& name) const {
    std::vector<std::string> chain;
    const ComponentClass* cls = &at(name);
    while (cls->parent) {
      chain.push_back(*cls->parent);
      cls = &at(*cls->parent);
    }
    return chain;
  }

  // Sorted by name.
  std::vector<ComponentClass> classes() const {
    std::vector<ComponentClass> out;
    out.reserve(classes_.size());
    for (const auto& [name, cls] : classes_) out.push_back(cls);
    return out;
  }

  std::size_t size() const noexcept { return classes_.size(); }

  // Builds a taxonomy from (name, parent) pairs given in any order.
  static Taxonomy from_pairs(std::vector<std::pair<std::string, std::string>> pairs) {
    Taxonomy tax;
    while (!pairs.empty()) {
      std::size_t before = pairs.size();
      std::vector<std::pair<std::string, std::string>> pending;
      for (auto& p : pairs) {
        if (tax.contains(p.second)) {
          tax.add_class(p.first, p.second);
        } else {
          pending.push_back(std::move(p));
        }
      }
      if (pending.size() == before) {
        throw TaxonomyError("class '" + pending.front().first +
                            "' has an unknown or cyclic parent '" + pending.front().second + "'");
      }
      pairs = std::move(pending);
    }
    return tax;
  }

 private:
  std::map<std::string, ComponentClass> classes_;
};

inline Taxonomy make_builtin_taxonomy() {
  Taxonomy t;
  t.add_class("Equipment", kRootClass);
  t.add_class("Pump", "Equipment");
  t.add_class("CentrifugalPump", "Pump");
  t.add_class("ReciprocatingPump", "Pump");
  t.add_class("Vessel", "Equipment");
  t.add_class("HeatExchanger", "Equipment");
  t.add_class("PipingComponent", kRootClass);
  t.add_class("Valve", "PipingComponent");
  t.add_class("OperatedValve", "Valve");
  t.add_class("GlobeValve", "OperatedValve");
  t.add_class("BallValve", "OperatedValve");
  t.add_class("ButterflyValve", "OperatedValve");
  t.add_class("GateValve", "OperatedValve");
  t.add_class("CheckValve", "Valve");
  t.add_class("SafetyValve", "Valve");
  t.add_class("DrainValve", "Valve");
  t.add_class("Strainer", "PipingComponent");
  // Battery-limit connection where a line enters or leaves the drawing.
  t.add_class("PipeOffPageConnector", "PipingComponent");
  t.add_class("Actuator", kRootClass);
  t.add_class("ProcessInstrument", kRootClass);
  t.add_class("LevelInstrument", "ProcessInstrument");
  t.add_class("PressureInstrument", "ProcessInstrument");
  t.add_class("TemperatureInstrument", "ProcessInstrument");
  t.add_class("FlowInstrument", "ProcessInstrument");
  return t;
}

inline std::shared_ptr<const Taxonomy> builtin_taxonomy() {
  static const auto instance = std::make_shared<const Taxonomy>(make_builtin_taxonomy());
  return instance;
}

}  // namespace pidlint
