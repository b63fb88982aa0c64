#pragma once

// Shared builders and independent oracles for the test suites. The oracles
// deliberately avoid the library's matcher and engine internals.

#include <algorithm>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "pidlint/pidlint.hpp"

namespace testing_support {

using namespace pidlint;

inline void add(PidGraph& g, const std::string& id, const std::string& cls, AttributeMap attrs = {},
                std::optional<std::string> tag = std::nullopt) {
  g.add_node(PidNode{id, cls, tag ? tag : std::optional<std::string>(id), std::move(attrs)});
}

inline void pipe(PidGraph& g, const std::string& id, const std::string& s, const std::string& t,
                 AttributeMap attrs = {}) {
  g.add_edge(PidEdge{id, s, t, EdgeKind::pipe, std::move(attrs)});
}

inline void signal(PidGraph& g, const std::string& id, const std::string& s, const std::string& t) {
  g.add_edge(PidEdge{id, s, t, EdgeKind::signal, {}});
}

inline const RuleGraph& rule_by_id(const std::vector<RuleGraph>& rules, const std::string& id) {
  for (const auto& r : rules) {
    if (r.meta.id == id) return r;
  }
  throw std::runtime_error("no rule " + id);
}

inline std::map<std::string, int> count_by_rule(const std::vector<CorrectionRecord>& records) {
  std::map<std::string, int> out;
  for (const auto& r : records) ++out[r.rule_id];
  return out;
}

// ---------------------------------------------------------------------------
// Brute-force matcher oracle.

// Parent walk written out independently of Taxonomy::is_subclass.
inline bool oracle_is_a(const Taxonomy& tax, std::string cls, const std::string& ancestor) {
  for (int guard = 0; guard < 64; ++guard) {
    if (cls == ancestor) return true;
    const auto& c = tax.at(cls);
    if (!c.parent) return false;
    cls = *c.parent;
  }
  return false;
}

// The random patterns only use "dn ge <int>" conditions, evaluated here by hand.
inline bool oracle_conditions(const std::vector<Condition>& conds, const AttributeMap& attrs) {
  for (const auto& c : conds) {
    if (c.attribute != "dn" || c.op != ConditionOp::ge) throw std::logic_error("oracle: unsupported");
    auto it = attrs.find("dn");
    if (it == attrs.end()) return false;
    auto* v = std::get_if<std::int64_t>(&it->second);
    if (!v || *v < std::get<std::int64_t>(c.operands.at(0))) return false;
  }
  return true;
}

// Every injective node assignment, then every injective edge assignment;
// duplicates by (node image, edge image) collapse to the least mapping.
inline std::vector<Match> brute_force_matches(const Pattern& p, const PidGraph& g) {
  std::vector<std::string> gnodes, gedges;
  for (const auto& [id, n] : g.nodes()) gnodes.push_back(id);
  for (const auto& [id, e] : g.edges()) gedges.push_back(id);

  std::vector<Match> all;
  std::map<std::string, std::string> nmap;
  std::set<std::string> used_nodes;
  std::function<void(std::size_t)> assign_nodes;
  std::function<void(std::size_t, std::map<std::string, std::string>&, std::set<std::string>&)>
      assign_edges;

  assign_edges = [&](std::size_t i, std::map<std::string, std::string>& emap,
                     std::set<std::string>& used_edges) {
    if (i == p.edges.size()) {
      all.push_back(Match{nmap, emap});
      return;
    }
    const auto& pe = p.edges[i];
    for (const auto& eid : gedges) {
      if (used_edges.count(eid)) continue;
      const auto& ge = g.edge(eid);
      if (ge.kind != pe.kind || ge.source != nmap.at(pe.source_key) ||
          ge.target != nmap.at(pe.target_key) || !oracle_conditions(pe.conditions, ge.attributes)) {
        continue;
      }
      emap[pe.key] = eid;
      used_edges.insert(eid);
      assign_edges(i + 1, emap, used_edges);
      used_edges.erase(eid);
      emap.erase(pe.key);
    }
  };

  assign_nodes = [&](std::size_t i) {
    if (i == p.nodes.size()) {
      std::map<std::string, std::string> emap;
      std::set<std::string> used_edges;
      assign_edges(0, emap, used_edges);
      return;
    }
    const auto& pn = p.nodes[i];
    for (const auto& gid : gnodes) {
      if (used_nodes.count(gid)) continue;
      const auto& gn = g.node(gid);
      if (!oracle_is_a(g.taxonomy(), gn.cls, pn.cls) || !oracle_conditions(pn.conditions, gn.attributes)) {
        continue;
      }
      nmap[pn.key] = gid;
      used_nodes.insert(gid);
      assign_nodes(i + 1);
      used_nodes.erase(gid);
      nmap.erase(pn.key);
    }
  };
  assign_nodes(0);

  using Key = std::pair<std::vector<std::string>, std::vector<std::string>>;
  std::map<Key, Match> best;
  for (auto& m : all) {
    Key k{m.node_image(), m.edge_image()};
    auto it = best.find(k);
    if (it == best.end()) {
      best.emplace(k, m);
    } else if (std::tie(m.node_map, m.edge_map) < std::tie(it->second.node_map, it->second.edge_map)) {
      it->second = m;
    }
  }
  std::vector<Match> out;
  for (auto& [k, m] : best) out.push_back(m);
  return out;
}

// ---------------------------------------------------------------------------
// Random instances.

inline const std::vector<std::string>& random_graph_classes() {
  static const std::vector<std::string> v{"CentrifugalPump", "ReciprocatingPump", "Vessel",
                                          "GateValve",       "GlobeValve",        "CheckValve",
                                          "Strainer",        "Actuator"};
  return v;
}

inline const std::vector<std::string>& random_pattern_classes() {
  static const std::vector<std::string> v{kRootClass, "Pump",  "Valve",   "OperatedValve",
                                          "Vessel",   "CentrifugalPump", "GateValve"};
  return v;
}

inline PidGraph random_graph(std::mt19937& rng, int max_nodes = 8, int max_edges = 14) {
  PidGraph g;
  std::uniform_int_distribution<int> nn(1, max_nodes);
  int n = nn(rng);
  const auto& classes = random_graph_classes();
  std::uniform_int_distribution<std::size_t> pick(0, classes.size() - 1);
  std::uniform_int_distribution<int> dn(0, 3);
  for (int i = 0; i < n; ++i) {
    AttributeMap a;
    int d = dn(rng);
    if (d > 0) a["dn"] = std::int64_t{50 * d};
    add(g, "n" + std::to_string(i), classes[pick(rng)], a);
  }
  std::uniform_int_distribution<int> ne(0, max_edges);
  std::uniform_int_distribution<int> endpoint(0, n - 1);
  int m = ne(rng);
  for (int i = 0; i < m; ++i) {
    AttributeMap a;
    int d = dn(rng);
    if (d > 0) a["dn"] = std::int64_t{50 * d};
    auto kind = (rng() % 4 == 0) ? EdgeKind::signal : EdgeKind::pipe;
    g.add_edge(PidEdge{"e" + std::to_string(i), "n" + std::to_string(endpoint(rng)),
                       "n" + std::to_string(endpoint(rng)), kind, a});
  }
  return g;
}

// Connected pattern: a random spanning tree plus a few extra edges, which may
// be parallel or loops.
inline Pattern random_pattern(std::mt19937& rng, int max_nodes = 3) {
  Pattern p;
  std::uniform_int_distribution<int> nn(1, max_nodes);
  int n = nn(rng);
  const auto& classes = random_pattern_classes();
  std::uniform_int_distribution<std::size_t> pick(0, classes.size() - 1);
  auto maybe_condition = [&]() {
    std::vector<Condition> c;
    if (rng() % 5 == 0) c.push_back({"dn", ConditionOp::ge, {Value{std::int64_t{100}}}});
    return c;
  };
  for (int i = 0; i < n; ++i) {
    p.nodes.push_back({"k" + std::to_string(i), classes[pick(rng)], maybe_condition()});
  }
  auto kind = [&] { return (rng() % 4 == 0) ? EdgeKind::signal : EdgeKind::pipe; };
  int e = 0;
  for (int i = 1; i < n; ++i) {
    std::string a = "k" + std::to_string(i), b = "k" + std::to_string(rng() % i);
    if (rng() % 2) std::swap(a, b);
    p.edges.push_back({"p" + std::to_string(e++), a, b, kind(), maybe_condition()});
  }
  int extra = static_cast<int>(rng() % 3);
  for (int i = 0; i < extra; ++i) {
    std::string a = "k" + std::to_string(rng() % n), b = "k" + std::to_string(rng() % n);
    p.edges.push_back({"p" + std::to_string(e++), a, b, kind(), maybe_condition()});
  }
  return p;
}

// ---------------------------------------------------------------------------
// Independent diff oracle: compare id sets and contents directly.

struct DiffCounts {
  int added_nodes = 0, removed_nodes = 0, added_edges = 0, removed_edges = 0;
  bool operator==(const DiffCounts&) const = default;
};

inline DiffCounts oracle_diff_counts(const PidGraph& a, const PidGraph& b) {
  DiffCounts d;
  for (const auto& [id, n] : b.nodes()) {
    if (!a.has_node(id) || !(a.node(id) == n)) ++d.added_nodes;
  }
  for (const auto& [id, n] : a.nodes()) {
    if (!b.has_node(id) || !(b.node(id) == n)) ++d.removed_nodes;
  }
  for (const auto& [id, e] : b.edges()) {
    if (!a.has_edge(id) || !(a.edge(id) == e)) ++d.added_edges;
  }
  for (const auto& [id, e] : a.edges()) {
    if (!b.has_edge(id) || !(b.edge(id) == e)) ++d.removed_edges;
  }
  return d;
}

// The single pipe successor/predecessor of `id`, or "" when there is not exactly one.
inline std::string only_pipe_neighbor(const PidGraph& g, const std::string& id, Direction dir) {
  auto ns = g.neighbors(id, dir, EdgeKind::pipe);
  return ns.size() == 1 ? ns[0].node->id : std::string{};
}

// ---------------------------------------------------------------------------
// Mini-graphs for the missing-component rules. `with_protection` adds the
// component the rule asks for.

inline PidGraph mini_vessel(bool with_protection) {
  PidGraph g;
  add(g, "IN", "PipeOffPageConnector");
  add(g, "V1", "Vessel");
  pipe(g, "L1", "IN", "V1");
  if (with_protection) {
    add(g, "LT1", "LevelInstrument");
    signal(g, "S1", "V1", "LT1");
  }
  return g;
}

// Fully protected pump line:
// IN -> BV1 -> STR -> PUMP -> CV -> BV2 -> OUT, drains on both block valves.
inline PidGraph mini_pump(bool block_valves, bool strainer, bool check_valve) {
  PidGraph g;
  add(g, "IN", "PipeOffPageConnector");
  add(g, "P1", "CentrifugalPump");
  add(g, "OUT", "PipeOffPageConnector");
  std::string suction_from = "IN", discharge_to = "OUT";
  int line = 0;
  auto next_line = [&] { return "L" + std::to_string(++line); };
  if (block_valves) {
    add(g, "BV1", "GateValve");
    add(g, "BV2", "GateValve");
    add(g, "D1", "DrainValve");
    add(g, "D2", "DrainValve");
    pipe(g, next_line(), "IN", "BV1");
    pipe(g, next_line(), "BV1", "D1");
    pipe(g, next_line(), "BV2", "OUT");
    pipe(g, next_line(), "BV2", "D2");
    suction_from = "BV1";
    discharge_to = "BV2";
  }
  if (strainer) {
    add(g, "STR", "Strainer");
    pipe(g, next_line(), suction_from, "STR");
    suction_from = "STR";
  }
  if (check_valve) {
    add(g, "CV", "CheckValve");
    pipe(g, next_line(), "CV", discharge_to);
    discharge_to = "CV";
  }
  pipe(g, next_line(), suction_from, "P1");
  pipe(g, next_line(), "P1", discharge_to);
  return g;
}

// Actuated globe control valve on a line of the given DN.
inline PidGraph mini_globe(std::int64_t dn) {
  PidGraph g;
  add(g, "A", "PipeOffPageConnector");
  add(g, "GV", "GlobeValve");
  add(g, "B", "PipeOffPageConnector");
  add(g, "ACT", "Actuator");
  pipe(g, "L1", "A", "GV", {{"nominalDiameterDN", Value{dn}}});
  pipe(g, "L2", "GV", "B", {{"nominalDiameterDN", Value{dn}}});
  signal(g, "S1", "ACT", "GV");
  return g;
}

}  // namespace testing_support
