#pragma once

#include <algorithm>
#include <array>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "pidlint/condition.hpp"
#include "pidlint/graph.hpp"

namespace pidlint {

struct PatternNode {
  std::string key;
  std::string cls = kRootClass;  // AnyComponent acts as a wildcard
  std::vector<Condition> conditions;

  bool operator==(const PatternNode&) const = default;
};

struct PatternEdge {
  std::string key;
  std::string source_key;
  std::string target_key;
  EdgeKind kind = EdgeKind::pipe;
  std::vector<Condition> conditions;

  bool operator==(const PatternEdge&) const = default;
};

struct Pattern {
  std::vector<PatternNode> nodes;
  std::vector<PatternEdge> edges;

  const PatternNode* find_node(const std::string& key) const {
    for (const auto& n : nodes) {
      if (n.key == key) return &n;
    }
    return nullptr;
  }

  bool operator==(const Pattern&) const = default;
};

// Undirected connectivity over the pattern's nodes. An empty pattern counts as connected.
inline bool is_connected(const Pattern& p) {
  if (p.nodes.empty()) return true;
  std::map<std::string, std::set<std::string>> adj;
  for (const auto& n : p.nodes) adj[n.key];
  for (const auto& e : p.edges) {
    if (!adj.count(e.source_key) || !adj.count(e.target_key)) continue;
    adj[e.source_key].insert(e.target_key);
    adj[e.target_key].insert(e.source_key);
  }
  std::set<std::string> seen{p.nodes.front().key};
  std::vector<std::string> stack{p.nodes.front().key};
  while (!stack.empty()) {
    auto k = stack.back();
    stack.pop_back();
    for (const auto& m : adj[k]) {
      if (seen.insert(m).second) stack.push_back(m);
    }
  }
  return seen.size() == adj.size();
}

// Pattern key -> graph id, both injective.
struct Match {
  std::map<std::string, std::string> node_map;
  std::map<std::string, std::string> edge_map;

  std::vector<std::string> node_image() const {
    std::vector<std::string> ids;
    for (const auto& [k, id] : node_map) ids.push_back(id);
    std::sort(ids.begin(), ids.end());
    return ids;
  }

  std::vector<std::string> edge_image() const {
    std::vector<std::string> ids;
    for (const auto& [k, id] : edge_map) ids.push_back(id);
    std::sort(ids.begin(), ids.end());
    return ids;
  }

  bool operator==(const Match&) const = default;
};

// Class subsumption plus every node condition.
inline bool node_compatible(const PatternNode& pn, const PidNode& gn, const Taxonomy& taxonomy) {
  if (!taxonomy.contains(gn.cls) || !taxonomy.is_subclass(gn.cls, pn.cls)) return false;
  return std::all_of(pn.conditions.begin(), pn.conditions.end(),
                     [&](const Condition& c) { return eval_condition(c, gn); });
}

inline bool edge_compatible(const PatternEdge& pe, const PidEdge& ge) {
  if (pe.kind != ge.kind) return false;
  return std::all_of(pe.conditions.begin(), pe.conditions.end(),
                     [&](const Condition& c) { return eval_condition(c, ge); });
}

// Re-checks a match against the current graph. Used to detect stale matches.
inline bool verify_match(const Pattern& pattern, const Match& m, const PidGraph& g) {
  if (m.node_map.size() != pattern.nodes.size() || m.edge_map.size() != pattern.edges.size()) {
    return false;
  }
  std::set<std::string> used_nodes, used_edges;
  for (const auto& pn : pattern.nodes) {
    auto it = m.node_map.find(pn.key);
    if (it == m.node_map.end() || !g.has_node(it->second)) return false;
    if (!used_nodes.insert(it->second).second) return false;
    if (!node_compatible(pn, g.node(it->second), g.taxonomy())) return false;
  }
  for (const auto& pe : pattern.edges) {
    auto it = m.edge_map.find(pe.key);
    if (it == m.edge_map.end() || !g.has_edge(it->second)) return false;
    if (!used_edges.insert(it->second).second) return false;
    const PidEdge& ge = g.edge(it->second);
    if (ge.source != m.node_map.at(pe.source_key) || ge.target != m.node_map.at(pe.target_key)) {
      return false;
    }
    if (!edge_compatible(pe, ge)) return false;
  }
  return true;
}

namespace detail {

// Backtracking state for a VF2-style monomorphism search. Pattern nodes are
// visited in a fixed connected order; each step extends the partial mapping
// with a graph neighbour of an already mapped node, then binds the pattern
// edges that close onto the mapped region.
class Vf2Search {
 public:
  Vf2Search(const Pattern& pattern, const PidGraph& graph) : p_(pattern), g_(graph) {
    for (std::size_t i = 0; i < p_.nodes.size(); ++i) index_[p_.nodes[i].key] = i;
    plan();
  }

  std::vector<Match> run() {
    if (p_.nodes.empty() || g_.node_count() < p_.nodes.size()) return {};
    extend(0);
    return std::move(found_);
  }

 private:
  struct Step {
    std::size_t node;                        // pattern node index mapped at this step
    std::optional<std::size_t> anchor_edge;  // pattern edge to an earlier node
    std::vector<std::size_t> closing_edges;  // pattern edges between this node and earlier ones
  };

  void plan() {
    const std::size_t n = p_.nodes.size();
    if (n == 0) return;
    std::vector<std::size_t> degree(n, 0);
    for (const auto& e : p_.edges) {
      ++degree[index_.at(e.source_key)];
      ++degree[index_.at(e.target_key)];
    }
    std::vector<bool> placed(n, false);
    std::size_t first = 0;
    for (std::size_t i = 1; i < n; ++i) {
      if (degree[i] > degree[first]) first = i;
    }
    order_.push_back({first, std::nullopt, {}});
    placed[first] = true;
    while (order_.size() < n) {
      // Next: the unplaced node with most edges into the placed region.
      std::optional<std::size_t> best;
      std::size_t best_links = 0;
      for (std::size_t i = 0; i < n; ++i) {
        if (placed[i]) continue;
        std::size_t links = 0;
        for (const auto& e : p_.edges) {
          auto s = index_.at(e.source_key), t = index_.at(e.target_key);
          if ((s == i && placed[t]) || (t == i && placed[s])) ++links;
        }
        if (links > best_links) {
          best = i;
          best_links = links;
        }
      }
      if (!best) break;  // disconnected pattern: remaining nodes unreachable
      placed[*best] = true;
      order_.push_back({*best, std::nullopt, {}});
    }
    if (order_.size() < n) {
      disconnected_ = true;
      return;
    }
    std::vector<std::size_t> position(n);
    for (std::size_t i = 0; i < n; ++i) position[order_[i].node] = i;
    for (std::size_t ei = 0; ei < p_.edges.size(); ++ei) {
      const auto& e = p_.edges[ei];
      auto s = position[index_.at(e.source_key)], t = position[index_.at(e.target_key)];
      Step& step = order_[std::max(s, t)];
      step.closing_edges.push_back(ei);
      if (s != t && !step.anchor_edge) step.anchor_edge = ei;
    }
    // In/out degree per edge kind, for the monomorphism degree bound.
    pattern_degree_.assign(n, {});
    for (const auto& e : p_.edges) {
      int k = e.kind == EdgeKind::pipe ? 0 : 1;
      ++pattern_degree_[index_.at(e.source_key)][k * 2];
      ++pattern_degree_[index_.at(e.target_key)][k * 2 + 1];
    }
  }

  bool degree_feasible(std::size_t pn, const std::string& gid) const {
    std::array<std::size_t, 4> have{};
    for (const auto& eid : g_.out_edge_ids(gid)) {
      ++have[g_.edge(eid).kind == EdgeKind::pipe ? 0 : 2];
    }
    for (const auto& eid : g_.in_edge_ids(gid)) {
      ++have[g_.edge(eid).kind == EdgeKind::pipe ? 1 : 3];
    }
    for (int i = 0; i < 4; ++i) {
      if (pattern_degree_[pn][i] > have[i]) return false;
    }
    return true;
  }

  std::vector<std::string> candidates(const Step& step) const {
    std::vector<std::string> out;
    if (!step.anchor_edge) {
      for (const auto& [id, node] : g_.nodes()) out.push_back(id);
      return out;
    }
    const PatternEdge& pe = p_.edges[*step.anchor_edge];
    bool new_is_target = index_.at(pe.target_key) == step.node;
    const std::string& mapped = node_map_.at(new_is_target ? pe.source_key : pe.target_key);
    const auto& ids = new_is_target ? g_.out_edge_ids(mapped) : g_.in_edge_ids(mapped);
    std::set<std::string> uniq;
    for (const auto& eid : ids) {
      const PidEdge& ge = g_.edge(eid);
      if (ge.kind != pe.kind) continue;
      uniq.insert(new_is_target ? ge.target : ge.source);
    }
    return {uniq.begin(), uniq.end()};
  }

  void extend(std::size_t depth) {
    if (disconnected_) return;
    if (depth == order_.size()) {
      Match m;
      m.node_map = node_map_;
      m.edge_map = edge_map_;
      found_.push_back(std::move(m));
      return;
    }
    const Step& step = order_[depth];
    const PatternNode& pn = p_.nodes[step.node];
    for (const auto& gid : candidates(step)) {
      if (used_nodes_.count(gid)) continue;
      if (!node_compatible(pn, g_.node(gid), g_.taxonomy())) continue;
      if (!degree_feasible(step.node, gid)) continue;
      node_map_[pn.key] = gid;
      used_nodes_.insert(gid);
      bind_edges(step, 0, depth);
      used_nodes_.erase(gid);
      node_map_.erase(pn.key);
    }
  }

  // Assigns distinct graph edges to the step's closing pattern edges.
  void bind_edges(const Step& step, std::size_t i, std::size_t depth) {
    if (i == step.closing_edges.size()) {
      extend(depth + 1);
      return;
    }
    const PatternEdge& pe = p_.edges[step.closing_edges[i]];
    const std::string& src = node_map_.at(pe.source_key);
    const std::string& dst = node_map_.at(pe.target_key);
    for (const auto& eid : g_.out_edge_ids(src)) {
      if (used_edges_.count(eid)) continue;
      const PidEdge& ge = g_.edge(eid);
      if (ge.target != dst || !edge_compatible(pe, ge)) continue;
      edge_map_[pe.key] = eid;
      used_edges_.insert(eid);
      bind_edges(step, i + 1, depth);
      used_edges_.erase(eid);
      edge_map_.erase(pe.key);
    }
  }

  const Pattern& p_;
  const PidGraph& g_;
  std::map<std::string, std::size_t> index_;
  std::vector<Step> order_;
  std::vector<std::array<std::size_t, 4>> pattern_degree_;
  bool disconnected_ = false;

  std::map<std::string, std::string> node_map_;
  std::map<std::string, std::string> edge_map_;
  std::set<std::string> used_nodes_;
  std::set<std::string> used_edges_;
  std::vector<Match> found_;
};

}  // namespace detail

// Collapses matches with identical node and edge images to the least
// representative, then orders by (sorted node image, sorted edge image).
inline std::vector<Match> canonicalize_matches(std::vector<Match> matches) {
  using Key = std::pair<std::vector<std::string>, std::vector<std::string>>;
  std::map<Key, Match> best;
  auto repr = [](const Match& m) { return std::tie(m.node_map, m.edge_map); };
  for (auto& m : matches) {
    Key key{m.node_image(), m.edge_image()};
    auto it = best.find(key);
    if (it == best.end()) {
      best.emplace(std::move(key), std::move(m));
    } else if (repr(m) < repr(it->second)) {
      it->second = std::move(m);
    }
  }
  std::vector<Match> out;
  out.reserve(best.size());
  for (auto& [key, m] : best) out.push_back(std::move(m));
  return out;
}

// All injective, non-induced embeddings of `pattern` into `graph`. Requires a
// connected pattern; a disconnected or empty pattern yields no matches.
inline std::vector<Match> find_matches(const Pattern& pattern, const PidGraph& graph) {
  for (const auto& e : pattern.edges) {
    if (!pattern.find_node(e.source_key) || !pattern.find_node(e.target_key)) {
      throw RuleError("pattern edge '" + e.key + "' references an unknown node key");
    }
  }
  if (pattern.nodes.empty() || !is_connected(pattern)) return {};
  return canonicalize_matches(detail::Vf2Search(pattern, graph).run());
}

}  // namespace pidlint
