#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <type_traits>
#include <utility>
#include <variant>
#include <vector>

#include "pidlint/error.hpp"
#include "pidlint/taxonomy.hpp"

namespace pidlint {

// Flat scalar attribute value. Integers and reals are kept apart so that
// documents round-trip byte for byte; comparisons treat them as one numeric type.
using Value = std::variant<bool, std::int64_t, double, std::string>;
using AttributeMap = std::map<std::string, Value>;

inline bool is_numeric(const Value& v) {
  return std::holds_alternative<std::int64_t>(v) || std::holds_alternative<double>(v);
}

inline double as_double(const Value& v) {
  if (auto* i = std::get_if<std::int64_t>(&v)) return static_cast<double>(*i);
  return std::get<double>(v);
}

inline std::string to_string(const Value& v) {
  return std::visit(
      [](const auto& x) -> std::string {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, bool>) {
          return x ? "true" : "false";
        } else if constexpr (std::is_same_v<T, std::string>) {
          return x;
        } else {
          std::ostringstream os;
          os << x;
          return os.str();
        }
      },
      v);
}

enum class EdgeKind { pipe, signal };

inline std::string_view to_string(EdgeKind k) { return k == EdgeKind::pipe ? "pipe" : "signal"; }

inline std::optional<EdgeKind> parse_edge_kind(std::string_view s) {
  if (s == "pipe") return EdgeKind::pipe;
  if (s == "signal") return EdgeKind::signal;
  return std::nullopt;
}

struct PidNode {
  std::string id;
  std::string cls;
  std::optional<std::string> tag;
  AttributeMap attributes;

  bool operator==(const PidNode&) const = default;
};

struct PidEdge {
  std::string id;
  std::string source;
  std::string target;
  EdgeKind kind = EdgeKind::pipe;
  AttributeMap attributes;

  bool operator==(const PidEdge&) const = default;
};

enum class Direction { in, out, any };

struct Neighbor {
  const PidEdge* edge;
  const PidNode* node;
};

// Directed multigraph of P&ID components. Nodes and edges are keyed by id and
// iterate in id order, which every downstream algorithm relies on for determinism.
class PidGraph {
 public:
  using Metadata = std::map<std::string, std::string>;

  PidGraph() : taxonomy_(builtin_taxonomy()) {}
  explicit PidGraph(std::shared_ptr<const Taxonomy> taxonomy) : taxonomy_(std::move(taxonomy)) {}

  const Taxonomy& taxonomy() const { return *taxonomy_; }
  const std::shared_ptr<const Taxonomy>& taxonomy_ptr() const { return taxonomy_; }

  Metadata& metadata() { return metadata_; }
  const Metadata& metadata() const { return metadata_; }

  const std::map<std::string, PidNode>& nodes() const { return nodes_; }
  const std::map<std::string, PidEdge>& edges() const { return edges_; }
  std::size_t node_count() const noexcept { return nodes_.size(); }
  std::size_t edge_count() const noexcept { return edges_.size(); }

  bool has_node(const std::string& id) const { return nodes_.count(id) != 0; }
  bool has_edge(const std::string& id) const { return edges_.count(id) != 0; }

  const PidNode& node(const std::string& id) const {
    auto it = nodes_.find(id);
    if (it == nodes_.end()) throw GraphError("no node '" + id + "'");
    return it->second;
  }

  const PidEdge& edge(const std::string& id) const {
    auto it = edges_.find(id);
    if (it == edges_.end()) throw GraphError("no edge '" + id + "'");
    return it->second;
  }

  const PidNode& add_node(PidNode n) {
    if (n.id.empty()) throw GraphError("node id must not be empty");
    if (nodes_.count(n.id)) throw GraphError("duplicate node id '" + n.id + "'");
    if (!taxonomy_->contains(n.cls)) {
      throw GraphError("node '" + n.id + "' has unknown class '" + n.cls + "'");
    }
    std::string id = n.id;
    out_[id];
    in_[id];
    return nodes_.emplace(id, std::move(n)).first->second;
  }

  const PidEdge& add_edge(PidEdge e) {
    if (e.id.empty()) throw GraphError("edge id must not be empty");
    if (edges_.count(e.id)) throw GraphError("duplicate edge id '" + e.id + "'");
    if (!nodes_.count(e.source)) {
      throw GraphError("edge '" + e.id + "' has unknown source '" + e.source + "'");
    }
    if (!nodes_.count(e.target)) {
      throw GraphError("edge '" + e.id + "' has unknown target '" + e.target + "'");
    }
    out_[e.source].insert(e.id);
    in_[e.target].insert(e.id);
    std::string id = e.id;
    return edges_.emplace(id, std::move(e)).first->second;
  }

  // Removes the node and every incident edge. Returns the removed edge ids.
  std::vector<std::string> remove_node(const std::string& id) {
    if (!nodes_.count(id)) throw GraphError("cannot remove missing node '" + id + "'");
    std::set<std::string> incident = out_.at(id);
    incident.insert(in_.at(id).begin(), in_.at(id).end());
    for (const auto& eid : incident) remove_edge(eid);
    out_.erase(id);
    in_.erase(id);
    nodes_.erase(id);
    return {incident.begin(), incident.end()};
  }

  void remove_edge(const std::string& id) {
    auto it = edges_.find(id);
    if (it == edges_.end()) throw GraphError("cannot remove missing edge '" + id + "'");
    out_[it->second.source].erase(id);
    in_[it->second.target].erase(id);
    edges_.erase(it);
  }

  // Incident edge ids, sorted.
  const std::set<std::string>& out_edge_ids(const std::string& node_id) const {
    return adjacency(out_, node_id);
  }
  const std::set<std::string>& in_edge_ids(const std::string& node_id) const {
    return adjacency(in_, node_id);
  }

  // (edge, opposite node) pairs sorted by edge id. A self-loop listed under
  // Direction::any appears once.
  std::vector<Neighbor> neighbors(const std::string& node_id, Direction dir,
                                  std::optional<EdgeKind> kind = std::nullopt) const {
    std::set<std::string> ids;
    if (dir != Direction::in) ids = out_edge_ids(node_id);
    if (dir != Direction::out) {
      const auto& in = in_edge_ids(node_id);
      ids.insert(in.begin(), in.end());
    }
    std::vector<Neighbor> result;
    for (const auto& eid : ids) {
      const PidEdge& e = edges_.at(eid);
      if (kind && e.kind != *kind) continue;
      const std::string& other = e.source == node_id ? e.target : e.source;
      result.push_back({&e, &nodes_.at(other)});
    }
    return result;
  }

  // Empty when every invariant holds.
  std::vector<std::string> validate() const {
    std::vector<std::string> problems;
    for (const auto& [id, n] : nodes_) {
      if (id != n.id) problems.push_back("node key '" + id + "' differs from id '" + n.id + "'");
      if (!taxonomy_->contains(n.cls)) problems.push_back("node '" + id + "' has unknown class");
    }
    for (const auto& [id, e] : edges_) {
      if (id != e.id) problems.push_back("edge key '" + id + "' differs from id '" + e.id + "'");
      if (!nodes_.count(e.source)) problems.push_back("edge '" + id + "' dangling source");
      if (!nodes_.count(e.target)) problems.push_back("edge '" + id + "' dangling target");
    }
    return problems;
  }

  // Structural equality; the taxonomy is not compared.
  friend bool operator==(const PidGraph& a, const PidGraph& b) {
    return a.metadata_ == b.metadata_ && a.nodes_ == b.nodes_ && a.edges_ == b.edges_;
  }

 private:
  static const std::set<std::string>& adjacency(
      const std::map<std::string, std::set<std::string>>& index, const std::string& node_id) {
    auto it = index.find(node_id);
    if (it == index.end()) throw GraphError("no node '" + node_id + "'");
    return it->second;
  }

  std::shared_ptr<const Taxonomy> taxonomy_;
  Metadata metadata_;
  std::map<std::string, PidNode> nodes_;
  std::map<std::string, PidEdge> edges_;
  std::map<std::string, std::set<std::string>> out_;
  std::map<std::string, std::set<std::string>> in_;
};

}  // namespace pidlint
