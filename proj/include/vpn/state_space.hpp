#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <set>
#include <vector>

#include "vpn/kernel.hpp"
#include "vpn/net.hpp"

namespace vpn {

enum class DedupMode { Global, Path };

struct ExplorationBounds {
  std::size_t max_configs = 100'000;
  std::size_t max_depth = 200;
  std::size_t max_language_len = 8;
  std::size_t max_language_size = 10'000;
  DedupMode dedup = DedupMode::Global;
  /// Places whose tokens are treated as inexhaustible during exploration
  /// (every present token is kept at a fixed "unbounded" multiplicity).
  std::set<Symbol> replenished;

  /// Empty when valid; otherwise the offending field.
  std::optional<std::string> check() const;
};

/// Multiplicity used for tokens of replenished places.
inline constexpr Tokens::Count kUnbounded = 1u << 20;

/// Applies the replenished-place abstraction to a configuration.
Configuration saturate(const Configuration& cfg, const std::set<Symbol>& replenished);

enum class NodeStatus { Interior, LeafDeadlock, LeafDuplicate, LeafBound };
std::string_view to_string(NodeStatus s);

using NodeId = std::uint32_t;

struct TreeNode {
  NodeId id = 0;
  std::optional<NodeId> parent;
  std::size_t depth = 0;
  NodeStatus status = NodeStatus::Interior;
  std::shared_ptr<const Configuration> config;
};

struct Edge {
  NodeId from = 0;
  NodeId to = 0;
  TransitionId transition = 0;
  Binding binding;
  friend bool operator==(const Edge&, const Edge&) = default;
};

/// Breadth-first configuration tree. Node 0 is the root (initial configuration).
struct ConfigTree {
  std::vector<TreeNode> nodes;
  std::vector<Edge> edges;  // edges[i].to == i + 1 (each non-root node has one in-edge)
  bool truncated = false;
  std::set<Symbol> replenished;  // saturation applied while building

  const TreeNode& root() const { return nodes.front(); }
  const Edge& in_edge(NodeId n) const { return edges.at(n - 1); }
  /// Firing sequence from the root to n.
  Trace path_to(NodeId n) const;
  /// Children of each node, in creation order.
  std::vector<std::vector<NodeId>> children() const;
  /// Leaves of status LeafDeadlock: the maximal complete paths end there.
  std::vector<NodeId> complete_path_ends() const;
};

/// Quotient of the tree under configuration equality.
struct ConfigGraph {
  std::vector<std::shared_ptr<const Configuration>> nodes;
  std::vector<Edge> edges;                 // endpoints are graph node ids
  std::vector<bool> expanded;              // false for nodes cut off by a bound
  std::vector<NodeId> tree_to_graph;       // tree node id -> graph node id
  bool truncated = false;

  std::optional<NodeId> find(const Configuration& c) const;
  std::vector<std::vector<std::size_t>> out_edges() const;  // edge indices per node
};

/// Throws Error{InvalidNet} when validate_net reports violations.
ConfigTree build_ct(const Net& net, const ExplorationBounds& bounds = {});

ConfigGraph ct_to_cg(const ConfigTree& ct);

/// R(from): every configuration reachable in the graph, including `from`.
/// Throws Error{UnknownConfiguration}.
std::set<Configuration> reachability_set(const ConfigGraph& cg, const Configuration& from);

/// Constants q is bound to on any tree edge. Throws Error{UnknownVariable}.
std::set<Symbol> mapping_set(const Net& net, const ConfigTree& ct, Symbol q);

/// All bindings labelling an edge fired by t. Throws Error{UnknownTransition}.
std::set<Binding> binding_function(const Net& net, const ConfigTree& ct, TransitionId t);

/// Initial gamma together with the gamma of every reachable configuration.
std::set<Gamma> connectivity_set(const ConfigTree& ct);

using Link = std::pair<Symbol, Symbol>;  // (variable, constant)
using LinkDiff = std::set<Link>;

struct LinkSet {
  std::set<Link> sustained;  // A
  std::set<Link> created;    // C
  std::set<Link> broken;     // K

  /// Constants occurring in any of the three sets.
  std::set<Symbol> constants() const;
  friend bool operator==(const LinkSet&, const LinkSet&) = default;
};

/// Links over every variable.
LinkSet link_set(const ConfigTree& ct);
/// Links restricted to the given variables (e.g. the interface variables).
LinkSet link_set(const ConfigTree& ct, const std::set<Symbol>& variables);

/// gamma_b - gamma_a as a set of links.
LinkDiff gamma_difference(const Gamma& b, const Gamma& a);

enum class Anchor { Root, Any };

struct Languages {
  std::set<std::vector<TransitionId>> control;
  std::set<std::vector<Binding>> data;
  Gamma initial_gamma;
  std::set<std::vector<Gamma>> connectivity;  // gamma_1 .. gamma_k (gamma_0 is initial_gamma)
  std::set<std::vector<LinkDiff>> new_link;
  std::set<std::vector<LinkDiff>> broken_link;
  bool capped = false;  // the element-count cap was hit
};

Languages languages(const ConfigTree& ct, std::size_t max_len, Anchor anchor = Anchor::Root,
                    std::size_t max_size = 10'000);

/// Projection: each sequence filtered to the symbols in `keep`.
template <typename T>
std::set<std::vector<T>> project_language(const std::set<std::vector<T>>& lang,
                                          const std::set<T>& keep) {
  std::set<std::vector<T>> out;
  for (const auto& seq : lang) {
    std::vector<T> p;
    for (const auto& x : seq) {
      if (keep.count(x)) p.push_back(x);
    }
    out.insert(std::move(p));
  }
  return out;
}

/// Extension (inverse projection) bounded to sequences of length <= max_len
/// over `alphabet`: all sequences whose projection onto `kept` lies in lang.
template <typename T>
std::set<std::vector<T>> extend_language(const std::set<std::vector<T>>& lang,
                                         const std::set<T>& alphabet, const std::set<T>& kept,
                                         std::size_t max_len) {
  std::set<std::vector<T>> out;
  std::vector<T> cur;
  auto rec = [&](auto&& self) -> void {
    std::vector<T> p;
    for (const auto& x : cur) {
      if (kept.count(x)) p.push_back(x);
    }
    if (lang.count(p)) out.insert(cur);
    if (cur.size() == max_len) return;
    for (const auto& x : alphabet) {
      cur.push_back(x);
      self(self);
      cur.pop_back();
    }
  };
  rec(rec);
  return out;
}

}  // namespace vpn
