#include "vpn/state_space.hpp"

#include <deque>
#include <unordered_map>

#include "vpn/error.hpp"

namespace vpn {

std::optional<std::string> ExplorationBounds::check() const {
  if (max_configs < 1) return "max_configs must be >= 1";
  if (max_depth < 1) return "max_depth must be >= 1";
  if (max_language_size < 1) return "max_language_size must be >= 1";
  return std::nullopt;
}

Configuration saturate(const Configuration& cfg, const std::set<Symbol>& replenished) {
  if (replenished.empty()) return cfg;
  Configuration out = cfg;
  for (auto p : replenished) {
    auto it = out.marking.find(p);
    if (it == out.marking.end()) continue;
    Tokens sat;
    for (const auto& [tok, n] : it->second) sat.add(tok, kUnbounded);
    it->second = std::move(sat);
  }
  return out;
}

std::string_view to_string(NodeStatus s) {
  switch (s) {
    case NodeStatus::Interior: return "interior";
    case NodeStatus::LeafDeadlock: return "leaf-deadlock";
    case NodeStatus::LeafDuplicate: return "leaf-duplicate";
    case NodeStatus::LeafBound: return "leaf-bound";
  }
  return "interior";
}

// ---- tree ------------------------------------------------------------------

Trace ConfigTree::path_to(NodeId n) const {
  Trace out;
  while (n != 0) {
    const Edge& e = in_edge(n);
    out.emplace_back(e.transition, e.binding);
    n = e.from;
  }
  return {out.rbegin(), out.rend()};
}

std::vector<std::vector<NodeId>> ConfigTree::children() const {
  std::vector<std::vector<NodeId>> out(nodes.size());
  for (const auto& e : edges) out[e.from].push_back(e.to);
  return out;
}

std::vector<NodeId> ConfigTree::complete_path_ends() const {
  std::vector<NodeId> out;
  for (const auto& n : nodes) {
    if (n.status == NodeStatus::LeafDeadlock) out.push_back(n.id);
  }
  return out;
}

ConfigTree build_ct(const Net& net, const ExplorationBounds& bounds) {
  if (auto bad = bounds.check()) throw Error(ErrorCode::InvalidNet, *bad);
  if (auto report = validate_net(net); !report.empty()) {
    throw Error(ErrorCode::InvalidNet, report.front().rule + ": " + report.front().message);
  }

  ConfigTree ct;
  ct.replenished = bounds.replenished;
  std::unordered_map<Configuration, NodeId, ConfigurationHash> seen;

  auto root = std::make_shared<const Configuration>(
      saturate(net.initial_configuration(), bounds.replenished));
  ct.nodes.push_back(TreeNode{0, std::nullopt, 0, NodeStatus::Interior, root});
  seen.emplace(*root, 0);

  auto on_path = [&](NodeId n, const Configuration& c) {
    for (std::optional<NodeId> cur = n; cur; cur = ct.nodes[*cur].parent) {
      if (*ct.nodes[*cur].config == c) return true;
    }
    return false;
  };

  std::deque<NodeId> frontier{0};
  while (!frontier.empty()) {
    const NodeId n = frontier.front();
    frontier.pop_front();
    const auto cfg = ct.nodes[n].config;

    struct Succ {
      TransitionId t;
      Binding b;
      Configuration c;
    };
    std::vector<Succ> succs;
    for (TransitionId t = 0; t < net.transitions().size(); ++t) {
      for (auto& b : enabled_bindings(net, t, *cfg)) {
        auto next = saturate(fire(net, t, b, *cfg), bounds.replenished);
        succs.push_back({t, std::move(b), std::move(next)});
      }
    }
    if (succs.empty()) {
      ct.nodes[n].status = NodeStatus::LeafDeadlock;
      continue;
    }
    if (ct.nodes[n].depth >= bounds.max_depth ||
        ct.nodes.size() + succs.size() > bounds.max_configs) {
      ct.nodes[n].status = NodeStatus::LeafBound;
      ct.truncated = true;
      continue;
    }
    for (auto& s : succs) {
      const NodeId id = static_cast<NodeId>(ct.nodes.size());
      bool dup = false;
      if (bounds.dedup == DedupMode::Global) {
        dup = !seen.emplace(s.c, id).second;
      } else {
        dup = on_path(n, s.c);
      }
      ct.nodes.push_back(TreeNode{id, n, ct.nodes[n].depth + 1,
                                  dup ? NodeStatus::LeafDuplicate : NodeStatus::Interior,
                                  std::make_shared<const Configuration>(std::move(s.c))});
      ct.edges.push_back(Edge{n, id, s.t, std::move(s.b)});
      if (!dup) frontier.push_back(id);
    }
  }
  return ct;
}

// ---- graph -----------------------------------------------------------------

std::optional<NodeId> ConfigGraph::find(const Configuration& c) const {
  for (NodeId i = 0; i < nodes.size(); ++i) {
    if (*nodes[i] == c) return i;
  }
  return std::nullopt;
}

std::vector<std::vector<std::size_t>> ConfigGraph::out_edges() const {
  std::vector<std::vector<std::size_t>> out(nodes.size());
  for (std::size_t i = 0; i < edges.size(); ++i) out[edges[i].from].push_back(i);
  return out;
}

ConfigGraph ct_to_cg(const ConfigTree& ct) {
  ConfigGraph cg;
  cg.truncated = ct.truncated;
  std::unordered_map<Configuration, NodeId, ConfigurationHash> index;
  cg.tree_to_graph.resize(ct.nodes.size());
  for (const auto& n : ct.nodes) {
    auto [it, inserted] = index.emplace(*n.config, static_cast<NodeId>(cg.nodes.size()));
    if (inserted) {
      cg.nodes.push_back(n.config);
      cg.expanded.push_back(false);
    }
    cg.tree_to_graph[n.id] = it->second;
    if (n.status == NodeStatus::Interior || n.status == NodeStatus::LeafDeadlock) {
      cg.expanded[it->second] = true;
    }
  }
  for (const auto& e : ct.edges) {
    cg.edges.push_back(Edge{cg.tree_to_graph[e.from], cg.tree_to_graph[e.to], e.transition, e.binding});
  }
  return cg;
}

std::set<Configuration> reachability_set(const ConfigGraph& cg, const Configuration& from) {
  auto start = cg.find(from);
  if (!start) throw Error(ErrorCode::UnknownConfiguration, "configuration " + digest(from));
  const auto out = cg.out_edges();
  std::vector<bool> visited(cg.nodes.size(), false);
  std::deque<NodeId> queue{*start};
  visited[*start] = true;
  std::set<Configuration> result;
  while (!queue.empty()) {
    NodeId n = queue.front();
    queue.pop_front();
    result.insert(*cg.nodes[n]);
    for (auto ei : out[n]) {
      NodeId m = cg.edges[ei].to;
      if (!visited[m]) {
        visited[m] = true;
        queue.push_back(m);
      }
    }
  }
  return result;
}

// ---- derived artifacts -----------------------------------------------------

std::set<Symbol> mapping_set(const Net& net, const ConfigTree& ct, Symbol q) {
  if (!net.is_variable(q)) throw Error(ErrorCode::UnknownVariable, q.name());
  std::set<Symbol> out;
  for (const auto& e : ct.edges) {
    if (auto c = e.binding.get(q)) out.insert(*c);
  }
  return out;
}

std::set<Binding> binding_function(const Net& net, const ConfigTree& ct, TransitionId t) {
  net.transition(t);  // throws UnknownTransition
  std::set<Binding> out;
  for (const auto& e : ct.edges) {
    if (e.transition == t) out.insert(e.binding);
  }
  return out;
}

std::set<Gamma> connectivity_set(const ConfigTree& ct) {
  std::set<Gamma> out;
  for (const auto& n : ct.nodes) out.insert(n.config->gamma);
  return out;
}

LinkDiff gamma_difference(const Gamma& b, const Gamma& a) {
  LinkDiff out;
  for (const auto& [v, cs] : b) {
    auto it = a.find(v);
    for (auto c : cs) {
      if (it == a.end() || !it->second.count(c)) out.emplace(v, c);
    }
  }
  return out;
}

std::set<Symbol> LinkSet::constants() const {
  std::set<Symbol> out;
  for (const auto* s : {&sustained, &created, &broken}) {
    for (const auto& [v, c] : *s) out.insert(c);
  }
  return out;
}

LinkSet link_set(const ConfigTree& ct) {
  LinkSet ls;
  std::set<Link> present;
  for (const auto& n : ct.nodes) {
    for (const auto& [v, cs] : n.config->gamma) {
      for (auto c : cs) present.emplace(v, c);
    }
  }
  for (const auto& e : ct.edges) {
    const Gamma& before = ct.nodes[e.from].config->gamma;
    const Gamma& after = ct.nodes[e.to].config->gamma;
    for (const auto& l : gamma_difference(after, before)) ls.created.insert(l);
    for (const auto& l : gamma_difference(before, after)) ls.broken.insert(l);
  }
  for (const auto& l : present) {
    if (!ls.broken.count(l)) ls.sustained.insert(l);
  }
  return ls;
}

LinkSet link_set(const ConfigTree& ct, const std::set<Symbol>& variables) {
  LinkSet all = link_set(ct);
  auto keep = [&](const std::set<Link>& s) {
    std::set<Link> out;
    for (const auto& l : s) {
      if (variables.count(l.first)) out.insert(l);
    }
    return out;
  };
  return LinkSet{keep(all.sustained), keep(all.created), keep(all.broken)};
}

Languages languages(const ConfigTree& ct, std::size_t max_len, Anchor anchor, std::size_t max_size) {
  Languages L;
  L.initial_gamma = ct.root().config->gamma;
  const ConfigGraph cg = ct_to_cg(ct);
  const auto out = cg.out_edges();

  std::vector<TransitionId> ctl;
  std::vector<Binding> dat;
  std::vector<Gamma> con;
  std::vector<LinkDiff> nl, bl;
  std::size_t emitted = 0;

  auto emit = [&] {
    L.control.insert(ctl);
    L.data.insert(dat);
    L.connectivity.insert(con);
    L.new_link.insert(nl);
    L.broken_link.insert(bl);
    if (++emitted >= max_size) L.capped = true;
  };

  auto walk = [&](auto&& self, NodeId n) -> void {
    emit();
    if (L.capped || ctl.size() == max_len) return;
    for (auto ei : out[n]) {
      if (L.capped) return;
      const Edge& e = cg.edges[ei];
      const Gamma& before = cg.nodes[n]->gamma;
      const Gamma& after = cg.nodes[e.to]->gamma;
      ctl.push_back(e.transition);
      dat.push_back(e.binding);
      con.push_back(after);
      nl.push_back(gamma_difference(after, before));
      bl.push_back(gamma_difference(before, after));
      self(self, e.to);
      ctl.pop_back();
      dat.pop_back();
      con.pop_back();
      nl.pop_back();
      bl.pop_back();
    }
  };

  if (anchor == Anchor::Root) {
    walk(walk, 0);
  } else {
    for (NodeId n = 0; n < cg.nodes.size() && !L.capped; ++n) walk(walk, n);
  }
  return L;
}

}  // namespace vpn
