#include "vpn/composition.hpp"

#include <algorithm>
#include <map>

#include "vpn/error.hpp"

namespace vpn {

// ---- classification --------------------------------------------------------

bool MultiComponentNet::is_final(const Configuration& c) const {
  if (components.empty()) return false;
  for (const auto& cn : components) {
    bool done = std::any_of(cn.finals.begin(), cn.finals.end(),
                            [&](Symbol p) { return !c.tokens(p).empty(); });
    if (!done) return false;
  }
  return true;
}

std::set<Symbol> MultiComponentNet::final_places() const {
  std::set<Symbol> out;
  for (const auto& cn : components) out.insert(cn.finals.begin(), cn.finals.end());
  return out;
}

ValidationReport check_component(const ComponentNet& cn) {
  ValidationReport out;
  const Net& n = cn.net;
  bool has_initial = false;
  for (const auto& [p, pl] : n.places()) {
    if (pl.cls == PlaceClass::InitialFinal && n.m0().count(p) && !cn.finals.count(p)) {
      has_initial = true;
    }
  }
  if (!has_initial) {
    out.push_back({"component places", cn.name + ": no marked initial place of class initial_final"});
  }
  if (cn.finals.empty()) {
    out.push_back({"component places", cn.name + ": no final place declared"});
  }
  for (auto f : cn.finals) {
    const Place* p = n.place(f);
    if (!p || p->cls != PlaceClass::InitialFinal) {
      out.push_back({"component places", cn.name + ": final " + f.name() +
                                             " is not a place of class initial_final"});
    }
  }
  for (const auto& tr : n.transitions()) {
    if (tr.cls == TransClass::Process) continue;
    auto touches_interface = [&](const std::vector<Arc>& arcs) {
      return std::any_of(arcs.begin(), arcs.end(), [&](const Arc& a) {
        if (a.is_virtual) return true;
        const Place* p = n.place(a.node);
        return p && p->cls == PlaceClass::Interface;
      });
    };
    if (!touches_interface(tr.outputs) && !touches_interface(tr.inputs)) {
      out.push_back({"interaction transition",
                     cn.name + ": " + tr.name + " touches no virtual or interface place"});
    }
  }
  return out;
}

ValidationReport check_interaction_structure(const InteractionStructureNet& isn) {
  ValidationReport out;
  for (const auto& [p, pl] : isn.net.places()) {
    if (pl.cls != PlaceClass::Interface) {
      out.push_back({"interaction structure", isn.name + ": place " + p.name() +
                                                  " is not an interface place"});
    }
  }
  for (const auto& tr : isn.net.transitions()) {
    if (tr.cls == TransClass::Process) {
      out.push_back({"interaction structure", isn.name + ": " + tr.name + " is a process transition"});
    }
  }
  return out;
}

// ---- union -----------------------------------------------------------------

void unite(Net& into, const Net& part) {
  for (const auto& [s, info] : part.universe()) {
    if (info.is_var) {
      into.declare_variable(s);
    } else {
      into.declare_constant(s, info.arity);
    }
  }
  for (const auto& [p, pl] : part.places()) into.add_place(p, pl.arity, pl.cls);
  for (const auto& tr : part.transitions()) {
    TransitionId id;
    if (auto existing = into.find_transition(tr.name)) {
      const Transition& cur = into.transition(*existing);
      if (!(cur.guard == tr.guard) || !(cur.rule == tr.rule) || cur.cls != tr.cls) {
        throw Error(ErrorCode::KindConflict, "transition " + tr.name + " declared differently");
      }
      id = *existing;
    } else {
      id = into.add_transition(tr.name, tr.guard, tr.rule, tr.cls);
    }
    try {
      for (const auto& a : tr.inputs) into.add_input(id, a.node, a.expr);
      for (const auto& a : tr.outputs) into.add_output(id, a.node, a.expr);
    } catch (const Error& e) {
      throw Error(ErrorCode::KindConflict, e.what());
    }
  }
  for (const auto& [v, cs] : part.gamma0()) {
    auto merged = into.gamma0().count(v) ? into.gamma0().at(v) : std::set<Symbol>{};
    merged.insert(cs.begin(), cs.end());
    into.set_gamma(v, std::move(merged));
  }
  for (const auto& [p, toks] : part.m0()) {
    Tokens cur = into.m0().count(p) ? into.m0().at(p) : Tokens{};
    into.set_initial(p, cur.max_union(toks));
  }
  for (auto c : part.interfaces()) into.add_interface(c);
}

MultiComponentNet compose_mcn(std::vector<ComponentNet> cns, std::vector<InteractionStructureNet> isns,
                              std::set<Symbol> interface_variables) {
  MultiComponentNet mcn;
  for (const auto& cn : cns) {
    if (auto r = check_component(cn); !r.empty()) {
      throw Error(ErrorCode::InvalidNet, r.front().message);
    }
    unite(mcn.fused, cn.net);
  }
  for (const auto& isn : isns) {
    if (auto r = check_interaction_structure(isn); !r.empty()) {
      throw Error(ErrorCode::InvalidNet, r.front().message);
    }
    for (const auto& ref : isn.references) {
      bool found = std::any_of(cns.begin(), cns.end(), [&](const ComponentNet& cn) {
        return cn.net.find_transition(ref).has_value();
      });
      if (!found) {
        throw Error(ErrorCode::MissingTransition, isn.name + " references unknown transition " + ref);
      }
    }
    unite(mcn.fused, isn.net);
  }
  mcn.components = std::move(cns);
  mcn.interactions = std::move(isns);
  mcn.interface_variables = std::move(interface_variables);
  return mcn;
}

Net restrict_net(const Net& net, const std::set<Symbol>& places, const std::set<std::string>& transitions,
                 bool adjacent) {
  Net out;
  for (const auto& [s, info] : net.universe()) {
    if (info.is_var) {
      out.declare_variable(s);
    } else {
      out.declare_constant(s, info.arity);
    }
  }
  std::set<Symbol> keep_places = places;
  std::set<Symbol> used_vars;
  for (const auto& tr : net.transitions()) {
    if (!transitions.count(tr.name)) continue;
    for (const auto* arcs : {&tr.inputs, &tr.outputs}) {
      for (const auto& a : *arcs) {
        if (adjacent && !a.is_virtual) keep_places.insert(a.node);
      }
    }
    auto vs = tr.variables();
    used_vars.insert(vs.begin(), vs.end());
  }
  for (auto p : keep_places) {
    if (const Place* pl = net.place(p)) out.add_place(p, pl->arity, pl->cls);
  }
  for (const auto& tr : net.transitions()) {
    if (!transitions.count(tr.name)) continue;
    auto id = out.add_transition(tr.name, tr.guard, tr.rule, tr.cls);
    for (const auto& a : tr.inputs) out.add_input(id, a.node, a.expr);
    for (const auto& a : tr.outputs) out.add_output(id, a.node, a.expr);
  }
  for (const auto& [v, cs] : net.gamma0()) {
    if (used_vars.count(v)) out.set_gamma(v, cs);
  }
  for (const auto& [p, toks] : net.m0()) {
    if (keep_places.count(p)) out.set_initial(p, toks);
  }
  for (auto c : net.interfaces()) out.add_interface(c);
  return out;
}

bool structurally_equal(const Net& a, const Net& b) {
  if (a.universe() != b.universe() || a.places() != b.places() || a.gamma0() != b.gamma0() ||
      a.m0() != b.m0() || a.interfaces() != b.interfaces() ||
      a.transitions().size() != b.transitions().size()) {
    return false;
  }
  for (const auto& tr : a.transitions()) {
    auto other = b.find_transition(tr.name);
    if (!other || !(b.transition(*other) == tr)) return false;
  }
  return true;
}

// ---- merges ----------------------------------------------------------------

namespace {

void require_disjoint_places(const Net& n1, const Net& n2) {
  for (const auto& [p, pl] : n1.places()) {
    if (n2.place(p)) throw Error(ErrorCode::SharedPlace, p.name());
  }
}

void require_disjoint_transitions(const Net& n1, const Net& n2) {
  for (const auto& tr : n1.transitions()) {
    if (n2.find_transition(tr.name)) throw Error(ErrorCode::SharedTransition, tr.name);
  }
}

TransitionId require_transition(const Net& n, const std::string& name, const char* which) {
  auto t = n.find_transition(name);
  if (!t) throw Error(ErrorCode::MissingTransition, name + " not in " + which);
  return *t;
}

}  // namespace

Net merge_async(const Net& n1, const Net& n2, const AsyncMergeSpec& spec) {
  require_disjoint_places(n1, n2);
  require_disjoint_transitions(n1, n2);
  require_transition(n1, spec.t1, "n1");
  require_transition(n2, spec.t2, "n2");
  for (auto s : {spec.buffer_out, spec.buffer_in}) {
    if (n1.place(s) || n2.place(s)) throw Error(ErrorCode::SharedPlace, s.name() + " is not fresh");
  }
  if (n1.find_transition(spec.bridge) || n2.find_transition(spec.bridge)) {
    throw Error(ErrorCode::SharedTransition, spec.bridge + " is not fresh");
  }
  Net n = n1;
  unite(n, n2);
  n.add_place(spec.buffer_out, spec.buffer_arity, PlaceClass::Interface);
  n.add_place(spec.buffer_in, spec.buffer_arity, PlaceClass::Interface);
  auto t = n.add_transition(spec.bridge, Guard::conj(spec.guard1, spec.guard2), {},
                            TransClass::ExternalInteraction);
  n.add_output(*n.find_transition(spec.t1), spec.buffer_out, spec.produce);
  n.add_input(t, spec.buffer_out, spec.take);
  n.add_output(t, spec.buffer_in, spec.give);
  n.add_input(*n.find_transition(spec.t2), spec.buffer_in, spec.consume);
  return n;
}

Net merge_sync(const Net& n1, const Net& n2, const SyncMergeSpec& spec) {
  require_disjoint_places(n1, n2);
  require_disjoint_transitions(n1, n2);
  if (n1.find_transition(spec.transition) || n2.find_transition(spec.transition)) {
    throw Error(ErrorCode::SharedTransition, spec.transition + " is not fresh");
  }
  auto check_places = [](const Net& owner, const std::vector<SyncArc>& arcs, const char* which) {
    for (const auto& a : arcs) {
      if (!owner.place(a.place)) {
        throw Error(ErrorCode::MissingTransition, a.place.name() + " is not a place of " + which);
      }
    }
  };
  check_places(n1, spec.inputs1, "n1");
  check_places(n1, spec.outputs1, "n1");
  check_places(n2, spec.inputs2, "n2");
  check_places(n2, spec.outputs2, "n2");

  Net n = n1;
  unite(n, n2);
  auto t = n.add_transition(spec.transition, Guard::conj(spec.guard1, spec.guard2), {},
                            TransClass::ExternalInteraction);
  for (const auto* arcs : {&spec.inputs1, &spec.inputs2}) {
    for (const auto& a : *arcs) n.add_input(t, a.place, a.expr);
  }
  for (const auto* arcs : {&spec.outputs1, &spec.outputs2}) {
    for (const auto& a : *arcs) n.add_output(t, a.place, a.expr);
  }
  return n;
}

Net merge_shared_virtual(const Net& n1, const Net& n2, const SharedPlaceSpec& spec) {
  require_disjoint_transitions(n1, n2);
  auto has_arc = [&](const Net& n, const std::string& tname, bool input, const char* which) {
    const Transition& tr = n.transition(require_transition(n, tname, which));
    const auto& arcs = input ? tr.inputs : tr.outputs;
    bool ok = std::any_of(arcs.begin(), arcs.end(),
                          [&](const Arc& a) { return a.is_virtual && a.node == spec.shared; });
    if (!ok) {
      throw Error(ErrorCode::MissingTransition,
                  tname + " has no " + (input ? "input from " : "output to ") + spec.shared.name());
    }
  };
  has_arc(n1, spec.t1, false, "n1");
  has_arc(n1, spec.t2, true, "n1");
  has_arc(n2, spec.t3, true, "n2");
  has_arc(n2, spec.t4, false, "n2");
  Net n = n1;
  unite(n, n2);
  return n;
}

// ---- liveness --------------------------------------------------------------

std::string_view to_string(Liveness l) {
  switch (l) {
    case Liveness::Live: return "live";
    case Liveness::NotLive: return "not-live";
    case Liveness::Unknown: return "unknown";
  }
  return "unknown";
}

LivenessResult check_liveness(const Net& net, const ExplorationBounds& bounds,
                              const std::function<bool(const Configuration&)>& is_final) {
  const ConfigTree ct = build_ct(net, bounds);
  const ConfigGraph cg = ct_to_cg(ct);
  const std::size_t n_nodes = cg.nodes.size();

  std::vector<std::vector<NodeId>> preds(n_nodes);
  for (const auto& e : cg.edges) preds[e.to].push_back(e.from);

  auto backward_closure = [&](std::vector<bool> marks) {
    std::vector<NodeId> stack;
    for (NodeId i = 0; i < n_nodes; ++i) {
      if (marks[i]) stack.push_back(i);
    }
    while (!stack.empty()) {
      NodeId n = stack.back();
      stack.pop_back();
      for (auto p : preds[n]) {
        if (!marks[p]) {
          marks[p] = true;
          stack.push_back(p);
        }
      }
    }
    return marks;
  };

  std::vector<bool> open(n_nodes);
  for (NodeId i = 0; i < n_nodes; ++i) open[i] = !cg.expanded[i];
  const auto reaches_open = backward_closure(open);

  std::vector<NodeId> first_tree_node(n_nodes, 0);
  for (NodeId tn = static_cast<NodeId>(ct.nodes.size()); tn-- > 0;) {
    first_tree_node[cg.tree_to_graph[tn]] = tn;
  }

  bool undecided = cg.truncated;
  for (TransitionId t = 0; t < net.transitions().size(); ++t) {
    std::vector<bool> fires(n_nodes, false);
    for (const auto& e : cg.edges) {
      if (e.transition == t) fires[e.from] = true;
    }
    const auto can_fire = backward_closure(std::move(fires));
    for (NodeId n = 0; n < n_nodes; ++n) {
      if (can_fire[n] || (is_final && is_final(*cg.nodes[n]))) continue;
      if (reaches_open[n]) {
        undecided = true;
        continue;
      }
      return LivenessResult{Liveness::NotLive, t, ct.path_to(first_tree_node[n])};
    }
  }
  return LivenessResult{undecided ? Liveness::Unknown : Liveness::Live, std::nullopt, {}};
}

}  // namespace vpn
