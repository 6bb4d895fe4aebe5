#include "vpn/analysis.hpp"

#include <deque>
#include <json.hpp>
#include <sstream>

#include "vpn/error.hpp"

namespace vpn {

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::Holds: return "holds";
    case Verdict::Fails: return "fails";
    case Verdict::HoldsWithinBound: return "holds-within-bound";
    case Verdict::Inconclusive: return "inconclusive";
    case Verdict::Vacuous: return "vacuous";
  }
  return "inconclusive";
}

bool is_final_configuration(const MultiComponentNet& mcn, const Configuration& c, FinalMode mode) {
  if (mode == FinalMode::Simultaneous) return mcn.is_final(c);
  for (const auto& cn : mcn.components) {
    for (auto p : cn.finals) {
      if (!c.tokens(p).empty()) return true;
    }
  }
  return false;
}

std::string format_trace(const Net& net, const Trace& trace) {
  std::string out;
  for (const auto& [t, b] : trace) {
    if (!out.empty()) out += " ; ";
    std::string args;
    for (const auto& [v, c] : b.map()) {
      if (!args.empty()) args += ",";
      args += v.name() + "=" + c.name();
    }
    out += net.transition(t).name + "[" + args + "]";
  }
  return out.empty() ? "<empty>" : out;
}

namespace {

Verdict positive(bool truncated) { return truncated ? Verdict::HoldsWithinBound : Verdict::Holds; }
Verdict negative(bool definitive) { return definitive ? Verdict::Fails : Verdict::Inconclusive; }

bool is_interaction(TransClass c) { return c != TransClass::Process; }

std::string link_text(const Link& l) { return l.first.name() + "->" + l.second.name(); }

// Tree node that first maps onto each graph node.
std::vector<NodeId> first_tree_nodes(const ConfigTree& ct, const ConfigGraph& cg) {
  std::vector<NodeId> out(cg.nodes.size(), 0);
  for (NodeId tn = static_cast<NodeId>(ct.nodes.size()); tn-- > 0;) out[cg.tree_to_graph[tn]] = tn;
  return out;
}

// Breadth-first search over (graph node, extra) pairs. `step` returns the
// successor extra, or nullopt when the edge is a violation.
struct ProductResult {
  bool violated = false;
  bool exhausted = false;  // state cap hit
  Trace path;              // to the violation, including the violating edge
  std::size_t violating_edge = 0;
};

template <typename Extra, typename StepFn>
ProductResult product_search(const ConfigGraph& cg, Extra init, StepFn step,
                                            std::size_t max_states = 2'000'000) {
  ProductResult res;
  struct State {
    NodeId node;
    Extra extra;
    std::optional<std::size_t> parent;
    std::size_t edge;
  };
  std::vector<State> states;
  std::map<std::pair<NodeId, Extra>, std::size_t> seen;
  const auto out = cg.out_edges();
  states.push_back({0, init, std::nullopt, 0});
  seen.emplace(std::make_pair(NodeId{0}, init), 0);
  auto path_of = [&](std::size_t s) {
    Trace tr;
    for (std::optional<std::size_t> cur = s; cur && states[*cur].parent; cur = states[*cur].parent) {
      const Edge& e = cg.edges[states[*cur].edge];
      tr.emplace_back(e.transition, e.binding);
    }
    return Trace(tr.rbegin(), tr.rend());
  };
  for (std::size_t i = 0; i < states.size(); ++i) {
    const NodeId n = states[i].node;
    for (auto ei : out[n]) {
      const Edge& e = cg.edges[ei];
      std::optional<Extra> next = step(states[i].extra, e);
      if (!next) {
        res.violated = true;
        res.path = path_of(i);
        res.path.emplace_back(e.transition, e.binding);
        res.violating_edge = ei;
        return res;
      }
      auto key = std::make_pair(e.to, *next);
      if (seen.count(key)) continue;
      if (states.size() >= max_states) {
        res.exhausted = true;
        return res;
      }
      seen.emplace(key, states.size());
      states.push_back({e.to, std::move(*next), i, ei});
    }
  }
  return res;
}

std::set<Symbol> interface_places(const MultiComponentNet& mcn) {
  std::set<Symbol> out = mcn.fused.interfaces();
  for (const auto& [p, pl] : mcn.fused.places()) {
    if (pl.cls == PlaceClass::Interface) out.insert(p);
  }
  return out;
}

// Places an edge's firing produces into / consumes from (non-empty expressions).
void touched_places(const Net& net, const Edge& e, std::set<Symbol>& produced, std::set<Symbol>& consumed) {
  const Transition& tr = net.transition(e.transition);
  auto target = [&](const Arc& a) { return a.is_virtual ? e.binding.get(a.node) : std::optional<Symbol>(a.node); };
  for (const auto& a : tr.outputs) {
    if (a.expr.empty()) continue;
    if (auto p = target(a)) produced.insert(*p);
  }
  for (const auto& a : tr.inputs) {
    if (a.expr.empty()) continue;
    if (auto p = target(a)) consumed.insert(*p);
  }
}

}  // namespace

// ---- connectivity ----------------------------------------------------------

ConnectivityResult analyze_connectivity(const MultiComponentNet& mcn, const ConfigTree& ct) {
  if (mcn.interface_variables.empty()) {
    throw Error(ErrorCode::NoInterfaceDeclared, "no interface variable declared");
  }
  ConnectivityResult r;
  std::vector<Symbol> empty_vars;
  for (auto v : mcn.interface_variables) {
    r.mapping_sets[v] = mapping_set(mcn.fused, ct, v);
    if (r.mapping_sets[v].empty()) {
      empty_vars.push_back(v);
      continue;
    }
    for (const auto& e : ct.edges) {
      if (e.binding.contains(v)) {
        r.witnesses[v] = ct.path_to(e.to);
        break;
      }
    }
  }
  if (empty_vars.empty()) {
    r.verdict = positive(ct.truncated);
  } else {
    r.verdict = negative(!ct.truncated);
    r.reason = "mapping set of " + empty_vars.front().name() + " is empty over " +
               std::to_string(ct.nodes.size()) + " configurations";
  }
  return r;
}

// ---- soundness -------------------------------------------------------------

SoundnessResult analyze_soundness(const MultiComponentNet& mcn, const ConfigTree& ct,
                                  const std::set<Symbol>& interfaces, const AnalysisOptions& opts) {
  if (mcn.components.empty()) {
    throw Error(ErrorCode::MissingFinalPlaces, "no components");
  }
  for (const auto& cn : mcn.components) {
    if (cn.finals.empty()) {
      throw Error(ErrorCode::MissingFinalPlaces, cn.name + " declares no final place");
    }
  }
  if (interfaces.empty()) throw Error(ErrorCode::MissingInterfaceSet, "interface set is empty");

  const Net& net = mcn.fused;
  SoundnessResult r;
  r.declared_interfaces = interfaces;
  auto fail = [&](int step, bool definitive, std::string reason, Trace path) {
    r.failed_step = step;
    r.verdict = negative(definitive);
    r.reason = std::move(reason);
    r.counterexample = std::move(path);
    return r;
  };

  // Step 1: final configurations reachable.
  if (opts.final_mode == FinalMode::Simultaneous) {
    std::optional<NodeId> hit;
    for (const auto& n : ct.nodes) {
      if (mcn.is_final(*n.config)) {
        hit = n.id;
        break;
      }
    }
    if (!hit) {
      Trace path;
      for (const auto& n : ct.nodes) {
        if (n.status == NodeStatus::LeafDeadlock) {
          path = ct.path_to(n.id);
          break;
        }
      }
      return fail(1, !ct.truncated, "no reachable configuration marks a final place of every component",
                  std::move(path));
    }
    r.final_witness = ct.path_to(*hit);
  } else {
    for (const auto& cn : mcn.components) {
      std::optional<NodeId> hit;
      for (const auto& n : ct.nodes) {
        bool done = std::any_of(cn.finals.begin(), cn.finals.end(),
                                [&](Symbol p) { return !n.config->tokens(p).empty(); });
        if (done) {
          hit = n.id;
          break;
        }
      }
      if (!hit) return fail(1, !ct.truncated, "component " + cn.name + " never finishes", {});
      if (r.final_witness.size() < ct.path_to(*hit).size()) r.final_witness = ct.path_to(*hit);
    }
  }

  // Step 2: link set over the interface variables.
  const std::set<Symbol> ivars = mcn.interface_variables.empty() ? net.variables() : mcn.interface_variables;
  r.links = link_set(ct, ivars);

  // Step 3: observed interface constants within the declared set.
  r.actual_interfaces = r.links.constants();
  for (auto c : r.actual_interfaces) {
    if (!interfaces.count(c)) {
      Trace path;
      for (const auto& n : ct.nodes) {
        bool linked = std::any_of(ivars.begin(), ivars.end(), [&](Symbol v) { return n.config->linked(v, c); });
        if (linked) {
          path = ct.path_to(n.id);
          break;
        }
      }
      return fail(3, true, "link target " + c.name() + " is not a declared interface", std::move(path));
    }
  }

  // Step 4: every created or sustained link is used by an interaction transition.
  std::set<Link> usable = r.links.created;
  usable.insert(r.links.sustained.begin(), r.links.sustained.end());
  for (const auto& l : usable) {
    std::optional<std::size_t> found;
    for (std::size_t i = 0; i < ct.edges.size(); ++i) {
      const Edge& e = ct.edges[i];
      if (is_interaction(net.transition(e.transition).cls) && e.binding.get(l.first) == l.second) {
        found = i;
        break;
      }
    }
    if (!found) {
      Trace path;
      for (const auto& n : ct.nodes) {
        if (n.config->linked(l.first, l.second)) {
          path = ct.path_to(n.id);
          break;
        }
      }
      return fail(4, !ct.truncated, "link " + link_text(l) + " is never used by an interaction transition",
                  std::move(path));
    }
    const Edge& e = ct.edges[*found];
    r.usability.push_back({l, e.transition, e.binding, ct.path_to(e.to)});
  }

  // Step 5: a removed link is not used again before it is re-created.
  const ConfigGraph cg = ct_to_cg(ct);
  auto step = [&](const std::set<Link>& disc, const Edge& e) -> std::optional<std::set<Link>> {
    const Gamma& before = cg.nodes[e.from]->gamma;
    const Gamma& after = cg.nodes[e.to]->gamma;
    const LinkDiff created = gamma_difference(after, before);
    if (is_interaction(net.transition(e.transition).cls)) {
      for (const auto& l : disc) {
        if (e.binding.get(l.first) == l.second && !cg.nodes[e.from]->linked(l.first, l.second) &&
            !created.count(l)) {
          return std::nullopt;
        }
      }
    }
    std::set<Link> next;
    for (const auto& l : disc) {
      if (!created.count(l)) next.insert(l);
    }
    for (const auto& l : gamma_difference(before, after)) {
      if (ivars.count(l.first)) next.insert(l);
    }
    return next;
  };
  auto res = product_search(cg, std::set<Link>{}, step);
  if (res.violated) {
    const Edge& e = cg.edges[res.violating_edge];
    return fail(5, true, net.transition(e.transition).name + " uses a disconnected interface", res.path);
  }
  r.verdict = (res.exhausted || ct.truncated) ? Verdict::HoldsWithinBound : Verdict::Holds;
  return r;
}

// ---- validity --------------------------------------------------------------

ValidityResult analyze_validity(const MultiComponentNet& mcn, const ConfigTree& ct, const AnalysisOptions& opts) {
  const Net& net = mcn.fused;
  ValidityResult r;
  r.interface_places = interface_places(mcn);
  auto fail = [&](int clause, bool definitive, std::string reason, Trace path) {
    r.failed_clause = clause;
    r.verdict = negative(definitive);
    r.reason = std::move(reason);
    r.counterexample = std::move(path);
    return r;
  };

  // Clause 1: each firing instantiates every formal parameter exactly once
  // and reproduces the recorded successor.
  for (const auto& e : ct.edges) {
    const Transition& tr = net.transition(e.transition);
    const auto vars = tr.variables();
    bool exact = e.binding.size() == vars.size() &&
                 std::all_of(vars.begin(), vars.end(), [&](Symbol v) { return e.binding.contains(v); });
    const Configuration& from = *ct.nodes[e.from].config;
    if (!exact || !is_enabled(net, e.transition, e.binding, from) ||
        saturate(fire(net, e.transition, e.binding, from), ct.replenished) != *ct.nodes[e.to].config) {
      return fail(1, true, tr.name + " does not replay under " + e.binding.to_string(), ct.path_to(e.to));
    }
    ++r.replayed_edges;
  }

  const ConfigGraph cg = ct_to_cg(ct);
  bool undecided = false;

  // Clause 2: no second send into a non-empty interface place by the same
  // producer without a consumer in between.
  using Pending = std::set<std::pair<Symbol, TransitionId>>;
  auto step = [&](const Pending& pending, const Edge& e) -> std::optional<Pending> {
    std::set<Symbol> produced, consumed;
    touched_places(net, e, produced, consumed);
    Pending next;
    for (const auto& pr : pending) {
      if (!consumed.count(pr.first)) next.insert(pr);
    }
    for (auto p : produced) {
      if (!r.interface_places.count(p)) continue;
      if (!consumed.count(p) && pending.count({p, e.transition}) && !cg.nodes[e.from]->tokens(p).empty()) {
        return std::nullopt;
      }
      next.insert({p, e.transition});
    }
    return next;
  };
  auto res = product_search(cg, Pending{}, step);
  if (res.violated) {
    const Edge& e = cg.edges[res.violating_edge];
    return fail(2, true, net.transition(e.transition).name + " sends again into an unconsumed interface place",
                res.path);
  }
  undecided = undecided || res.exhausted;

  // Clause 3: every marked interface place is eventually emptied, or the path
  // ends in a final configuration.
  const auto out = cg.out_edges();
  const auto first = first_tree_nodes(ct, cg);
  std::set<Symbol> seen_places;
  for (const auto& n : cg.nodes) {
    for (const auto& [p, toks] : n->marking) {
      if (r.interface_places.count(p)) seen_places.insert(p);
    }
  }
  for (auto p : seen_places) {
    auto good = [&](NodeId n) {
      return cg.nodes[n]->tokens(p).empty() || is_final_configuration(mcn, *cg.nodes[n], opts.final_mode);
    };
    auto fixpoint = [&](bool optimistic) {
      std::vector<bool> af(cg.nodes.size(), false);
      for (bool changed = true; changed;) {
        changed = false;
        for (NodeId n = 0; n < cg.nodes.size(); ++n) {
          if (af[n]) continue;
          bool in = good(n) || (optimistic && !cg.expanded[n]);
          if (!in && cg.expanded[n] && !out[n].empty()) {
            in = std::all_of(out[n].begin(), out[n].end(), [&](std::size_t ei) { return af[cg.edges[ei].to]; });
          }
          if (in) {
            af[n] = true;
            changed = true;
          }
        }
      }
      return af;
    };
    const auto af_opt = fixpoint(true);
    for (NodeId n = 0; n < cg.nodes.size(); ++n) {
      if (af_opt[n]) continue;
      // Counterexample: reach n, then follow non-AF successors to a deadlock or a loop.
      Trace path = ct.path_to(first[n]);
      std::set<NodeId> visited{n};
      for (NodeId cur = n;;) {
        auto it = std::find_if(out[cur].begin(), out[cur].end(),
                               [&](std::size_t ei) { return !af_opt[cg.edges[ei].to]; });
        if (it == out[cur].end()) break;
        const Edge& e = cg.edges[*it];
        path.emplace_back(e.transition, e.binding);
        cur = e.to;
        if (!visited.insert(cur).second) break;
      }
      return fail(3, true, "data in interface place " + p.name() + " can remain unconsumed", path);
    }
    if (ct.truncated) {
      const auto af_pes = fixpoint(false);
      undecided = undecided || std::find(af_pes.begin(), af_pes.end(), false) != af_pes.end();
    }
  }

  r.verdict = (undecided || ct.truncated) ? Verdict::HoldsWithinBound : Verdict::Holds;
  return r;
}

// ---- report ----------------------------------------------------------------

AnalysisReport full_report(const MultiComponentNet& mcn, const ExplorationBounds& bounds,
                           const AnalysisOptions& opts, PropertySelection which) {
  const ConfigTree ct = build_ct(mcn.fused, bounds);
  AnalysisReport rep;
  rep.truncated = ct.truncated;
  rep.tree_nodes = ct.nodes.size();
  rep.graph_nodes = ct_to_cg(ct).nodes.size();
  rep.complete_paths = ct.complete_path_ends().size();
  if (which.connectivity) {
    try {
      rep.connectivity = analyze_connectivity(mcn, ct);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::NoInterfaceDeclared) throw;
      ConnectivityResult c;
      c.verdict = Verdict::Fails;
      c.reason = e.what();
      rep.connectivity = std::move(c);
    }
  }
  if (which.soundness) {
    try {
      rep.soundness = analyze_soundness(mcn, ct, mcn.fused.interfaces(), opts);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::MissingFinalPlaces && e.code() != ErrorCode::MissingInterfaceSet) throw;
      SoundnessResult s;
      s.verdict = Verdict::Vacuous;
      s.reason = e.what();
      rep.soundness = std::move(s);
    }
  }
  if (which.validity) rep.validity = analyze_validity(mcn, ct, opts);
  return rep;
}

int AnalysisReport::exit_code() const {
  std::vector<Verdict> vs;
  if (connectivity) vs.push_back(connectivity->verdict);
  if (soundness) vs.push_back(soundness->verdict);
  if (validity) vs.push_back(validity->verdict);
  if (std::count(vs.begin(), vs.end(), Verdict::Fails)) return 1;
  for (auto v : vs) {
    if (v == Verdict::Inconclusive || v == Verdict::HoldsWithinBound) return 3;
  }
  return 0;
}

namespace {

using nlohmann::json;

json trace_json(const Net& net, const Trace& tr) {
  json a = json::array();
  for (const auto& [t, b] : tr) {
    json bj = json::object();
    for (const auto& [v, c] : b.map()) bj[v.name()] = c.name();
    a.push_back({{"transition", net.transition(t).name}, {"binding", bj}});
  }
  return a;
}

json symbols_json(const std::set<Symbol>& s) {
  json a = json::array();
  for (auto x : s) a.push_back(x.name());
  return a;
}

json links_json(const std::set<Link>& s) {
  json a = json::array();
  for (const auto& [v, c] : s) a.push_back({v.name(), c.name()});
  return a;
}

std::string links_text(const std::set<Link>& s) {
  std::string out = "{";
  for (const auto& l : s) out += (out.size() > 1 ? ", " : "") + link_text(l);
  return out + "}";
}

std::string symbols_text(const std::set<Symbol>& s) {
  std::string out = "{";
  for (auto x : s) out += (out.size() > 1 ? ", " : "") + x.name();
  return out + "}";
}

}  // namespace

std::string AnalysisReport::to_json(const Net& net) const {
  json j = {{"schema_version", kReportSchemaVersion},
            {"truncated", truncated},
            {"tree_nodes", tree_nodes},
            {"graph_nodes", graph_nodes},
            {"complete_paths", complete_paths},
            {"exit_code", exit_code()}};
  if (connectivity) {
    json ms = json::object(), ws = json::object();
    for (const auto& [v, cs] : connectivity->mapping_sets) ms[v.name()] = symbols_json(cs);
    for (const auto& [v, tr] : connectivity->witnesses) ws[v.name()] = trace_json(net, tr);
    j["connectivity"] = {{"verdict", std::string(to_string(connectivity->verdict))},
                         {"reason", connectivity->reason},
                         {"mapping_sets", ms},
                         {"witnesses", ws}};
  }
  if (soundness) {
    const auto& s = *soundness;
    json us = json::array();
    for (const auto& u : s.usability) {
      us.push_back({{"link", {u.link.first.name(), u.link.second.name()}},
                    {"transition", net.transition(u.transition).name},
                    {"path", trace_json(net, u.path)}});
    }
    j["soundness"] = {{"verdict", std::string(to_string(s.verdict))},
                      {"failed_step", s.failed_step},
                      {"reason", s.reason},
                      {"final_witness", trace_json(net, s.final_witness)},
                      {"links",
                       {{"sustained", links_json(s.links.sustained)},
                        {"created", links_json(s.links.created)},
                        {"broken", links_json(s.links.broken)}}},
                      {"actual_interfaces", symbols_json(s.actual_interfaces)},
                      {"declared_interfaces", symbols_json(s.declared_interfaces)},
                      {"usability", us},
                      {"counterexample", trace_json(net, s.counterexample)}};
  }
  if (validity) {
    const auto& v = *validity;
    j["validity"] = {{"verdict", std::string(to_string(v.verdict))},
                     {"failed_clause", v.failed_clause},
                     {"reason", v.reason},
                     {"replayed_edges", v.replayed_edges},
                     {"interface_places", symbols_json(v.interface_places)},
                     {"counterexample", trace_json(net, v.counterexample)}};
  }
  return j.dump(2) + "\n";
}

std::string AnalysisReport::to_text(const Net& net) const {
  std::ostringstream os;
  os << "explored " << tree_nodes << " tree nodes, " << graph_nodes << " configurations, " << complete_paths
     << " complete paths" << (truncated ? " (truncated)" : "") << "\n";
  if (connectivity) {
    os << "connectivity: " << to_string(connectivity->verdict) << "\n";
    for (const auto& [v, cs] : connectivity->mapping_sets) os << "  R(" << v.name() << ") = " << symbols_text(cs) << "\n";
    if (!connectivity->reason.empty()) os << "  reason: " << connectivity->reason << "\n";
  }
  if (soundness) {
    const auto& s = *soundness;
    os << "soundness: " << to_string(s.verdict);
    if (s.failed_step) os << " (step " << s.failed_step << ")";
    os << "\n";
    if (!s.reason.empty()) os << "  reason: " << s.reason << "\n";
    if (s.verdict != Verdict::Vacuous && s.failed_step != 1) {
      os << "  final witness: " << format_trace(net, s.final_witness) << "\n";
      os << "  A = " << links_text(s.links.sustained) << "\n";
      os << "  C = " << links_text(s.links.created) << "\n";
      os << "  K = " << links_text(s.links.broken) << "\n";
      os << "  actual interfaces " << symbols_text(s.actual_interfaces) << " within declared "
         << symbols_text(s.declared_interfaces) << "\n";
      for (const auto& u : s.usability) {
        os << "  " << link_text(u.link) << " used by " << net.transition(u.transition).name << "\n";
      }
    }
    if (!s.counterexample.empty()) os << "  counterexample: " << format_trace(net, s.counterexample) << "\n";
  }
  if (validity) {
    const auto& v = *validity;
    os << "validity: " << to_string(v.verdict);
    if (v.failed_clause) os << " (clause " << v.failed_clause << ")";
    os << "\n";
    os << "  replayed " << v.replayed_edges << " edges; interface places " << symbols_text(v.interface_places)
       << "\n";
    if (!v.reason.empty()) os << "  reason: " << v.reason << "\n";
    if (!v.counterexample.empty()) os << "  counterexample: " << format_trace(net, v.counterexample) << "\n";
  }
  return os.str();
}

}  // namespace vpn
