#include "vpn/kernel.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>

#include "vpn/error.hpp"

namespace vpn {

// ---- validation ------------------------------------------------------------

namespace {

void check_terms(const Net& net, const ArcExpr& e, const std::string& where, ValidationReport& out) {
  for (const auto& [tt, n] : e) {
    for (const auto& term : tt) {
      if (term.is_var && !net.is_variable(term.sym)) {
        out.push_back({"undeclared symbol", where + ": " + term.sym.name() + " is not a variable"});
      } else if (!term.is_var && !net.is_constant(term.sym)) {
        out.push_back({"undeclared symbol", where + ": " + term.sym.name() + " is not a constant"});
      }
    }
  }
}

std::set<std::size_t> tuple_lengths(const ArcExpr& e) {
  std::set<std::size_t> lens;
  for (const auto& [tt, n] : e) lens.insert(tt.size());
  return lens;
}

void check_arc(const Net& net, const Transition& tr, const Arc& arc, bool input,
               ValidationReport& out) {
  const std::string where = input ? "arc " + arc.node.name() + " -> " + tr.name
                                  : "arc " + tr.name + " -> " + arc.node.name();
  check_terms(net, arc.expr, where, out);
  if (arc.is_virtual) {
    if (!net.is_variable(arc.node)) {
      out.push_back({"undeclared symbol", where + ": virtual place is not a variable"});
    }
    if (tuple_lengths(arc.expr).size() > 1) {
      out.push_back({"arity", where + ": tuples of a virtual arc must share one length"});
    }
    return;
  }
  const Place* p = net.place(arc.node);
  if (!p) {
    out.push_back({"undeclared place", where + ": " + arc.node.name() + " is not a place"});
    return;
  }
  for (auto len : tuple_lengths(arc.expr)) {
    if (len != p->arity) {
      out.push_back({"arity", where + ": tuple length " + std::to_string(len) +
                                  " differs from arity " + std::to_string(p->arity)});
    }
  }
}

}  // namespace

ValidationReport validate_net(const Net& net) {
  ValidationReport out;
  for (const auto& tr : net.transitions()) {
    if (net.place(Symbol::intern(tr.name))) {
      out.push_back({"places and transitions disjoint", tr.name + " is both a place and a transition"});
    }
    for (const auto& a : tr.inputs) check_arc(net, tr, a, true, out);
    for (const auto& a : tr.outputs) check_arc(net, tr, a, false, out);

    const auto in_vars = tr.input_variables();
    std::set<Symbol> out_vars;
    for (const auto& a : tr.outputs) {
      if (a.is_virtual) out_vars.insert(a.node);
      for (const auto& [tt, n] : a.expr) {
        for (const auto& term : tt) {
          if (term.is_var) out_vars.insert(term.sym);
        }
      }
    }
    for (auto v : out_vars) {
      if (!in_vars.count(v)) {
        out.push_back({"variable symmetry",
                       tr.name + ": " + v.name() + " occurs on the output side only"});
      }
    }
    for (auto v : tr.guard.variables()) {
      if (!in_vars.count(v)) {
        out.push_back({"guard variable", tr.name + ": guard variable " + v.name() +
                                             " does not occur on the input side"});
      }
    }
    for (auto v : tr.rule.condition.variables()) {
      if (!in_vars.count(v)) {
        out.push_back({"link rule", tr.name + ": rule variable " + v.name() +
                                        " does not occur on the input side"});
      }
    }
    for (const auto& act : tr.rule.actions) {
      bool is_post = std::any_of(tr.outputs.begin(), tr.outputs.end(), [&](const Arc& a) {
        return a.is_virtual && a.node == act.variable;
      });
      if (!is_post) {
        out.push_back({"link rule", tr.name + ": " + act.variable.name() +
                                        " is not a virtual post-place"});
      }
    }
  }
  for (const auto& [v, consts] : net.gamma0()) {
    if (!net.is_variable(v)) {
      out.push_back({"constraint function", v.name() + " is not a variable"});
    }
    for (auto c : consts) {
      if (!net.is_constant(c)) {
        out.push_back({"constraint function", v.name() + " maps to undeclared " + c.name()});
      }
    }
  }
  for (const auto& [p, toks] : net.m0()) {
    const Place* pl = net.place(p);
    if (!pl) {
      out.push_back({"undeclared place", "initial marking of unknown place " + p.name()});
      continue;
    }
    for (const auto& [tup, n] : toks) {
      if (tup.size() != pl->arity) {
        out.push_back({"arity", "token of length " + std::to_string(tup.size()) + " in place " +
                                    p.name() + " of arity " + std::to_string(pl->arity)});
      }
      for (auto s : tup) {
        if (!net.is_constant(s)) {
          out.push_back({"undeclared symbol", "token element " + s.name() + " in " + p.name()});
        }
      }
    }
  }
  for (auto c : net.interfaces()) {
    if (!net.is_constant(c)) {
      out.push_back({"interface set", c.name() + " is not a constant"});
    }
  }
  return out;
}

// ---- guards ----------------------------------------------------------------

bool eval_guard(const Guard& g, const Binding& b) {
  switch (g.op()) {
    case Guard::Op::True: return true;
    case Guard::Op::Eq: return b.resolve(g.lhs()) == b.resolve(g.rhs());
    case Guard::Op::Neq: return b.resolve(g.lhs()) != b.resolve(g.rhs());
    case Guard::Op::And: {
      bool r = true;
      for (const auto& c : g.children()) r = eval_guard(c, b) && r;
      return r;
    }
    case Guard::Op::Or: {
      bool r = false;
      for (const auto& c : g.children()) r = eval_guard(c, b) || r;
      return r;
    }
    case Guard::Op::Not: return !eval_guard(g.children().front(), b);
  }
  return false;
}

// ---- enabledness -----------------------------------------------------------

namespace {

std::size_t expr_length(const ArcExpr& e) { return e.begin()->first.size(); }

// Place an input/output arc refers to under b, or nullopt if unbound.
std::optional<Symbol> arc_place(const Arc& a, const Binding& b) {
  if (!a.is_virtual) return a.node;
  return b.get(a.node);
}

}  // namespace

bool is_enabled(const Net& net, TransitionId t, const Binding& b, const Configuration& cfg) {
  const Transition& tr = net.transition(t);
  for (auto v : tr.variables()) {
    auto c = b.get(v);
    if (!c || !net.is_constant(*c)) return false;
  }
  if (!eval_guard(tr.guard, b)) return false;

  std::map<Symbol, Tokens> demand;
  for (const auto& a : tr.inputs) {
    Symbol p = *arc_place(a, b);
    if (a.is_virtual) {
      if (!cfg.linked(a.node, p) || !cfg.has_place(p)) return false;
    }
    auto arity = cfg.places.find(p);
    if (arity == cfg.places.end()) return false;
    if (!a.expr.empty() && expr_length(a.expr) != arity->second) return false;
    demand[p] += b.instantiate(a.expr);
  }
  for (const auto& [p, need] : demand) {
    if (!cfg.tokens(p).contains(need)) return false;
  }
  for (const auto& a : tr.outputs) {
    if (!a.is_virtual) continue;
    Symbol c = *b.get(a.node);
    auto existing = cfg.places.find(c);
    if (a.expr.empty()) {
      if (existing == cfg.places.end()) return false;
      continue;
    }
    const auto len = expr_length(a.expr);
    if (existing != cfg.places.end()) {
      if (existing->second != len) return false;
    } else {
      auto declared = net.universe().at(c).arity;
      if (declared && *declared != len) return false;
    }
  }
  return true;
}

std::vector<Binding> enabled_bindings(const Net& net, TransitionId t, const Configuration& cfg) {
  const Transition& tr = net.transition(t);

  // Goals in search order: solid arcs first so that data variables are bound
  // by token matching before virtual places are chosen.
  struct Goal {
    const Arc* arc;
    const TermTuple* terms;  // null: choose the virtual place itself
  };
  std::vector<Goal> goals;
  for (const auto& a : tr.inputs) {
    if (a.is_virtual) continue;
    for (const auto& [tt, n] : a.expr) goals.push_back({&a, &tt});
  }
  for (const auto& a : tr.inputs) {
    if (!a.is_virtual) continue;
    goals.push_back({&a, nullptr});
    for (const auto& [tt, n] : a.expr) goals.push_back({&a, &tt});
  }

  const auto vars = tr.variables();
  const auto constants = net.constants();
  std::set<Binding> found;
  Binding b;

  std::function<void(std::size_t)> complete_free;
  std::vector<Symbol> free_vars;
  complete_free = [&](std::size_t i) {
    if (i == free_vars.size()) {
      if (is_enabled(net, t, b, cfg)) found.insert(b);
      return;
    }
    for (auto c : constants) {
      b.bind(free_vars[i], c);
      complete_free(i + 1);
      b.erase(free_vars[i]);
    }
  };

  std::function<void(std::size_t)> search = [&](std::size_t gi) {
    if (gi == goals.size()) {
      free_vars.clear();
      for (auto v : vars) {
        if (!b.contains(v)) free_vars.push_back(v);
      }
      complete_free(0);
      return;
    }
    const Goal& g = goals[gi];
    if (!g.terms) {
      Symbol v = g.arc->node;
      if (auto bound = b.get(v)) {
        if (cfg.linked(v, *bound) && cfg.has_place(*bound)) search(gi + 1);
        return;
      }
      auto it = cfg.gamma.find(v);
      if (it == cfg.gamma.end()) return;
      for (auto c : it->second) {
        if (!cfg.has_place(c)) continue;
        b.bind(v, c);
        search(gi + 1);
        b.erase(v);
      }
      return;
    }
    Symbol p = *arc_place(*g.arc, b);
    for (const auto& [tok, n] : cfg.tokens(p)) {
      if (tok.size() != g.terms->size()) continue;
      std::vector<Symbol> newly;
      bool ok = true;
      for (std::size_t k = 0; k < tok.size() && ok; ++k) {
        const Term& term = (*g.terms)[k];
        if (!term.is_var) {
          ok = term.sym == tok[k];
        } else if (auto cur = b.get(term.sym)) {
          ok = *cur == tok[k];
        } else {
          b.bind(term.sym, tok[k]);
          newly.push_back(term.sym);
        }
      }
      if (ok) search(gi + 1);
      for (auto v : newly) b.erase(v);
    }
  };
  search(0);
  return {found.begin(), found.end()};
}

// ---- firing ----------------------------------------------------------------

Configuration fire(const Net& net, TransitionId t, const Binding& b, const Configuration& cfg) {
  if (!is_enabled(net, t, b, cfg)) {
    throw Error(ErrorCode::NotEnabled,
                net.transition(t).name + " under " + b.to_string());
  }
  const Transition& tr = net.transition(t);
  Configuration next = cfg;

  for (const auto& a : tr.outputs) {
    if (!a.is_virtual) continue;
    Symbol c = *b.get(a.node);
    if (!next.has_place(c)) {
      next.places.emplace(c, static_cast<std::uint32_t>(expr_length(a.expr)));
    }
  }

  if (!tr.rule.empty() && eval_guard(tr.rule.condition, b)) {
    for (const auto& act : tr.rule.actions) {
      Symbol c = *b.get(act.variable);
      auto& linked = next.gamma[act.variable];
      if (act.op == LinkOp::Add) {
        linked.insert(c);
      } else {
        linked.erase(c);
      }
      if (linked.empty()) next.gamma.erase(act.variable);
    }
  }

  for (const auto& a : tr.inputs) {
    Symbol p = *arc_place(a, b);
    Tokens toks = next.tokens(p);
    toks -= b.instantiate(a.expr);
    next.set_tokens(p, std::move(toks));
  }
  for (const auto& a : tr.outputs) {
    Symbol p = *arc_place(a, b);
    Tokens toks = next.tokens(p);
    toks += b.instantiate(a.expr);
    next.set_tokens(p, std::move(toks));
  }
  return next;
}

bool check_data_sync(const Net& net, const Trace& trace) {
  Configuration cfg = net.initial_configuration();
  std::size_t index = 0;
  for (const auto& [t, b] : trace) {
    if (t >= net.transitions().size()) {
      throw Error(ErrorCode::InvalidTrace, "step " + std::to_string(index) + ": unknown transition");
    }
    const Transition& tr = net.transition(t);
    // One constant per formal parameter, covering every parameter of t.
    for (auto v : tr.variables()) {
      if (!b.get(v)) {
        throw Error(ErrorCode::InvalidTrace, "step " + std::to_string(index) + ": " + v.name() +
                                                 " has no instantiation in " + tr.name);
      }
    }
    if (!is_enabled(net, t, b, cfg)) {
      throw Error(ErrorCode::InvalidTrace, "step " + std::to_string(index) + ": " + tr.name +
                                               " not enabled under " + b.to_string());
    }
    cfg = fire(net, t, b, cfg);
    ++index;
  }
  return true;
}

}  // namespace vpn
