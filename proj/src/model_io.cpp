#include <sstream>

#include "vpn/error.hpp"
#include "vpn/model_io.hpp"

namespace vpn {

namespace {

bool compound(const Guard& g) { return g.op() == Guard::Op::And || g.op() == Guard::Op::Or; }

std::string wrap(const Guard& g) {
  std::string s = format_guard(g);
  return compound(g) ? "(" + s + ")" : s;
}

std::string term_text(const Term& t) { return t.sym.name(); }

void write_rule(std::ostream& os, const LinkRule& r) {
  if (r.condition.is_true() && r.actions.empty()) return;
  os << " rho";
  if (!r.condition.is_true()) os << " if " << format_guard(r.condition) << " then";
  for (const auto& a : r.actions) os << ' ' << (a.op == LinkOp::Add ? '+' : '-') << a.variable.name();
}

}  // namespace

std::string format_guard(const Guard& g) {
  switch (g.op()) {
    case Guard::Op::True: return "true";
    case Guard::Op::Eq: return term_text(g.lhs()) + " = " + term_text(g.rhs());
    case Guard::Op::Neq: return term_text(g.lhs()) + " != " + term_text(g.rhs());
    case Guard::Op::And: return wrap(g.children()[0]) + " and " + wrap(g.children()[1]);
    case Guard::Op::Or: return wrap(g.children()[0]) + " or " + wrap(g.children()[1]);
    case Guard::Op::Not: return "not " + wrap(g.children()[0]);
  }
  return "true";
}

std::string format_tuple(const Tuple& t) {
  std::string s = "<";
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (i) s += ",";
    s += t[i].name();
  }
  return s + ">";
}

std::string format_term_tuple(const TermTuple& t) {
  std::string s = "<";
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (i) s += ",";
    s += t[i].sym.name();
  }
  return s + ">";
}

std::string format_expr(const ArcExpr& e) {
  if (e.empty()) return "{}";
  std::string s;
  for (const auto& [tt, n] : e) {
    if (!s.empty()) s += " + ";
    if (n != 1) s += std::to_string(n) + "*";
    s += format_term_tuple(tt);
  }
  return s;
}

std::string format_tokens(const Tokens& t) {
  if (t.empty()) return "{}";
  std::string s;
  for (const auto& [tup, n] : t) {
    if (!s.empty()) s += ", ";
    if (n != 1) s += std::to_string(n) + "*";
    s += format_tuple(tup);
  }
  return s;
}

std::string serialize_model(const Net& net) {
  ModelDocument doc;
  doc.net = net;
  return serialize_model(doc);
}

std::string serialize_model(const ModelDocument& doc) {
  const Net& net = doc.net;
  std::ostringstream os;

  os << "universe\n";
  std::string consts, vars;
  for (const auto& [s, info] : net.universe()) {
    if (info.is_var) {
      vars += " " + s.name();
    } else if (!net.place(s)) {
      consts += " " + s.name();
      if (info.arity) consts += ":" + std::to_string(*info.arity);
    }
  }
  if (!consts.empty()) os << "  constants" << consts << "\n";
  if (!vars.empty()) os << "  variables" << vars << "\n";

  os << "places\n";
  for (const auto& [p, pl] : net.places()) {
    os << "  " << p.name() << ' ' << pl.arity << ' ' << to_string(pl.cls) << "\n";
  }

  os << "transitions\n";
  for (const auto& tr : net.transitions()) {
    os << "  " << tr.name << ' ' << to_string(tr.cls);
    if (!tr.guard.is_true()) os << " guard " << format_guard(tr.guard);
    write_rule(os, tr.rule);
    os << "\n";
  }

  os << "arcs\n";
  for (const auto& tr : net.transitions()) {
    for (const auto& a : tr.inputs) {
      os << "  " << a.node.name() << " -> " << tr.name << " : " << format_expr(a.expr) << "\n";
    }
    for (const auto& a : tr.outputs) {
      os << "  " << tr.name << " -> " << a.node.name() << " : " << format_expr(a.expr) << "\n";
    }
  }

  if (!net.gamma0().empty()) os << "gamma\n";
  for (const auto& [v, cs] : net.gamma0()) {
    os << "  " << v.name() << " = {";
    bool first = true;
    for (auto c : cs) {
      os << (first ? "" : ", ") << c.name();
      first = false;
    }
    os << "}\n";
  }

  os << "marking\n";
  for (const auto& [p, toks] : net.m0()) os << "  " << p.name() << " = " << format_tokens(toks) << "\n";

  if (!net.interfaces().empty() || !doc.interface_variables.empty()) {
    os << "interfaces\n";
    if (!net.interfaces().empty()) {
      os << "  set";
      for (auto c : net.interfaces()) os << ' ' << c.name();
      os << "\n";
    }
    if (!doc.interface_variables.empty()) {
      os << "  variables";
      for (auto v : doc.interface_variables) os << ' ' << v.name();
      os << "\n";
    }
  }

  if (!doc.components.empty() || !doc.isns.empty()) {
    os << "components\n";
    auto group = [&](const char* kw, const NodeGroup& g) {
      os << "  " << kw << ' ' << g.name << " :";
      for (auto p : g.places) os << ' ' << p.name();
      for (const auto& t : g.transitions) os << ' ' << t;
      os << "\n";
    };
    for (const auto& g : doc.components) group("component", g);
    for (const auto& g : doc.isns) group("isn", g);
  }

  if (!doc.finals.empty()) {
    os << "finals\n";
    for (const auto& [cn, ps] : doc.finals) {
      os << "  " << cn << " =";
      for (auto p : ps) os << ' ' << p.name();
      os << "\n";
    }
  }
  return os.str();
}

MultiComponentNet to_mcn(const ModelDocument& doc) {
  if (doc.components.empty()) {
    MultiComponentNet mcn;
    mcn.fused = doc.net;
    mcn.interface_variables = doc.interface_variables;
    return mcn;
  }
  std::vector<ComponentNet> cns;
  for (const auto& g : doc.components) {
    auto it = doc.finals.find(g.name);
    if (it == doc.finals.end() || it->second.empty()) {
      throw Error(ErrorCode::MissingFinalPlaces, "component " + g.name + " declares no final place");
    }
    cns.push_back({g.name, restrict_net(doc.net, g.places, g.transitions), it->second});
  }
  std::vector<InteractionStructureNet> isns;
  for (const auto& g : doc.isns) {
    InteractionStructureNet isn{g.name, restrict_net(doc.net, g.places, g.transitions, false), {}};
    for (const auto& t : g.transitions) {
      if (doc.net.transition(*doc.net.find_transition(t)).cls == TransClass::Interaction) {
        isn.references.push_back(t);
      }
    }
    isns.push_back(std::move(isn));
  }
  MultiComponentNet mcn = compose_mcn(std::move(cns), std::move(isns), doc.interface_variables);
  if (!structurally_equal(mcn.fused, doc.net)) {
    throw Error(ErrorCode::InvalidNet, "component and interaction groups do not cover the whole net");
  }
  mcn.fused = doc.net;
  return mcn;
}

}  // namespace vpn
