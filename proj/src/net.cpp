#include "vpn/net.hpp"

#include <algorithm>
#include <sstream>

#include "vpn/error.hpp"

namespace vpn {

// ---- classes ---------------------------------------------------------------

std::string_view to_string(PlaceClass c) {
  switch (c) {
    case PlaceClass::InitialFinal: return "initial_final";
    case PlaceClass::Process: return "process";
    case PlaceClass::Data: return "data";
    case PlaceClass::Contextual: return "contextual";
    case PlaceClass::Interface: return "interface";
  }
  return "process";
}

std::string_view to_string(TransClass c) {
  switch (c) {
    case TransClass::Process: return "process";
    case TransClass::Interaction: return "interaction";
    case TransClass::ExternalInteraction: return "external";
  }
  return "process";
}

std::optional<PlaceClass> place_class_from(std::string_view s) {
  for (auto c : {PlaceClass::InitialFinal, PlaceClass::Process, PlaceClass::Data,
                 PlaceClass::Contextual, PlaceClass::Interface}) {
    if (to_string(c) == s) return c;
  }
  return std::nullopt;
}

std::optional<TransClass> trans_class_from(std::string_view s) {
  for (auto c : {TransClass::Process, TransClass::Interaction, TransClass::ExternalInteraction}) {
    if (to_string(c) == s) return c;
  }
  return std::nullopt;
}

// ---- guard -----------------------------------------------------------------

Guard Guard::conj(Guard a, Guard b) {
  if (a.is_true()) return b;
  if (b.is_true()) return a;
  Guard g;
  g.op_ = Op::And;
  g.children_ = {std::move(a), std::move(b)};
  return g;
}

Guard Guard::disj(Guard a, Guard b) {
  Guard g;
  g.op_ = Op::Or;
  g.children_ = {std::move(a), std::move(b)};
  return g;
}

Guard Guard::negate(Guard a) {
  Guard g;
  g.op_ = Op::Not;
  g.children_ = {std::move(a)};
  return g;
}

std::set<Symbol> Guard::variables() const {
  std::set<Symbol> out;
  if (op_ == Op::Eq || op_ == Op::Neq) {
    if (lhs_.is_var) out.insert(lhs_.sym);
    if (rhs_.is_var) out.insert(rhs_.sym);
  }
  for (const auto& c : children_) {
    auto sub = c.variables();
    out.insert(sub.begin(), sub.end());
  }
  return out;
}

// ---- transition ------------------------------------------------------------

namespace {

void collect_vars(const ArcExpr& e, std::set<Symbol>& out) {
  for (const auto& [tt, n] : e) {
    for (const auto& term : tt) {
      if (term.is_var) out.insert(term.sym);
    }
  }
}

void insert_sorted(std::vector<Arc>& arcs, Arc arc, const std::string& tname) {
  auto it = std::lower_bound(arcs.begin(), arcs.end(), arc.node,
                             [](const Arc& a, Symbol n) { return a.node < n; });
  if (it != arcs.end() && it->node == arc.node) {
    if (*it == arc) return;
    throw Error(ErrorCode::InvalidNet,
                "conflicting arc expressions between " + arc.node.name() + " and " + tname);
  }
  arcs.insert(it, std::move(arc));
}

}  // namespace

std::set<Symbol> Transition::input_variables() const {
  std::set<Symbol> out;
  for (const auto& a : inputs) {
    if (a.is_virtual) out.insert(a.node);
    collect_vars(a.expr, out);
  }
  return out;
}

std::set<Symbol> Transition::variables() const {
  std::set<Symbol> out = input_variables();
  for (const auto& a : outputs) {
    if (a.is_virtual) out.insert(a.node);
    collect_vars(a.expr, out);
  }
  auto g = guard.variables();
  out.insert(g.begin(), g.end());
  auto r = rule.condition.variables();
  out.insert(r.begin(), r.end());
  for (const auto& act : rule.actions) out.insert(act.variable);
  return out;
}

// ---- binding ---------------------------------------------------------------

Binding Binding::from_pairs(const std::vector<std::pair<Symbol, Symbol>>& pairs) {
  Binding b;
  for (const auto& [v, c] : pairs) {
    if (!b.bind(v, c)) {
      throw Error(ErrorCode::InvalidTrace, "variable " + v.name() + " bound to both " +
                                               b.get(v)->name() + " and " + c.name());
    }
  }
  return b;
}

bool Binding::bind(Symbol v, Symbol c) {
  auto [it, inserted] = map_.emplace(v, c);
  return inserted || it->second == c;
}

std::optional<Symbol> Binding::get(Symbol v) const {
  auto it = map_.find(v);
  if (it == map_.end()) return std::nullopt;
  return it->second;
}

Symbol Binding::resolve(const Term& t) const {
  if (!t.is_var) return t.sym;
  auto it = map_.find(t.sym);
  if (it == map_.end()) throw Error(ErrorCode::UnboundVariable, t.sym.name());
  return it->second;
}

Tuple Binding::instantiate(const TermTuple& tt) const {
  Tuple out;
  out.reserve(tt.size());
  for (const auto& term : tt) out.push_back(resolve(term));
  return out;
}

Tokens Binding::instantiate(const ArcExpr& e) const {
  Tokens out;
  for (const auto& [tt, n] : e) out.add(instantiate(tt), n);
  return out;
}

std::string Binding::to_string() const {
  std::string s = "{";
  bool first = true;
  for (const auto& [v, c] : map_) {
    if (!first) s += ", ";
    first = false;
    s += v.name() + "->" + c.name();
  }
  return s + "}";
}

// ---- configuration ---------------------------------------------------------

const Tokens& Configuration::tokens(Symbol p) const {
  static const Tokens kEmpty;
  auto it = marking.find(p);
  return it == marking.end() ? kEmpty : it->second;
}

void Configuration::set_tokens(Symbol p, Tokens t) {
  if (t.empty()) {
    marking.erase(p);
  } else {
    marking[p] = std::move(t);
  }
}

bool Configuration::linked(Symbol v, Symbol c) const {
  auto it = gamma.find(v);
  return it != gamma.end() && it->second.count(c) != 0;
}

namespace {

inline void mix(std::size_t& seed, std::size_t v) {
  seed ^= v + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2);
}

// FNV-1a over names; independent of interning addresses.
struct Fnv {
  std::uint64_t h = 1469598103934665603ULL;
  void bytes(std::string_view s) {
    for (unsigned char c : s) {
      h ^= c;
      h *= 1099511628211ULL;
    }
    h ^= 0xff;
    h *= 1099511628211ULL;
  }
  void number(std::uint64_t n) { bytes(std::to_string(n)); }
};

}  // namespace

std::size_t ConfigurationHash::operator()(const Configuration& c) const noexcept {
  std::size_t seed = 0;
  for (const auto& [p, toks] : c.marking) {
    mix(seed, p.hash());
    for (const auto& [tup, n] : toks) {
      for (auto s : tup) mix(seed, s.hash());
      mix(seed, n);
    }
  }
  for (const auto& [p, a] : c.places) {
    mix(seed, p.hash());
    mix(seed, a);
  }
  for (const auto& [v, cs] : c.gamma) {
    mix(seed, v.hash());
    for (auto s : cs) mix(seed, s.hash());
  }
  return seed;
}

std::string digest(const Configuration& c) {
  Fnv f;
  for (const auto& [p, toks] : c.marking) {
    f.bytes(p.name());
    for (const auto& [tup, n] : toks) {
      for (auto s : tup) f.bytes(s.name());
      f.number(n);
    }
  }
  f.bytes("|");
  for (const auto& [p, a] : c.places) {
    f.bytes(p.name());
    f.number(a);
  }
  f.bytes("|");
  for (const auto& [v, cs] : c.gamma) {
    f.bytes(v.name());
    for (auto s : cs) f.bytes(s.name());
  }
  std::ostringstream os;
  os << std::hex << (f.h & 0xffffffffffffULL);
  return os.str();
}

// ---- net -------------------------------------------------------------------

void Net::declare_constant(Symbol c, std::optional<std::uint32_t> arity) {
  auto [it, inserted] = universe_.emplace(c, SymbolInfo{false, arity});
  if (!inserted) {
    if (it->second.is_var) {
      throw Error(ErrorCode::KindConflict, c.name() + " is already a variable");
    }
    if (arity) {
      if (it->second.arity && *it->second.arity != *arity) {
        throw Error(ErrorCode::KindConflict, c.name() + " declared with arities " +
                                                 std::to_string(*it->second.arity) + " and " +
                                                 std::to_string(*arity));
      }
      it->second.arity = arity;
    }
  }
}

void Net::declare_variable(Symbol v) {
  auto [it, inserted] = universe_.emplace(v, SymbolInfo{true, std::nullopt});
  if (!inserted && !it->second.is_var) {
    throw Error(ErrorCode::KindConflict, v.name() + " is already a constant");
  }
}

bool Net::is_variable(Symbol s) const {
  auto it = universe_.find(s);
  return it != universe_.end() && it->second.is_var;
}

bool Net::is_constant(Symbol s) const {
  auto it = universe_.find(s);
  return it != universe_.end() && !it->second.is_var;
}

std::set<Symbol> Net::variables() const {
  std::set<Symbol> out;
  for (const auto& [s, info] : universe_) {
    if (info.is_var) out.insert(s);
  }
  return out;
}

std::set<Symbol> Net::constants() const {
  std::set<Symbol> out;
  for (const auto& [s, info] : universe_) {
    if (!info.is_var) out.insert(s);
  }
  return out;
}

void Net::add_place(Symbol name, std::uint32_t arity, PlaceClass cls) {
  declare_constant(name, arity);
  auto [it, inserted] = places_.emplace(name, Place{name, arity, cls});
  if (!inserted) {
    if (it->second.arity != arity) {
      throw Error(ErrorCode::KindConflict, "place " + name.name() + " arity mismatch");
    }
    if (it->second.cls != cls) {
      throw Error(ErrorCode::ClassConflict, "place " + name.name() + " declared as " +
                                                std::string(to_string(it->second.cls)) +
                                                " and " + std::string(to_string(cls)));
    }
  }
}

TransitionId Net::add_transition(std::string name, Guard guard, LinkRule rule, TransClass cls) {
  if (find_transition(name)) {
    throw Error(ErrorCode::InvalidNet, "duplicate transition " + name);
  }
  transitions_.push_back(Transition{std::move(name), std::move(guard), std::move(rule), cls, {}, {}});
  return static_cast<TransitionId>(transitions_.size() - 1);
}

void Net::add_input(TransitionId t, Symbol node, ArcExpr e) {
  auto& tr = transitions_.at(t);
  insert_sorted(tr.inputs, Arc{node, is_variable(node), std::move(e)}, tr.name);
}

void Net::add_output(TransitionId t, Symbol node, ArcExpr e) {
  auto& tr = transitions_.at(t);
  insert_sorted(tr.outputs, Arc{node, is_variable(node), std::move(e)}, tr.name);
}

void Net::set_gamma(Symbol v, std::set<Symbol> consts) {
  if (consts.empty()) {
    gamma0_.erase(v);
  } else {
    gamma0_[v] = std::move(consts);
  }
}

void Net::set_initial(Symbol p, Tokens tokens) {
  if (tokens.empty()) {
    m0_.erase(p);
  } else {
    m0_[p] = std::move(tokens);
  }
}

const Place* Net::place(Symbol p) const {
  auto it = places_.find(p);
  return it == places_.end() ? nullptr : &it->second;
}

const Transition& Net::transition(TransitionId t) const {
  if (t >= transitions_.size()) {
    throw Error(ErrorCode::UnknownTransition, "#" + std::to_string(t));
  }
  return transitions_[t];
}

std::optional<TransitionId> Net::find_transition(std::string_view name) const {
  for (TransitionId i = 0; i < transitions_.size(); ++i) {
    if (transitions_[i].name == name) return i;
  }
  return std::nullopt;
}

Configuration Net::initial_configuration() const {
  Configuration c;
  for (const auto& [p, pl] : places_) c.places.emplace(p, pl.arity);
  for (const auto& [p, toks] : m0_) c.set_tokens(p, toks);
  c.gamma = gamma0_;
  return c;
}

TermTuple tuple(std::initializer_list<Term> terms) { return TermTuple(terms); }

ArcExpr expr(std::initializer_list<TermTuple> tuples) {
  ArcExpr e;
  for (const auto& t : tuples) e.add(t);
  return e;
}

Tuple token(std::initializer_list<Symbol> elems) { return Tuple(elems); }

}  // namespace vpn
