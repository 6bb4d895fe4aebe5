#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "vpn/multiset.hpp"
#include "vpn/symbol.hpp"

namespace vpn {

/// Element of an arc or guard expression: a constant or a variable.
struct Term {
  Symbol sym;
  bool is_var = false;

  static Term constant(Symbol s) { return {s, false}; }
  static Term variable(Symbol s) { return {s, true}; }

  friend bool operator==(const Term&, const Term&) = default;
  friend auto operator<=>(const Term&, const Term&) = default;
};

using Tuple = std::vector<Symbol>;       // a token: constants only
using TermTuple = std::vector<Term>;     // an arc term: constants and variables
using Tokens = Multiset<Tuple>;
using ArcExpr = Multiset<TermTuple>;     // empty expression is the empty set

/// Relational guard over equality atoms.
class Guard {
 public:
  enum class Op { True, Eq, Neq, And, Or, Not };

  Guard() = default;  // true
  static Guard truth() { return Guard(); }
  static Guard eq(Term a, Term b) { return Guard(Op::Eq, a, b); }
  static Guard neq(Term a, Term b) { return Guard(Op::Neq, a, b); }
  static Guard conj(Guard a, Guard b);
  static Guard disj(Guard a, Guard b);
  static Guard negate(Guard a);

  Op op() const { return op_; }
  const Term& lhs() const { return lhs_; }
  const Term& rhs() const { return rhs_; }
  const std::vector<Guard>& children() const { return children_; }
  bool is_true() const { return op_ == Op::True; }

  /// Variables mentioned anywhere in the expression.
  std::set<Symbol> variables() const;

  friend bool operator==(const Guard&, const Guard&) = default;

 private:
  Guard(Op op, Term a, Term b) : op_(op), lhs_(a), rhs_(b) {}
  Op op_ = Op::True;
  Term lhs_{};
  Term rhs_{};
  std::vector<Guard> children_;
};

enum class LinkOp { Add, Remove };

struct LinkAction {
  Symbol variable;
  LinkOp op = LinkOp::Add;
  friend bool operator==(const LinkAction&, const LinkAction&) = default;
};

/// rho(t): when the condition holds under the firing binding, each action
/// adds/removes v[beta] to/from gamma(v). No actions = do-nothing rule.
struct LinkRule {
  Guard condition;
  std::vector<LinkAction> actions;
  bool empty() const { return actions.empty(); }
  friend bool operator==(const LinkRule&, const LinkRule&) = default;
};

enum class PlaceClass { InitialFinal, Process, Data, Contextual, Interface };
enum class TransClass { Process, Interaction, ExternalInteraction };

std::string_view to_string(PlaceClass c);
std::string_view to_string(TransClass c);
std::optional<PlaceClass> place_class_from(std::string_view s);
std::optional<TransClass> trans_class_from(std::string_view s);

struct Place {
  Symbol name;
  std::uint32_t arity = 1;
  PlaceClass cls = PlaceClass::Process;
  friend bool operator==(const Place&, const Place&) = default;
};

/// One adjacent arc of a transition. `node` is a place (constant) or a
/// virtual place (variable).
struct Arc {
  Symbol node;
  bool is_virtual = false;
  ArcExpr expr;
  friend bool operator==(const Arc&, const Arc&) = default;
};

using TransitionId = std::uint32_t;

struct Transition {
  std::string name;
  Guard guard;
  LinkRule rule;
  TransClass cls = TransClass::Process;
  std::vector<Arc> inputs;   // (p,t) and (v,t)
  std::vector<Arc> outputs;  // (t,p) and (t,v)

  /// Every variable the transition mentions (arcs, virtual places, guard, rule).
  std::set<Symbol> variables() const;
  /// Variables occurring on the input side (expressions or virtual pre-places).
  std::set<Symbol> input_variables() const;

  friend bool operator==(const Transition&, const Transition&) = default;
};

/// Partial map variable -> constant. One constant per variable by construction.
class Binding {
 public:
  Binding() = default;
  /// Throws Error{InvalidTrace} if a variable is mapped to two constants.
  static Binding from_pairs(const std::vector<std::pair<Symbol, Symbol>>& pairs);

  /// Returns false if v is already bound to a different constant.
  bool bind(Symbol v, Symbol c);
  std::optional<Symbol> get(Symbol v) const;
  bool contains(Symbol v) const { return map_.count(v) != 0; }
  void erase(Symbol v) { map_.erase(v); }
  std::size_t size() const { return map_.size(); }
  bool empty() const { return map_.empty(); }
  const std::map<Symbol, Symbol>& map() const { return map_; }

  /// Resolves a term: constants map to themselves, variables via the binding.
  /// Throws Error{UnboundVariable}.
  Symbol resolve(const Term& t) const;
  Tuple instantiate(const TermTuple& tt) const;
  Tokens instantiate(const ArcExpr& e) const;

  std::string to_string() const;

  friend bool operator==(const Binding&, const Binding&) = default;
  friend auto operator<=>(const Binding& a, const Binding& b) { return a.map_ <=> b.map_; }

 private:
  std::map<Symbol, Symbol> map_;
};

using Gamma = std::map<Symbol, std::set<Symbol>>;  // empty sets are not stored

/// Pi = (M, P', gamma'). Empty token bags and empty gamma entries are never
/// stored, so structural equality is plain member-wise equality.
struct Configuration {
  std::map<Symbol, Tokens> marking;
  std::map<Symbol, std::uint32_t> places;  // current place set with arities
  Gamma gamma;

  const Tokens& tokens(Symbol p) const;
  void set_tokens(Symbol p, Tokens t);
  bool has_place(Symbol p) const { return places.count(p) != 0; }
  bool linked(Symbol v, Symbol c) const;

  friend bool operator==(const Configuration&, const Configuration&) = default;
  friend auto operator<=>(const Configuration&, const Configuration&) = default;
};

struct ConfigurationHash {
  std::size_t operator()(const Configuration& c) const noexcept;
};

/// Stable short hex digest of a configuration (name-based, run-independent).
std::string digest(const Configuration& c);

/// The universe kinds: constants (optional arity when used as a place) and
/// variables.
struct SymbolInfo {
  bool is_var = false;
  std::optional<std::uint32_t> arity;
  friend bool operator==(const SymbolInfo&, const SymbolInfo&) = default;
};

/// The 8-tuple (P, T, F, gamma, W, phi, rho, M0) plus the interface set.
/// Arcs are stored on their transitions.
class Net {
 public:
  // Universe.
  void declare_constant(Symbol c, std::optional<std::uint32_t> arity = std::nullopt);
  void declare_variable(Symbol v);
  bool is_variable(Symbol s) const;
  bool is_constant(Symbol s) const;
  const std::map<Symbol, SymbolInfo>& universe() const { return universe_; }
  std::set<Symbol> variables() const;
  std::set<Symbol> constants() const;

  // Structure.
  void add_place(Symbol name, std::uint32_t arity, PlaceClass cls = PlaceClass::Process);
  TransitionId add_transition(std::string name, Guard guard = {}, LinkRule rule = {},
                              TransClass cls = TransClass::Process);
  /// node -> transition; node is a place or a declared variable.
  void add_input(TransitionId t, Symbol node, ArcExpr expr);
  /// transition -> node.
  void add_output(TransitionId t, Symbol node, ArcExpr expr);

  void set_gamma(Symbol v, std::set<Symbol> consts);
  void set_initial(Symbol p, Tokens tokens);
  void add_interface(Symbol c) { interfaces_.insert(c); }

  const std::map<Symbol, Place>& places() const { return places_; }
  const Place* place(Symbol p) const;
  const std::vector<Transition>& transitions() const { return transitions_; }
  Transition& transition_mut(TransitionId t) { return transitions_.at(t); }
  const Transition& transition(TransitionId t) const;
  std::optional<TransitionId> find_transition(std::string_view name) const;
  const Gamma& gamma0() const { return gamma0_; }
  const std::map<Symbol, Tokens>& m0() const { return m0_; }
  const std::set<Symbol>& interfaces() const { return interfaces_; }

  Configuration initial_configuration() const;

  friend bool operator==(const Net&, const Net&) = default;

 private:
  std::map<Symbol, SymbolInfo> universe_;
  std::map<Symbol, Place> places_;
  std::vector<Transition> transitions_;
  Gamma gamma0_;
  std::map<Symbol, Tokens> m0_;
  std::set<Symbol> interfaces_;
};

/// Convenience constructors for expressions.
TermTuple tuple(std::initializer_list<Term> terms);
ArcExpr expr(std::initializer_list<TermTuple> tuples);
Tuple token(std::initializer_list<Symbol> elems);

}  // namespace vpn
