#pragma once

#include <functional>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "vpn/kernel.hpp"
#include "vpn/net.hpp"
#include "vpn/state_space.hpp"

namespace vpn {

/// A component: a net whose nodes carry place/transition classes, plus the
/// final places that mark the component as finished (any one suffices).
struct ComponentNet {
  std::string name;
  Net net;
  std::set<Symbol> finals;
};

/// Interface places and interaction transitions linking components.
/// `references` names component transitions the structure uses (internal
/// interaction transitions); transitions owned by the fragment itself are
/// external interaction transitions.
struct InteractionStructureNet {
  std::string name;
  Net net;
  std::vector<std::string> references;
};

struct MultiComponentNet {
  std::vector<ComponentNet> components;
  std::vector<InteractionStructureNet> interactions;
  std::set<Symbol> interface_variables;
  Net fused;

  /// True when every component has at least one of its final places marked.
  bool is_final(const Configuration& c) const;
  /// All declared final places of all components.
  std::set<Symbol> final_places() const;
};

/// Classification rules of a component: at least one initial (marked) and one
/// final place of class InitialFinal; every interaction transition touches a
/// virtual place or an interface place.
ValidationReport check_component(const ComponentNet& cn);
ValidationReport check_interaction_structure(const InteractionStructureNet& isn);

/// Adds every element of `part` to `into`, identifying same-named nodes.
/// Throws KindConflict / ClassConflict when shared names disagree.
void unite(Net& into, const Net& part);

/// Componentwise union. Throws KindConflict, ClassConflict, MissingTransition
/// (unresolved ISN reference) or InvalidNet (classification failure).
MultiComponentNet compose_mcn(std::vector<ComponentNet> cns,
                              std::vector<InteractionStructureNet> isns,
                              std::set<Symbol> interface_variables = {});

/// Sub-net over the given places and transitions, with every arc of those
/// transitions. Adjacent places are declared too unless `adjacent` is false.
/// The universe and interface set are carried whole.
Net restrict_net(const Net& net, const std::set<Symbol>& places,
                 const std::set<std::string>& transitions, bool adjacent = true);

/// Order-insensitive structural equality (transitions compared by name).
bool structurally_equal(const Net& a, const Net& b);

struct AsyncMergeSpec {
  std::string t1;          // producer in n1
  std::string t2;          // consumer in n2
  Symbol buffer_out;       // S1: fresh place, only input t1
  Symbol buffer_in;        // S2: fresh place, only output t2
  std::uint32_t buffer_arity = 1;
  std::string bridge;      // t: S1 -> t -> S2
  Guard guard1;            // phi1(t)
  Guard guard2;            // phi2(t)
  ArcExpr produce;         // W(t1, S1)
  ArcExpr take;            // W(S1, t)
  ArcExpr give;            // W(t, S2)
  ArcExpr consume;         // W(S2, t2)
};

struct SyncArc {
  Symbol place;
  ArcExpr expr;
};

struct SyncMergeSpec {
  std::string transition;  // the shared transition t, new in the fused net
  Guard guard1;
  Guard guard2;
  std::vector<SyncArc> inputs1;   // e1: from places of n1
  std::vector<SyncArc> inputs2;   // e2: from places of n2
  std::vector<SyncArc> outputs1;
  std::vector<SyncArc> outputs2;
};

struct SharedPlaceSpec {
  Symbol shared;   // the common virtual place S
  std::string t1;  // n1: t1 -> S (request)
  std::string t2;  // n1: S -> t2 (response received)
  std::string t3;  // n2: S -> t3 (request received)
  std::string t4;  // n2: t4 -> S (response)
};

/// Errors: SharedPlace, SharedTransition, MissingTransition.
Net merge_async(const Net& n1, const Net& n2, const AsyncMergeSpec& spec);
Net merge_sync(const Net& n1, const Net& n2, const SyncMergeSpec& spec);
/// Errors: SharedTransition, MissingTransition.
Net merge_shared_virtual(const Net& n1, const Net& n2, const SharedPlaceSpec& spec);

enum class Liveness { Live, NotLive, Unknown };
std::string_view to_string(Liveness l);

struct LivenessResult {
  Liveness verdict = Liveness::Unknown;
  std::optional<TransitionId> dead_transition;  // witness for NotLive
  Trace witness;                                // path to the witness node
};

/// Over the bounded configuration graph: Live if from every node every
/// transition can fire again on some continuation. Nodes accepted by
/// `is_final` are exempt. Unknown when truncation prevents a verdict.
LivenessResult check_liveness(const Net& net, const ExplorationBounds& bounds = {},
                              const std::function<bool(const Configuration&)>& is_final = {});

}  // namespace vpn
