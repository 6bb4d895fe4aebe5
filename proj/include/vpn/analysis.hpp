#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "vpn/composition.hpp"
#include "vpn/state_space.hpp"

namespace vpn {

inline constexpr int kReportSchemaVersion = 1;

enum class Verdict {
  Holds,
  Fails,
  HoldsWithinBound,  // no violation in the explored part of a truncated tree
  Inconclusive,      // truncated, and the missing part could decide either way
  Vacuous,           // prerequisites absent (no components / interface set)
};
std::string_view to_string(Verdict v);

enum class FinalMode {
  Simultaneous,  // one configuration finishes every component
  PerComponent,  // each component finishes in some configuration
};

struct AnalysisOptions {
  FinalMode final_mode = FinalMode::Simultaneous;
};

struct ConnectivityResult {
  Verdict verdict = Verdict::Fails;
  std::string reason;
  std::map<Symbol, std::set<Symbol>> mapping_sets;
  std::map<Symbol, Trace> witnesses;  // a path whose last step binds the variable
};

struct UsabilityWitness {
  Link link;
  TransitionId transition = 0;
  Binding binding;
  Trace path;  // ends with the firing that uses the link
};

struct SoundnessResult {
  Verdict verdict = Verdict::Fails;
  int failed_step = 0;  // 1..5, 0 when sound
  std::string reason;
  Trace final_witness;                   // step 1
  LinkSet links;                         // step 2
  std::set<Symbol> actual_interfaces;    // step 3
  std::set<Symbol> declared_interfaces;
  std::vector<UsabilityWitness> usability;  // step 4
  Trace counterexample;
};

struct ValidityResult {
  Verdict verdict = Verdict::Fails;
  int failed_clause = 0;  // 1..3, 0 when valid
  std::string reason;
  std::size_t replayed_edges = 0;
  std::set<Symbol> interface_places;
  Trace counterexample;
};

/// Holds iff every declared interface variable has a non-empty mapping set.
/// Throws Error{NoInterfaceDeclared}.
ConnectivityResult analyze_connectivity(const MultiComponentNet& mcn, const ConfigTree& ct);

/// Five-step interaction soundness check over the tree. Links are observed on
/// the interface variables (all variables when none is declared).
/// Throws Error{MissingFinalPlaces}, Error{MissingInterfaceSet}.
SoundnessResult analyze_soundness(const MultiComponentNet& mcn, const ConfigTree& ct,
                                  const std::set<Symbol>& interfaces,
                                  const AnalysisOptions& opts = {});

/// Data validity: edge replay, non-repeatable sends, no stranded interface data.
ValidityResult analyze_validity(const MultiComponentNet& mcn, const ConfigTree& ct,
                                const AnalysisOptions& opts = {});

struct AnalysisReport {
  std::optional<ConnectivityResult> connectivity;
  std::optional<SoundnessResult> soundness;
  std::optional<ValidityResult> validity;
  bool truncated = false;
  std::size_t tree_nodes = 0;
  std::size_t graph_nodes = 0;
  std::size_t complete_paths = 0;

  std::string to_text(const Net& net) const;
  std::string to_json(const Net& net) const;
  /// 0 all hold, 1 some property fails, 3 inconclusive under truncation.
  int exit_code() const;
};

struct PropertySelection {
  bool connectivity = true;
  bool soundness = true;
  bool validity = true;
};

/// Builds the tree once and runs the selected analyses over it. Missing
/// prerequisites give Vacuous (soundness) or Fails (connectivity) instead of
/// throwing.
AnalysisReport full_report(const MultiComponentNet& mcn, const ExplorationBounds& bounds = {},
                           const AnalysisOptions& opts = {}, PropertySelection which = {});

/// Configurations accepted as final under the given mode.
bool is_final_configuration(const MultiComponentNet& mcn, const Configuration& c, FinalMode mode);

std::string format_trace(const Net& net, const Trace& trace);

}  // namespace vpn
