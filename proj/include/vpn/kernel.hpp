#pragma once

#include <string>
#include <utility>
#include <vector>

#include "vpn/net.hpp"

namespace vpn {

struct Violation {
  std::string rule;     // short rule tag, e.g. "variable symmetry"
  std::string message;  // human-readable detail
};

using ValidationReport = std::vector<Violation>;

/// Structural well-formedness of a net. An empty report means valid.
ValidationReport validate_net(const Net& net);

/// Throws Error{UnboundVariable} when a guard variable is missing from b.
bool eval_guard(const Guard& g, const Binding& b);

/// All bindings (total over the transition's variables) under which t is
/// enabled at cfg. Sorted, without duplicates.
std::vector<Binding> enabled_bindings(const Net& net, TransitionId t, const Configuration& cfg);

/// Re-checks every enabledness clause for one candidate binding.
bool is_enabled(const Net& net, TransitionId t, const Binding& b, const Configuration& cfg);

/// Fires t under b. Throws Error{NotEnabled} if b is not an enabling binding.
Configuration fire(const Net& net, TransitionId t, const Binding& b, const Configuration& cfg);

using Step = std::pair<TransitionId, Binding>;
using Trace = std::vector<Step>;

/// Replays trace from the initial configuration and checks that every firing
/// instantiates each formal parameter with exactly one constant. Throws
/// Error{InvalidTrace} if a step is not fireable.
bool check_data_sync(const Net& net, const Trace& trace);

}  // namespace vpn
