#pragma once

// Random small VPNs plus a brute-force reference for enabledness and firing.
// Nothing here calls into the kernel's enabledness or firing code.

#include <random>
#include <set>
#include <vector>

#include "vpn/net.hpp"

namespace oracle {

struct RandomVpnOptions {
  int max_variables = 4;
  int max_constants = 5;  // places included
  int max_transitions = 3;
};

vpn::Net random_vpn(std::mt19937& rng, const RandomVpnOptions& opts = {});

/// Perturbs the initial configuration: random tokens, random gamma, and
/// sometimes a non-place constant promoted to a place.
vpn::Configuration random_configuration(const vpn::Net& net, std::mt19937& rng);

/// Every variable the transition mentions, collected directly from its parts.
std::set<vpn::Symbol> transition_vars(const vpn::Transition& t);

bool guard_holds(const vpn::Guard& g, const std::map<vpn::Symbol, vpn::Symbol>& beta);

/// Enumerates every assignment vars(t) -> C and keeps those that pass the
/// guard, the input clause (links, place existence, arity, aggregated token
/// demand) and the virtual-output clause.
std::set<vpn::Binding> brute_force_bindings(const vpn::Net& net, vpn::TransitionId t,
                                            const vpn::Configuration& cfg);

/// Expected successor, computed independently of the kernel.
vpn::Configuration expected_fire(const vpn::Net& net, vpn::TransitionId t, const vpn::Binding& b,
                                 const vpn::Configuration& cfg);

/// Places an arc of t touches under b (inputs and outputs).
std::set<vpn::Symbol> touched_places(const vpn::Transition& t, const vpn::Binding& b);

}  // namespace oracle
