#pragma once

// Small hand-built nets for the merge operators and liveness checks.

#include <string_view>

#include "vpn/composition.hpp"

namespace toys {

vpn::Net net_from(std::string_view model);

/// One-place self loop `a1` on A1 (plus an optional dead transition `d1`
/// waiting on the empty place D).
vpn::Net cycle(std::string_view prefix, bool with_dead = false);

/// Asynchronous merge of cycle("a") and cycle("b") through buffers S1, S2.
vpn::Net async_merge(bool dead_in_n1);
vpn::ExplorationBounds replenished_buffers();

/// Synchronous merge over data places X1, X2; `shared_variable` makes both
/// sides consume <x> instead of <x> and <y>.
vpn::Net sync_merge(bool shared_variable);

/// Request/response over a shared virtual place S linked to Q. `accept`
/// controls whether the responder guard admits the request; `linked`
/// whether gamma(S) contains Q at all.
vpn::Net request_response(bool accept, bool linked);

}  // namespace toys
