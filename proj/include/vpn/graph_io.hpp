#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "vpn/net.hpp"
#include "vpn/state_space.hpp"

namespace vpn {

inline constexpr int kGraphSchemaVersion = 1;

enum class GraphFormat { Dot, Json };

/// DOT: nodes labelled with configuration digests, edges "t [binding]".
/// JSON: full configurations, node ids as in the tree/graph.
std::string export_graph(const Net& net, const ConfigTree& ct, GraphFormat format);
std::string export_graph(const Net& net, const ConfigGraph& cg, GraphFormat format);

/// Inverse of the JSON export. Transition ids are positions in the exported
/// "transitions" array. Throws Error{ParseError}.
ConfigTree tree_from_json(std::string_view text);
ConfigGraph graph_from_json(std::string_view text);

/// Transition names recorded in an exported JSON document.
std::vector<std::string> transitions_from_json(std::string_view text);

}  // namespace vpn
