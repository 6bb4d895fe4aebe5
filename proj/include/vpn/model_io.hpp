#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "vpn/composition.hpp"
#include "vpn/net.hpp"

namespace vpn {

struct Diagnostic {
  std::size_t line = 0;    // 1-based; 0 when not tied to a line
  std::size_t column = 0;  // 1-based
  std::string message;

  std::string to_string() const;
};

/// Named subset of nodes (a component or an interaction structure).
struct NodeGroup {
  std::string name;
  std::set<Symbol> places;
  std::set<std::string> transitions;
  friend bool operator==(const NodeGroup&, const NodeGroup&) = default;
};

struct ModelDocument {
  Net net;
  std::vector<NodeGroup> components;
  std::vector<NodeGroup> isns;
  std::map<std::string, std::set<Symbol>> finals;  // component -> final places
  std::set<Symbol> interface_variables;
};

struct ParseResult {
  std::optional<ModelDocument> document;  // set iff diagnostics is empty
  std::vector<Diagnostic> diagnostics;
  bool ok() const { return document.has_value(); }
};

ParseResult parse_model(std::string_view text);
/// Throws Error{ParseError} carrying the first diagnostic.
ModelDocument parse_model_or_throw(std::string_view text);
ModelDocument load_model_file(const std::string& path);

std::string serialize_model(const ModelDocument& doc);
std::string serialize_model(const Net& net);

/// Guard sublanguage: `x = y`, `x != y`, `and`, `or`, `not`, parentheses, `true`.
/// Identifiers resolve against the net's universe. Throws Error{ParseError}.
Guard parse_guard(std::string_view text, const Net& net);
/// `{}` or `[k*]<t,...> + ...`. Throws Error{ParseError}.
ArcExpr parse_arc_expr(std::string_view text, const Net& net);

std::string format_guard(const Guard& g);
std::string format_tuple(const Tuple& t);
std::string format_term_tuple(const TermTuple& t);
std::string format_expr(const ArcExpr& e);
std::string format_tokens(const Tokens& t);

/// Splits the document into components and interaction structures and
/// composes them. Without component groups the net is taken whole.
/// Throws MissingFinalPlaces when a component has no final place, InvalidNet
/// when the groups do not cover the net, and composition errors.
MultiComponentNet to_mcn(const ModelDocument& doc);

}  // namespace vpn
