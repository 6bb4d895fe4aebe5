#include "vpn/graph_io.hpp"

#include <json.hpp>
#include <sstream>

#include "vpn/error.hpp"

namespace vpn {

using nlohmann::json;

namespace {

json tuple_json(const Tuple& t) {
  json a = json::array();
  for (auto s : t) a.push_back(s.name());
  return a;
}

json config_json(const Configuration& c) {
  json marking = json::object();
  for (const auto& [p, toks] : c.marking) {
    json entries = json::array();
    for (const auto& [tup, n] : toks) entries.push_back({{"token", tuple_json(tup)}, {"count", n}});
    marking[p.name()] = std::move(entries);
  }
  json places = json::object();
  for (const auto& [p, arity] : c.places) places[p.name()] = arity;
  json gamma = json::object();
  for (const auto& [v, cs] : c.gamma) {
    json a = json::array();
    for (auto s : cs) a.push_back(s.name());
    gamma[v.name()] = std::move(a);
  }
  return {{"marking", marking}, {"places", places}, {"gamma", gamma}};
}

Configuration config_from(const json& j) {
  Configuration c;
  for (const auto& [p, entries] : j.at("marking").items()) {
    Tokens toks;
    for (const auto& e : entries) {
      Tuple t;
      for (const auto& s : e.at("token")) t.push_back(Symbol::intern(s.get<std::string>()));
      toks.add(t, e.at("count").get<Tokens::Count>());
    }
    c.set_tokens(Symbol::intern(p), std::move(toks));
  }
  for (const auto& [p, arity] : j.at("places").items()) {
    c.places[Symbol::intern(p)] = arity.get<std::uint32_t>();
  }
  for (const auto& [v, cs] : j.at("gamma").items()) {
    std::set<Symbol> s;
    for (const auto& x : cs) s.insert(Symbol::intern(x.get<std::string>()));
    if (!s.empty()) c.gamma[Symbol::intern(v)] = std::move(s);
  }
  return c;
}

json binding_json(const Binding& b) {
  json o = json::object();
  for (const auto& [v, c] : b.map()) o[v.name()] = c.name();
  return o;
}

Binding binding_from(const json& j) {
  Binding b;
  for (const auto& [v, c] : j.items()) b.bind(Symbol::intern(v), Symbol::intern(c.get<std::string>()));
  return b;
}

json transitions_json(const Net& net) {
  json a = json::array();
  for (const auto& tr : net.transitions()) a.push_back(tr.name);
  return a;
}

json edges_json(const Net& net, const std::vector<Edge>& edges) {
  json a = json::array();
  for (const auto& e : edges) {
    a.push_back({{"from", e.from},
                 {"to", e.to},
                 {"transition", net.transition(e.transition).name},
                 {"binding", binding_json(e.binding)}});
  }
  return a;
}

std::vector<Edge> edges_from(const json& j) {
  std::vector<std::string> names = j.at("transitions").get<std::vector<std::string>>();
  std::vector<Edge> out;
  for (const auto& e : j.at("edges")) {
    auto name = e.at("transition").get<std::string>();
    auto it = std::find(names.begin(), names.end(), name);
    if (it == names.end()) throw Error(ErrorCode::ParseError, "unknown transition " + name);
    out.push_back(Edge{e.at("from").get<NodeId>(), e.at("to").get<NodeId>(),
                       static_cast<TransitionId>(it - names.begin()), binding_from(e.at("binding"))});
  }
  return out;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out;
}

std::string edge_label(const Net& net, const Edge& e) {
  std::string b;
  for (const auto& [v, c] : e.binding.map()) {
    if (!b.empty()) b += ",";
    b += v.name() + "=" + c.name();
  }
  return net.transition(e.transition).name + " [" + b + "]";
}

json parse_json(std::string_view text, std::string_view kind) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ParseError, e.what());
  }
  if (j.value("schema_version", 0) != kGraphSchemaVersion) {
    throw Error(ErrorCode::ParseError, "unsupported schema_version");
  }
  if (j.value("kind", "") != kind) throw Error(ErrorCode::ParseError, "expected kind " + std::string(kind));
  return j;
}

}  // namespace

std::string export_graph(const Net& net, const ConfigTree& ct, GraphFormat format) {
  if (format == GraphFormat::Dot) {
    std::ostringstream os;
    os << "digraph CT {\n  node [shape=box, fontname=\"monospace\"];\n";
    for (const auto& n : ct.nodes) {
      os << "  n" << n.id << " [label=\"" << n.id << "\\n" << digest(*n.config) << "\"";
      switch (n.status) {
        case NodeStatus::LeafDeadlock: os << ", peripheries=2"; break;
        case NodeStatus::LeafDuplicate: os << ", style=dotted"; break;
        case NodeStatus::LeafBound: os << ", style=dashed"; break;
        case NodeStatus::Interior: break;
      }
      os << "];\n";
    }
    for (const auto& e : ct.edges) {
      os << "  n" << e.from << " -> n" << e.to << " [label=\"" << escape(edge_label(net, e)) << "\"];\n";
    }
    os << "}\n";
    return os.str();
  }
  json nodes = json::array();
  for (const auto& n : ct.nodes) {
    json o = {{"id", n.id},
              {"status", std::string(to_string(n.status))},
              {"depth", n.depth},
              {"config", config_json(*n.config)}};
    o["parent"] = n.parent ? json(*n.parent) : json(nullptr);
    nodes.push_back(std::move(o));
  }
  json j = {{"schema_version", kGraphSchemaVersion},
            {"kind", "tree"},
            {"truncated", ct.truncated},
            {"complete_paths", ct.complete_path_ends().size()},
            {"transitions", transitions_json(net)},
            {"nodes", nodes},
            {"edges", edges_json(net, ct.edges)}};
  return j.dump(2) + "\n";
}

std::string export_graph(const Net& net, const ConfigGraph& cg, GraphFormat format) {
  const auto out = cg.out_edges();
  if (format == GraphFormat::Dot) {
    std::ostringstream os;
    os << "digraph CG {\n  node [shape=box, fontname=\"monospace\"];\n";
    for (NodeId i = 0; i < cg.nodes.size(); ++i) {
      os << "  n" << i << " [label=\"" << i << "\\n" << digest(*cg.nodes[i]) << "\"";
      if (!cg.expanded[i]) {
        os << ", style=dashed";
      } else if (out[i].empty()) {
        os << ", peripheries=2";
      }
      os << "];\n";
    }
    for (const auto& e : cg.edges) {
      os << "  n" << e.from << " -> n" << e.to << " [label=\"" << escape(edge_label(net, e)) << "\"];\n";
    }
    os << "}\n";
    return os.str();
  }
  json nodes = json::array();
  std::size_t terminal = 0;
  for (NodeId i = 0; i < cg.nodes.size(); ++i) {
    if (cg.expanded[i] && out[i].empty()) ++terminal;
    nodes.push_back({{"id", i}, {"expanded", static_cast<bool>(cg.expanded[i])}, {"config", config_json(*cg.nodes[i])}});
  }
  json j = {{"schema_version", kGraphSchemaVersion},
            {"kind", "graph"},
            {"truncated", cg.truncated},
            {"complete_paths", terminal},
            {"transitions", transitions_json(net)},
            {"tree_to_graph", cg.tree_to_graph},
            {"nodes", nodes},
            {"edges", edges_json(net, cg.edges)}};
  return j.dump(2) + "\n";
}

ConfigTree tree_from_json(std::string_view text) {
  json j = parse_json(text, "tree");
  try {
    ConfigTree ct;
    ct.truncated = j.at("truncated").get<bool>();
    for (const auto& n : j.at("nodes")) {
      TreeNode tn;
      tn.id = n.at("id").get<NodeId>();
      if (!n.at("parent").is_null()) tn.parent = n.at("parent").get<NodeId>();
      tn.depth = n.at("depth").get<std::size_t>();
      auto st = n.at("status").get<std::string>();
      for (auto s : {NodeStatus::Interior, NodeStatus::LeafDeadlock, NodeStatus::LeafDuplicate,
                     NodeStatus::LeafBound}) {
        if (to_string(s) == st) tn.status = s;
      }
      tn.config = std::make_shared<const Configuration>(config_from(n.at("config")));
      ct.nodes.push_back(std::move(tn));
    }
    ct.edges = edges_from(j);
    return ct;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ParseError, e.what());
  }
}

ConfigGraph graph_from_json(std::string_view text) {
  json j = parse_json(text, "graph");
  try {
    ConfigGraph cg;
    cg.truncated = j.at("truncated").get<bool>();
    cg.tree_to_graph = j.at("tree_to_graph").get<std::vector<NodeId>>();
    for (const auto& n : j.at("nodes")) {
      cg.nodes.push_back(std::make_shared<const Configuration>(config_from(n.at("config"))));
      cg.expanded.push_back(n.at("expanded").get<bool>());
    }
    cg.edges = edges_from(j);
    return cg;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ParseError, e.what());
  }
}

std::vector<std::string> transitions_from_json(std::string_view text) {
  try {
    return json::parse(text).at("transitions").get<std::vector<std::string>>();
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ParseError, e.what());
  }
}

}  // namespace vpn
