// vpnc: command-line front end for VPN models.
//
// Exit codes: 0 success / property holds, 1 property fails, 2 usage or
// parse error, 3 truncated exploration with an inconclusive verdict.

#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <sstream>

#include "vpn/analysis.hpp"
#include "vpn/composition.hpp"
#include "vpn/error.hpp"
#include "vpn/fixtures.hpp"
#include "vpn/graph_io.hpp"
#include "vpn/model_io.hpp"

namespace {

using namespace vpn;
using nlohmann::json;

constexpr int kOk = 0;
constexpr int kFails = 1;
constexpr int kUsage = 2;

struct BoundsArgs {
  std::size_t max_configs = 100'000;
  std::size_t max_depth = 200;
  std::string dedup = "global";
  std::vector<std::string> replenish;

  void attach(CLI::App* app) {
    app->add_option("--max-configs", max_configs, "Configuration budget")->check(CLI::PositiveNumber);
    app->add_option("--max-depth", max_depth, "Depth budget")->check(CLI::PositiveNumber);
    app->add_option("--dedup", dedup, "Duplicate detection")->check(CLI::IsMember({"global", "path"}));
    app->add_option("--replenish", replenish, "Places whose tokens never run out");
  }

  ExplorationBounds get() const {
    ExplorationBounds b;
    b.max_configs = max_configs;
    b.max_depth = max_depth;
    b.dedup = dedup == "path" ? DedupMode::Path : DedupMode::Global;
    for (const auto& p : replenish) b.replenished.insert(Symbol::intern(p));
    return b;
  }
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::ParseError, "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_output(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::ParseError, "cannot write " + path);
  out << text;
}

// Parses a model file, printing every diagnostic. Returns nullopt on failure.
std::optional<ModelDocument> load(const std::string& path) {
  auto r = parse_model(read_file(path));
  if (!r.ok()) {
    for (const auto& d : r.diagnostics) std::cerr << path << ":" << d.to_string() << "\n";
    return std::nullopt;
  }
  return std::move(*r.document);
}

int cmd_validate(const std::string& path) {
  auto doc = load(path);
  if (!doc) return kUsage;
  int rc = kOk;
  for (const auto& v : validate_net(doc->net)) {
    std::cout << "violation [" << v.rule << "] " << v.message << "\n";
    rc = kFails;
  }
  try {
    to_mcn(*doc);
  } catch (const Error& e) {
    std::cout << "composition: " << to_string(e.code()) << ": " << e.what() << "\n";
    rc = kFails;
  }
  if (rc == kOk) {
    std::cout << "ok: " << doc->net.places().size() << " places, " << doc->net.transitions().size()
              << " transitions, " << doc->components.size() << " components\n";
  }
  return rc;
}

int cmd_explore(const std::string& path, const BoundsArgs& bounds, const std::string& out, std::string format,
                bool graph) {
  auto doc = load(path);
  if (!doc) return kUsage;
  if (format.empty()) format = out.size() >= 4 && out.substr(out.size() - 4) == ".dot" ? "dot" : "json";
  const GraphFormat f = format == "dot" ? GraphFormat::Dot : GraphFormat::Json;
  const ConfigTree ct = build_ct(doc->net, bounds.get());
  std::string text;
  if (graph) {
    text = export_graph(doc->net, ct_to_cg(ct), f);
  } else {
    text = export_graph(doc->net, ct, f);
  }
  if (!out.empty()) write_output(out, text);
  std::ostream& info = out.empty() ? std::cerr : std::cout;
  info << "tree nodes: " << ct.nodes.size() << ", configurations: " << ct_to_cg(ct).nodes.size()
       << ", complete paths: " << ct.complete_path_ends().size() << (ct.truncated ? " (truncated)" : "") << "\n";
  if (out.empty()) std::cout << text;
  return kOk;
}

int cmd_analyze(const std::string& path, const std::string& property, const std::string& report,
                const BoundsArgs& bounds, const std::string& final_mode, const std::string& out) {
  auto doc = load(path);
  if (!doc) return kUsage;
  const MultiComponentNet mcn = to_mcn(*doc);
  PropertySelection which{property == "all" || property == "connectivity",
                          property == "all" || property == "soundness",
                          property == "all" || property == "validity"};
  AnalysisOptions opts;
  opts.final_mode = final_mode == "per-component" ? FinalMode::PerComponent : FinalMode::Simultaneous;
  if (property == "soundness") {
    if (mcn.final_places().empty()) throw Error(ErrorCode::MissingFinalPlaces, "model declares no final places");
    if (mcn.fused.interfaces().empty()) throw Error(ErrorCode::MissingInterfaceSet, "model declares no interface set");
  }
  if (property == "connectivity" && mcn.interface_variables.empty()) {
    throw Error(ErrorCode::NoInterfaceDeclared, "model declares no interface variable");
  }
  const AnalysisReport rep = full_report(mcn, bounds.get(), opts, which);
  write_output(out, report == "json" ? rep.to_json(mcn.fused) : rep.to_text(mcn.fused));
  return rep.exit_code();
}

void append_document(ModelDocument& into, const ModelDocument& part) {
  unite(into.net, part.net);
  into.components.insert(into.components.end(), part.components.begin(), part.components.end());
  into.isns.insert(into.isns.end(), part.isns.begin(), part.isns.end());
  for (const auto& [cn, ps] : part.finals) into.finals[cn].insert(ps.begin(), ps.end());
  into.interface_variables.insert(part.interface_variables.begin(), part.interface_variables.end());
}

int cmd_compose(const std::vector<std::string>& files, const std::string& out) {
  ModelDocument doc;
  for (const auto& f : files) {
    auto part = load(f);
    if (!part) return kUsage;
    append_document(doc, *part);
  }
  to_mcn(doc);
  write_output(out, serialize_model(doc));
  return kOk;
}

std::vector<SyncArc> sync_arcs(const json& j, const char* key, const Net& universe) {
  std::vector<SyncArc> out;
  if (!j.contains(key)) return out;
  for (const auto& a : j.at(key)) {
    out.push_back({Symbol::intern(a.at("place").get<std::string>()),
                   parse_arc_expr(a.at("expr").get<std::string>(), universe)});
  }
  return out;
}

Guard guard_field(const json& j, const char* key, const Net& universe) {
  return j.contains(key) ? parse_guard(j.at(key).get<std::string>(), universe) : Guard::truth();
}

int cmd_merge(const std::string& a_path, const std::string& b_path, const std::string& spec_path,
              const std::string& out) {
  auto a = load(a_path);
  auto b = load(b_path);
  if (!a || !b) return kUsage;
  json spec;
  try {
    spec = json::parse(read_file(spec_path));
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ParseError, spec_path + ": " + e.what());
  }
  // Universe shared by both operands, for resolving expression text.
  Net universe;
  for (const Net* n : {&a->net, &b->net}) {
    for (const auto& [s, info] : n->universe()) {
      if (info.is_var) {
        universe.declare_variable(s);
      } else {
        universe.declare_constant(s, info.arity);
      }
    }
  }
  const std::string kind = spec.value("kind", "");
  ModelDocument merged;
  NodeGroup bridge{spec.value("group", std::string("MERGE")), {}, {}};
  try {
    if (kind == "async") {
      AsyncMergeSpec s;
      s.t1 = spec.at("t1").get<std::string>();
      s.t2 = spec.at("t2").get<std::string>();
      s.buffer_out = Symbol::intern(spec.at("buffer_out").get<std::string>());
      s.buffer_in = Symbol::intern(spec.at("buffer_in").get<std::string>());
      s.buffer_arity = spec.value("buffer_arity", 1u);
      s.bridge = spec.at("bridge").get<std::string>();
      universe.declare_constant(s.buffer_out, s.buffer_arity);
      universe.declare_constant(s.buffer_in, s.buffer_arity);
      s.guard1 = guard_field(spec, "guard1", universe);
      s.guard2 = guard_field(spec, "guard2", universe);
      s.produce = parse_arc_expr(spec.at("produce").get<std::string>(), universe);
      s.take = parse_arc_expr(spec.at("take").get<std::string>(), universe);
      s.give = parse_arc_expr(spec.at("give").get<std::string>(), universe);
      s.consume = parse_arc_expr(spec.at("consume").get<std::string>(), universe);
      merged.net = merge_async(a->net, b->net, s);
      bridge.places = {s.buffer_out, s.buffer_in};
      bridge.transitions = {s.bridge};
    } else if (kind == "sync") {
      SyncMergeSpec s;
      s.transition = spec.at("transition").get<std::string>();
      s.guard1 = guard_field(spec, "guard1", universe);
      s.guard2 = guard_field(spec, "guard2", universe);
      s.inputs1 = sync_arcs(spec, "inputs1", universe);
      s.inputs2 = sync_arcs(spec, "inputs2", universe);
      s.outputs1 = sync_arcs(spec, "outputs1", universe);
      s.outputs2 = sync_arcs(spec, "outputs2", universe);
      merged.net = merge_sync(a->net, b->net, s);
      bridge.transitions = {s.transition};
    } else if (kind == "shared") {
      SharedPlaceSpec s{Symbol::intern(spec.at("shared").get<std::string>()), spec.at("t1").get<std::string>(),
                        spec.at("t2").get<std::string>(), spec.at("t3").get<std::string>(),
                        spec.at("t4").get<std::string>()};
      merged.net = merge_shared_virtual(a->net, b->net, s);
    } else {
      std::cerr << spec_path << ": kind must be async, sync or shared\n";
      return kUsage;
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ParseError, spec_path + ": " + e.what());
  }
  ModelDocument groups;
  for (const auto* d : {&*a, &*b}) {
    groups.components.insert(groups.components.end(), d->components.begin(), d->components.end());
    groups.isns.insert(groups.isns.end(), d->isns.begin(), d->isns.end());
    for (const auto& [cn, ps] : d->finals) groups.finals[cn].insert(ps.begin(), ps.end());
    groups.interface_variables.insert(d->interface_variables.begin(), d->interface_variables.end());
  }
  merged.components = std::move(groups.components);
  merged.isns = std::move(groups.isns);
  merged.finals = std::move(groups.finals);
  merged.interface_variables = std::move(groups.interface_variables);
  if (!merged.components.empty() && (!bridge.places.empty() || !bridge.transitions.empty())) {
    merged.isns.push_back(std::move(bridge));
  }
  write_output(out, serialize_model(merged));
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Variable Petri net models: validation, exploration, analysis, composition"};
  app.require_subcommand(1);

  std::string file, out, format, property = "all", report = "text", final_mode = "simultaneous", spec;
  std::vector<std::string> files;
  bool graph = false, list = false;
  BoundsArgs bounds;

  auto* validate = app.add_subcommand("validate", "Parse a model and check its well-formedness");
  validate->add_option("file", file, "Model file")->required();

  auto* explore = app.add_subcommand("explore", "Build the configuration tree and export it");
  explore->add_option("file", file, "Model file")->required();
  explore->add_option("--out", out, "Output file (.json or .dot)");
  explore->add_option("--format", format, "Export format")->check(CLI::IsMember({"json", "dot"}));
  explore->add_flag("--graph", graph, "Export the configuration graph instead of the tree");
  bounds.attach(explore);

  auto* analyze = app.add_subcommand("analyze", "Check connectivity, soundness and validity");
  analyze->add_option("file", file, "Model file")->required();
  analyze->add_option("--property", property, "Property to check")
      ->check(CLI::IsMember({"connectivity", "soundness", "validity", "all"}));
  analyze->add_option("--report", report, "Report format")->check(CLI::IsMember({"text", "json"}));
  analyze->add_option("--final-mode", final_mode, "Reading of final configurations")
      ->check(CLI::IsMember({"simultaneous", "per-component"}));
  analyze->add_option("--out", out, "Report file (default stdout)");
  bounds.attach(analyze);

  auto* compose = app.add_subcommand("compose", "Union of several models");
  compose->add_option("files", files, "Model files")->required();
  compose->add_option("--out", out, "Output model")->required();

  auto* merge = app.add_subcommand("merge", "Merge two nets as described by a JSON spec");
  merge->add_option("files", files, "The two model files")->required()->expected(2);
  merge->add_option("--spec", spec, "Merge spec (JSON)")->required();
  merge->add_option("--out", out, "Output model")->required();

  auto* fixture_cmd = app.add_subcommand("fixture", "Print a built-in model");
  fixture_cmd->add_option("name", file, "Fixture name");
  fixture_cmd->add_flag("--list", list, "List fixture names");
  fixture_cmd->add_option("--out", out, "Output file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? kOk : kUsage;
  }

  try {
    if (*validate) return cmd_validate(file);
    if (*explore) return cmd_explore(file, bounds, out, format, graph);
    if (*analyze) return cmd_analyze(file, property, report, bounds, final_mode, out);
    if (*compose) return cmd_compose(files, out);
    if (*merge) return cmd_merge(files[0], files[1], spec, out);
    if (*fixture_cmd) {
      if (list || file.empty()) {
        for (const auto& n : fixture_names()) std::cout << n << "\n";
        return kOk;
      }
      write_output(out, std::string(fixture_text(file)));
      return kOk;
    }
  } catch (const Error& e) {
    std::cerr << "error: " << to_string(e.code()) << ": " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}
