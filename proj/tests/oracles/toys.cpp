#include "toys.hpp"

#include <string>

#include "vpn/model_io.hpp"

namespace toys {

using namespace vpn;

Net net_from(std::string_view model) { return parse_model_or_throw(model).net; }

Net cycle(std::string_view prefix, bool with_dead) {
  // place <prefix>_p, transition <prefix>1
  const std::string p = std::string(prefix) + "_p";
  const std::string t = std::string(prefix) + "1";
  std::string m = "universe\n  constants eps\nplaces\n  " + p + " 1 initial_final\n";
  if (with_dead) m += "  D 1 process\n";
  m += "transitions\n  " + t + " process\n";
  if (with_dead) m += "  d1 process\n";
  m += "arcs\n  " + p + " -> " + t + " : <eps>\n  " + t + " -> " + p + " : <eps>\n";
  if (with_dead) m += "  D -> d1 : <eps>\n  d1 -> D : <eps>\n";
  m += "marking\n  " + p + " = <eps>\n";
  return net_from(m);
}

namespace {

ArcExpr black() { return expr({tuple({Term::constant(epsilon())})}); }

}  // namespace

Net async_merge(bool dead_in_n1) {
  AsyncMergeSpec spec;
  spec.t1 = "a1";
  spec.t2 = "b1";
  spec.buffer_out = "S1"_sym;
  spec.buffer_in = "S2"_sym;
  spec.bridge = "t";
  spec.produce = spec.take = spec.give = spec.consume = black();
  return merge_async(cycle("a", dead_in_n1), cycle("b"), spec);
}

ExplorationBounds replenished_buffers() {
  ExplorationBounds b;
  b.max_configs = 2'000;
  b.replenished = {"S1"_sym, "S2"_sym};
  return b;
}

Net sync_merge(bool shared_variable) {
  const Net n1 = net_from(
      "universe\n  constants eps k1\n  variables x\n"
      "places\n  a_p 1 initial_final\n  X1 1 data\n"
      "transitions\n  a1 process\n"
      "arcs\n  a_p -> a1 : <eps>\n  a1 -> a_p : <eps>\n"
      "marking\n  a_p = <eps>\n  X1 = <k1>\n");
  const Net n2 = net_from(
      "universe\n  constants eps k2\n  variables y\n"
      "places\n  b_p 1 initial_final\n  X2 1 data\n"
      "transitions\n  b1 process\n"
      "arcs\n  b_p -> b1 : <eps>\n  b1 -> b_p : <eps>\n"
      "marking\n  b_p = <eps>\n  X2 = <k2>\n");
  const Symbol x = "x"_sym;
  const Symbol y = shared_variable ? x : "y"_sym;
  const ArcExpr ex = expr({tuple({Term::variable(x)})});
  const ArcExpr ey = expr({tuple({Term::variable(y)})});
  SyncMergeSpec spec;
  spec.transition = "t";
  spec.inputs1 = {{"X1"_sym, ex}};
  spec.inputs2 = {{"X2"_sym, ey}};
  spec.outputs1 = {{"X1"_sym, ex}};
  spec.outputs2 = {{"X2"_sym, ey}};
  return merge_sync(n1, n2, spec);
}

Net request_response(bool accept, bool linked) {
  const std::string gamma = linked ? "gamma\n  S = {Q}\n" : "";
  const Net n1 = net_from(
      "universe\n  constants eps req res\n  variables S M\n"
      "places\n  R0 1 initial_final\n  R1 1 process\n  Q 1 interface\n"
      "transitions\n  t1 interaction\n  t2 interaction\n"
      "arcs\n  R0 -> t1 : <eps>\n  S -> t1 : {}\n  t1 -> R1 : <eps>\n  t1 -> S : <req>\n"
      "  R1 -> t2 : <eps>\n  S -> t2 : <res>\n  t2 -> R0 : <eps>\n"
      "marking\n  R0 = <eps>\n" + gamma);
  const std::string guard = accept ? "M = req" : "M = res";
  const Net n2 = net_from(
      "universe\n  constants eps req res\n  variables S M\n"
      "places\n  W0 1 initial_final\n  W1 1 process\n  Q 1 interface\n"
      "transitions\n  t3 interaction guard " + guard + "\n  t4 interaction\n"
      "arcs\n  W0 -> t3 : <eps>\n  S -> t3 : <M>\n  t3 -> W1 : <eps>\n"
      "  W1 -> t4 : <eps>\n  S -> t4 : {}\n  t4 -> W0 : <eps>\n  t4 -> S : <res>\n"
      "marking\n  W0 = <eps>\n" + gamma);
  return merge_shared_virtual(n1, n2, {"S"_sym, "t1", "t2", "t3", "t4"});
}

}  // namespace toys
