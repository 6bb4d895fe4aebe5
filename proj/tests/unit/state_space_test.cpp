#include <gtest/gtest.h>

#include <random>

#include "oracles/classical_pn.hpp"
#include "vpn/error.hpp"
#include "vpn/fixtures.hpp"
#include "vpn/model_io.hpp"
#include "vpn/state_space.hpp"

using namespace vpn;

namespace {

Net parse(std::string_view text) { return parse_model_or_throw(text).net; }

// Two independent tokens: a diamond of interleavings.
constexpr const char* kDiamond = R"(
universe
  constants eps
places
  A 1 process
  B 1 process
  A2 1 process
  B2 1 process
transitions
  a process
  b process
arcs
  A -> a : <eps>
  a -> A2 : <eps>
  B -> b : <eps>
  b -> B2 : <eps>
marking
  A = <eps>
  B = <eps>
)";

// Link S to A, then swap it to B, then use it.
constexpr const char* kRelink = R"(
universe
  constants eps m
  variables S
places
  P0 1 process
  P1 1 process
  P2 1 process
  A 1 interface
  B 1 interface
  Ids 1 data
transitions
  drop interaction rho -S
  take interaction rho +S
  use interaction
arcs
  P0 -> drop : <eps>
  S -> drop : {}
  drop -> S : {}
  drop -> P1 : <eps>
  P1 -> take : <eps>
  Ids -> take : <S>
  take -> Ids : <S>
  take -> S : {}
  take -> P2 : <eps>
  P2 -> use : <eps>
  S -> use : {}
  use -> S : <m>
gamma
  S = {A}
marking
  P0 = <eps>
  Ids = <B>
)";

}  // namespace

TEST(ConfigTree, GlobalDedupMarksDuplicates) {
  const Net n = parse(kDiamond);
  const ConfigTree ct = build_ct(n);
  ASSERT_EQ(ct.nodes.size(), 5u);  // root, a, b, ab, ba(duplicate)
  int dup = 0, dead = 0;
  for (const auto& node : ct.nodes) {
    dup += node.status == NodeStatus::LeafDuplicate;
    dead += node.status == NodeStatus::LeafDeadlock;
  }
  EXPECT_EQ(dup, 1);
  EXPECT_EQ(dead, 1);
  EXPECT_EQ(ct.complete_path_ends().size(), 1u);
  EXPECT_EQ(ct_to_cg(ct).nodes.size(), 4u);
}

TEST(ConfigTree, PathDedupKeepsBothInterleavings) {
  ExplorationBounds b;
  b.dedup = DedupMode::Path;
  const ConfigTree ct = build_ct(parse(kDiamond), b);
  EXPECT_EQ(ct.nodes.size(), 5u);
  EXPECT_EQ(ct.complete_path_ends().size(), 2u);
  const ConfigGraph cg = ct_to_cg(ct);
  EXPECT_EQ(cg.nodes.size(), 4u);
  EXPECT_EQ(cg.edges.size(), 4u);
}

TEST(ConfigTree, EdgesReplayFromRoot) {
  const Net n = parse(kRelink);
  const ConfigTree ct = build_ct(n);
  for (NodeId i = 1; i < ct.nodes.size(); ++i) {
    Configuration c = n.initial_configuration();
    for (const auto& [t, b] : ct.path_to(i)) c = fire(n, t, b, c);
    EXPECT_EQ(c, *ct.nodes[i].config);
  }
}

TEST(ConfigTree, BoundsTruncate) {
  ExplorationBounds b;
  b.max_depth = 1;
  const ConfigTree ct = build_ct(parse(kDiamond), b);
  EXPECT_TRUE(ct.truncated);
  for (const auto& node : ct.nodes) {
    if (node.depth == 1) EXPECT_EQ(node.status, NodeStatus::LeafBound);
  }
  ExplorationBounds bad;
  bad.max_configs = 0;
  EXPECT_TRUE(bad.check().has_value());
}

TEST(ConfigTree, InvalidNetRejected) {
  Net n = parse(kDiamond);
  n.declare_variable("X"_sym);
  n.add_output(0, "B2"_sym, expr({tuple({Term::variable("X"_sym)})}));
  EXPECT_THROW(build_ct(n), Error);
}

TEST(ConfigTree, ClassicalNetsMatchInterpreterUnderPathDedup) {
  std::mt19937 rng(42);
  for (int i = 0; i < 30; ++i) {
    const auto cn = oracle::random_classical(rng, 4, 5);
    ExplorationBounds b;
    b.dedup = DedupMode::Path;
    b.max_depth = 1'000;
    const ConfigTree ct = build_ct(oracle::to_vpn(cn), b);
    ASSERT_FALSE(ct.truncated);
    std::set<oracle::Marking> seen;
    for (const auto& node : ct.nodes) seen.insert(oracle::from_configuration(*node.config, cn.places));
    EXPECT_EQ(seen, oracle::reachable(cn)) << "net " << i;
  }
}

TEST(StateSpace, ReachabilitySet) {
  const Net n = parse(kDiamond);
  const ConfigGraph cg = ct_to_cg(build_ct(n));
  EXPECT_EQ(reachability_set(cg, n.initial_configuration()).size(), 4u);
  Configuration other;
  EXPECT_THROW(reachability_set(cg, other), Error);
}

TEST(StateSpace, MappingSetAndBindingFunction) {
  const Net n = parse(kRelink);
  const ConfigTree ct = build_ct(n);
  EXPECT_EQ(mapping_set(n, ct, "S"_sym), (std::set<Symbol>{"A"_sym, "B"_sym}));
  EXPECT_THROW(mapping_set(n, ct, "Nope"_sym), Error);
  const auto use = *n.find_transition("use");
  const auto bf = binding_function(n, ct, use);
  ASSERT_EQ(bf.size(), 1u);
  EXPECT_EQ(*bf.begin()->get("S"_sym), "B"_sym);
  EXPECT_THROW(binding_function(n, ct, 99), Error);
}

TEST(StateSpace, LinkSetOfRelink) {
  const Net n = parse(kRelink);
  const ConfigTree ct = build_ct(n);
  const LinkSet ls = link_set(ct);
  const Link sa{"S"_sym, "A"_sym}, sb{"S"_sym, "B"_sym};
  EXPECT_EQ(ls.broken, (std::set<Link>{sa}));
  EXPECT_EQ(ls.created, (std::set<Link>{sb}));
  EXPECT_EQ(ls.sustained, (std::set<Link>{sb}));
  EXPECT_EQ(ls.constants(), (std::set<Symbol>{"A"_sym, "B"_sym}));
  EXPECT_TRUE(link_set(ct, {"Other"_sym}).created.empty());
  EXPECT_EQ(connectivity_set(ct).size(), 3u);  // {A}, {}, {B}
}

TEST(StateSpace, GammaDifference) {
  Gamma a{{"S"_sym, {"A"_sym}}}, b{{"S"_sym, {"A"_sym, "B"_sym}}};
  EXPECT_EQ(gamma_difference(b, a), (LinkDiff{{"S"_sym, "B"_sym}}));
  EXPECT_TRUE(gamma_difference(a, b).empty());
}

TEST(Languages, RootAnchoredSequences) {
  const Net n = parse(kDiamond);
  const ConfigTree ct = build_ct(n);
  const Languages l0 = languages(ct, 0);
  EXPECT_EQ(l0.control, (std::set<std::vector<TransitionId>>{{}}));
  const Languages l = languages(ct, 2);
  // the duplicate leaf still records the second interleaving
  EXPECT_TRUE(l.control.count({0, 1}));
  EXPECT_TRUE(l.control.count({1, 0}));
  EXPECT_TRUE(l.control.count({0}));
  EXPECT_FALSE(l.capped);
  const auto proj = project_language(l.control, std::set<TransitionId>{0});
  EXPECT_EQ(proj, (std::set<std::vector<TransitionId>>{{}, {0}}));
  const auto ext = extend_language(proj, std::set<TransitionId>{0, 1}, {0}, 2);
  EXPECT_TRUE(ext.count({1, 1}));
  EXPECT_FALSE(ext.count({0, 0}));
}

TEST(Languages, LinkLanguages) {
  const ConfigTree ct = build_ct(parse(kRelink));
  const Languages l = languages(ct, 3);
  const Link sa{"S"_sym, "A"_sym}, sb{"S"_sym, "B"_sym};
  EXPECT_TRUE(l.broken_link.count({{sa}, {}, {}}));
  EXPECT_TRUE(l.new_link.count({{}, {sb}, {}}));
  EXPECT_EQ(l.initial_gamma, (Gamma{{"S"_sym, {"A"_sym}}}));
}

TEST(Languages, CapIsReported) {
  const Languages l = languages(build_ct(parse(kDiamond)), 2, Anchor::Any, 2);
  EXPECT_TRUE(l.capped);
}

TEST(Replenish, SaturatesFlaggedPlaces) {
  Configuration c;
  c.places["P"_sym] = 1;
  Tokens t;
  t.add(token({epsilon()}));
  c.set_tokens("P"_sym, t);
  const Configuration s = saturate(c, {"P"_sym});
  EXPECT_EQ(s.tokens("P"_sym).count(token({epsilon()})), kUnbounded);
}

TEST(Fixtures, E1TreeShape) {
  const auto mcn = to_mcn(fixture("e1"));
  const ConfigTree ct = build_ct(mcn.fused);
  EXPECT_FALSE(ct.truncated);
  EXPECT_EQ(ct.nodes.size(), 104u);
  EXPECT_EQ(ct_to_cg(ct).nodes.size(), 64u);
  EXPECT_EQ(ct.complete_path_ends().size(), 2u);
}
