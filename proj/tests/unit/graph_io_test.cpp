#include <gtest/gtest.h>

#include <json.hpp>

#include "vpn/error.hpp"
#include "vpn/fixtures.hpp"
#include "vpn/graph_io.hpp"
#include "vpn/model_io.hpp"

using namespace vpn;

TEST(GraphExport, SingleNodeDot) {
  const Net n = parse_model_or_throw("places\n  P 1 process\nmarking\n  P = <eps>\n").net;
  const ConfigTree ct = build_ct(n);
  ASSERT_EQ(ct.nodes.size(), 1u);
  const std::string dot = export_graph(n, ct, GraphFormat::Dot);
  EXPECT_EQ(dot.rfind("digraph", 0), 0u);
  EXPECT_NE(dot.find(digest(*ct.root().config)), std::string::npos);
  EXPECT_EQ(dot.find("->"), std::string::npos);
}

TEST(GraphExport, EdgeLabelsCarryBindings) {
  const auto mcn = to_mcn(fixture("e1"));
  const std::string dot = export_graph(mcn.fused, build_ct(mcn.fused), GraphFormat::Dot);
  EXPECT_NE(dot.find("con1 [F=F1"), std::string::npos);
}

TEST(GraphExport, TreeJsonRoundTrip) {
  const auto mcn = to_mcn(fixture("e2"));
  const ConfigTree ct = build_ct(mcn.fused);
  const std::string json = export_graph(mcn.fused, ct, GraphFormat::Json);
  const auto doc = nlohmann::json::parse(json);
  EXPECT_EQ(doc["schema_version"], 1);
  EXPECT_EQ(doc["kind"], "tree");
  const ConfigTree back = tree_from_json(json);
  ASSERT_EQ(back.nodes.size(), ct.nodes.size());
  EXPECT_EQ(back.edges, ct.edges);
  for (std::size_t i = 0; i < ct.nodes.size(); ++i) {
    EXPECT_EQ(*back.nodes[i].config, *ct.nodes[i].config);
    EXPECT_EQ(back.nodes[i].status, ct.nodes[i].status);
  }
  EXPECT_EQ(back.complete_path_ends().size(), 4u);
  const auto names = transitions_from_json(json);
  ASSERT_EQ(names.size(), mcn.fused.transitions().size());
  EXPECT_EQ(names.front(), mcn.fused.transition(0).name);
}

TEST(GraphExport, GraphJsonRoundTrip) {
  const auto mcn = to_mcn(fixture("e1"));
  const ConfigGraph cg = ct_to_cg(build_ct(mcn.fused));
  const ConfigGraph back = graph_from_json(export_graph(mcn.fused, cg, GraphFormat::Json));
  ASSERT_EQ(back.nodes.size(), cg.nodes.size());
  EXPECT_EQ(back.edges, cg.edges);
  EXPECT_EQ(back.expanded, cg.expanded);
  EXPECT_EQ(back.tree_to_graph, cg.tree_to_graph);
  for (std::size_t i = 0; i < cg.nodes.size(); ++i) EXPECT_EQ(*back.nodes[i], *cg.nodes[i]);
}

TEST(GraphImport, RejectsGarbage) {
  EXPECT_THROW(tree_from_json("{"), Error);
  EXPECT_THROW(tree_from_json(R"({"schema_version": 99})"), Error);
  EXPECT_THROW(graph_from_json(R"({"schema_version": 1, "kind": "tree"})"), Error);
}
