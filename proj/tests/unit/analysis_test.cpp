#include <gtest/gtest.h>

#include <json.hpp>

#include "vpn/analysis.hpp"
#include "vpn/error.hpp"
#include "vpn/fixtures.hpp"
#include "vpn/model_io.hpp"

using namespace vpn;

namespace {

struct Loaded {
  MultiComponentNet mcn;
  ConfigTree ct;
};

Loaded load(std::string_view name, const ExplorationBounds& b = {}) {
  Loaded l;
  l.mcn = to_mcn(fixture(name));
  l.ct = build_ct(l.mcn.fused, b);
  return l;
}

void expect_replayable(const Net& net, const Trace& tr) {
  ASSERT_FALSE(tr.empty());
  EXPECT_TRUE(check_data_sync(net, tr));
}

}  // namespace

TEST(Connectivity, E1HoldsWithWitnesses) {
  const auto l = load("e1");
  const auto r = analyze_connectivity(l.mcn, l.ct);
  EXPECT_EQ(r.verdict, Verdict::Holds);
  EXPECT_EQ(r.mapping_sets.at("S"_sym), (std::set<Symbol>{"S1"_sym, "S2"_sym, "S3"_sym}));
  const Trace& w = r.witnesses.at("S"_sym);
  expect_replayable(l.mcn.fused, w);
  EXPECT_TRUE(w.back().second.contains("S"_sym));
}

TEST(Connectivity, NoInterfaceVariable) {
  auto l = load("e1");
  l.mcn.interface_variables.clear();
  EXPECT_THROW(analyze_connectivity(l.mcn, l.ct), Error);
  const auto report = full_report(l.mcn);
  ASSERT_TRUE(report.connectivity);
  EXPECT_EQ(report.connectivity->verdict, Verdict::Fails);
}

TEST(Connectivity, UnboundVariableFails) {
  auto l = load("e1");
  l.mcn.fused.declare_variable("Unused"_sym);
  l.mcn.interface_variables.insert("Unused"_sym);
  EXPECT_EQ(analyze_connectivity(l.mcn, l.ct).verdict, Verdict::Fails);
}

TEST(Soundness, E1StepEvidence) {
  const auto l = load("e1");
  const auto r = analyze_soundness(l.mcn, l.ct, l.mcn.fused.interfaces());
  EXPECT_EQ(r.verdict, Verdict::Holds);
  EXPECT_EQ(r.failed_step, 0);
  expect_replayable(l.mcn.fused, r.final_witness);
  // every created or sustained link has a usability witness
  std::set<Link> used;
  for (const auto& u : r.usability) {
    used.insert(u.link);
    expect_replayable(l.mcn.fused, u.path);
  }
  std::set<Link> need = r.links.created;
  need.insert(r.links.sustained.begin(), r.links.sustained.end());
  EXPECT_EQ(used, need);
}

TEST(Soundness, UndeclaredInterfaceFailsStep3) {
  const auto l = load("e1");
  const auto r = analyze_soundness(l.mcn, l.ct, {"S1"_sym, "S2"_sym});
  EXPECT_EQ(r.verdict, Verdict::Fails);
  EXPECT_EQ(r.failed_step, 3);
}

TEST(Soundness, UnreachableFinalFailsStep1) {
  const auto l = load("e1_unreachable_final");
  const auto r = analyze_soundness(l.mcn, l.ct, l.mcn.fused.interfaces());
  EXPECT_EQ(r.verdict, Verdict::Fails);
  EXPECT_EQ(r.failed_step, 1);
  expect_replayable(l.mcn.fused, r.counterexample);
}

TEST(Soundness, MissingPrerequisites) {
  auto l = load("e1");
  EXPECT_THROW(analyze_soundness(l.mcn, l.ct, {}), Error);
  l.mcn.components.front().finals.clear();
  EXPECT_THROW(analyze_soundness(l.mcn, l.ct, l.mcn.fused.interfaces()), Error);
}

TEST(Soundness, PerComponentMode) {
  const auto l = load("e2");
  AnalysisOptions opts;
  opts.final_mode = FinalMode::PerComponent;
  EXPECT_EQ(analyze_soundness(l.mcn, l.ct, l.mcn.fused.interfaces(), opts).verdict, Verdict::Holds);
}

TEST(Validity, E1AndE2Valid) {
  for (const char* name : {"e1", "e2"}) {
    const auto l = load(name);
    const auto r = analyze_validity(l.mcn, l.ct);
    EXPECT_EQ(r.verdict, Verdict::Holds) << name << ": " << r.reason;
    EXPECT_EQ(r.replayed_edges, l.ct.edges.size());
  }
}

TEST(Validity, DoubleSendFailsClause2) {
  const auto l = load("double_send");
  const auto r = analyze_validity(l.mcn, l.ct);
  EXPECT_EQ(r.verdict, Verdict::Fails);
  EXPECT_EQ(r.failed_clause, 2);
  expect_replayable(l.mcn.fused, r.counterexample);
  EXPECT_EQ(format_trace(l.mcn.fused, r.counterexample), "a_send[I=box,X=m1] ; a_send[I=box,X=m1]");
}

TEST(Validity, StrandedTokenFailsClause3) {
  const auto l = load("stranded_token");
  const auto r = analyze_validity(l.mcn, l.ct);
  EXPECT_EQ(r.verdict, Verdict::Fails);
  EXPECT_EQ(r.failed_clause, 3);
  expect_replayable(l.mcn.fused, r.counterexample);
}

TEST(Truncation, PositiveVerdictsBecomeBounded) {
  ExplorationBounds b;
  b.max_depth = 3;
  const auto mcn = to_mcn(fixture("e2"));
  const auto report = full_report(mcn, b);
  EXPECT_TRUE(report.truncated);
  EXPECT_NE(report.validity->verdict, Verdict::Holds);
  EXPECT_NE(report.soundness->verdict, Verdict::Holds);
  EXPECT_EQ(report.exit_code(), 3);
}

TEST(Report, TextAndJson) {
  const auto mcn = to_mcn(fixture("e1"));
  const auto report = full_report(mcn);
  EXPECT_EQ(report.exit_code(), 0);
  EXPECT_EQ(report.tree_nodes, 104u);
  const auto j = nlohmann::json::parse(report.to_json(mcn.fused));
  EXPECT_EQ(j["schema_version"], kReportSchemaVersion);
  EXPECT_EQ(j["soundness"]["verdict"], "holds");
  EXPECT_NE(report.to_text(mcn.fused).find("holds"), std::string::npos);

  const auto bad = full_report(to_mcn(fixture("double_send")));
  EXPECT_EQ(bad.exit_code(), 1);
}

TEST(Report, VacuousWithoutComponents) {
  const auto doc = parse_model_or_throw("places\n  P 1 process\nmarking\n  P = <eps>\n");
  const auto report = full_report(to_mcn(doc));
  ASSERT_TRUE(report.soundness);
  EXPECT_EQ(report.soundness->verdict, Verdict::Vacuous);
}
