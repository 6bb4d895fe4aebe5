#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <string>

namespace fs = std::filesystem;

namespace {

struct Run {
  int code = -1;
  std::string out;
};

Run vpnc(const std::string& args) {
  const std::string cmd = std::string(VPNC_PATH) + " " + args + " 2>&1";
  Run r;
  FILE* p = popen(cmd.c_str(), "r");
  if (!p) return r;
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof buf, p)) > 0) r.out.append(buf, n);
  const int status = pclose(p);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string model(const char* name) { return std::string(VPN_MODELS_DIR) + "/" + name + ".vpn"; }

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "vpnc_cli_test";
  fs::create_directories(dir);
  return dir / name;
}

void write(const fs::path& p, const std::string& text) { std::ofstream(p) << text; }

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  return {std::istreambuf_iterator<char>(in), {}};
}

}  // namespace

TEST(Cli, ValidateExamples) {
  EXPECT_EQ(vpnc("validate " + model("e1")).code, 0);
  EXPECT_EQ(vpnc("validate " + model("e2")).code, 0);
}

TEST(Cli, ParseErrorIsUsageError) {
  const auto bad = scratch("bad.vpn");
  write(bad, "places\n  P 1 process\nmarking\n  P = <a,b>\n");
  const auto r = vpnc("validate " + bad.string());
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.out.find(":4:"), std::string::npos) << r.out;
  EXPECT_EQ(vpnc("validate /nonexistent.vpn").code, 2);
  EXPECT_EQ(vpnc("frobnicate").code, 2);
}

TEST(Cli, AnalyzeExitCodes) {
  EXPECT_EQ(vpnc("analyze " + model("e1")).code, 0);
  EXPECT_EQ(vpnc("analyze " + model("e2") + " --property validity").code, 0);
  EXPECT_EQ(vpnc("analyze " + model("double_send")).code, 1);
  EXPECT_EQ(vpnc("analyze " + model("stranded_token") + " --property validity").code, 1);
  EXPECT_EQ(vpnc("analyze " + model("e1_unreachable_final") + " --property soundness").code, 1);
  EXPECT_EQ(vpnc("analyze " + model("e2") + " --max-depth 3").code, 3);
  EXPECT_EQ(vpnc("analyze " + model("e1") + " --property nonsense").code, 2);
}

TEST(Cli, AnalyzeJsonReport) {
  const auto out = scratch("e2_report.json");
  ASSERT_EQ(vpnc("analyze " + model("e2") + " --report json --out " + out.string()).code, 0);
  const auto j = nlohmann::json::parse(slurp(out));
  EXPECT_EQ(j["complete_paths"], 4);
  EXPECT_EQ(j["connectivity"]["verdict"], "holds");
  EXPECT_EQ(j["validity"]["verdict"], "holds");
}

TEST(Cli, ExploreExports) {
  const auto json_out = scratch("e1_tree.json");
  const auto r = vpnc("explore " + model("e1") + " --out " + json_out.string());
  ASSERT_EQ(r.code, 0) << r.out;
  EXPECT_EQ(nlohmann::json::parse(slurp(json_out))["nodes"].size(), 104u);
  const auto dot_out = scratch("e1_graph.dot");
  ASSERT_EQ(vpnc("explore " + model("e1") + " --graph --format dot --out " + dot_out.string()).code, 0);
  EXPECT_EQ(slurp(dot_out).rfind("digraph", 0), 0u);
}

TEST(Cli, FixtureRoundTrip) {
  const auto r = vpnc("fixture --list");
  EXPECT_NE(r.out.find("double_send"), std::string::npos);
  const auto out = scratch("e2_copy.vpn");
  ASSERT_EQ(vpnc("fixture e2 --out " + out.string()).code, 0);
  EXPECT_EQ(vpnc("analyze " + out.string()).code, 0);
}

TEST(Cli, ComposeSplitsAndRejoins) {
  const auto out = scratch("composed.vpn");
  EXPECT_EQ(vpnc("compose " + model("e1") + " --out " + out.string()).code, 0);
  EXPECT_EQ(vpnc("analyze " + out.string()).code, 0);
}

TEST(Cli, MergeAsync) {
  const auto a = scratch("a.vpn"), b = scratch("b.vpn"), spec = scratch("spec.json");
  const auto out = scratch("merged.vpn");
  write(a, "places\n  a_p 1 initial_final\ntransitions\n  a1\narcs\n  a_p -> a1 : <eps>\n"
           "  a1 -> a_p : <eps>\nmarking\n  a_p = <eps>\n");
  write(b, "places\n  b_p 1 initial_final\ntransitions\n  b1\narcs\n  b_p -> b1 : <eps>\n"
           "  b1 -> b_p : <eps>\nmarking\n  b_p = <eps>\n");
  write(spec, R"({"kind": "async", "t1": "a1", "t2": "b1", "buffer_out": "S1", "buffer_in": "S2",
    "bridge": "t", "produce": "<eps>", "take": "<eps>", "give": "<eps>", "consume": "<eps>"})");
  const auto r = vpnc("merge " + a.string() + " " + b.string() + " --spec " + spec.string() +
                      " --out " + out.string());
  ASSERT_EQ(r.code, 0) << r.out;
  const std::string merged = slurp(out);
  EXPECT_NE(merged.find("t external\n"), std::string::npos) << merged;
  EXPECT_EQ(vpnc("validate " + out.string()).code, 0);

  write(spec, R"({"kind": "async", "t1": "a1", "t2": "missing", "buffer_out": "S1", "buffer_in": "S2",
    "bridge": "t", "produce": "<eps>", "take": "<eps>", "give": "<eps>", "consume": "<eps>"})");
  EXPECT_EQ(vpnc("merge " + a.string() + " " + b.string() + " --spec " + spec.string() +
                 " --out " + out.string()).code, 2);
}
