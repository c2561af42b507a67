// Copyright 2026 The Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "lncw/cli.h"
#include "lncw/family.h"

namespace lncw {
namespace {

namespace fs = std::filesystem;

struct CliRun {
  int code = 0;
  std::string out;
  std::string err;
  nlohmann::json Json() const { return nlohmann::json::parse(out); }
};

CliRun Cli(std::vector<std::string> args) {
  args.insert(args.begin(), "lncw");
  std::ostringstream out, err;
  CliRun r;
  r.code = RunCli(args, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("lncw_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }
  std::string Path(const std::string& name) const { return (dir_ / name).string(); }
  static std::string Slurp(const std::string& path) {
    std::ifstream in(path);
    return std::string(std::istreambuf_iterator<char>(in), {});
  }

  fs::path dir_;
};

TEST_F(CliTest, BuildPrintsNetwork) {
  const CliRun r = Cli({"build", "--m", "2", "--n", "1"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const auto j = r.Json();
  EXPECT_EQ(j.at("schema"), 1);
  EXPECT_EQ(j.at("sources").size(), 4u);
  EXPECT_EQ(j.at("terminals").size(), 4u);
  EXPECT_EQ(j.at("edges").size(), 20u);
}

TEST_F(CliTest, ExitCodes) {
  EXPECT_EQ(Cli({"--help"}).code, kExitOk);
  EXPECT_EQ(Cli({"build", "--m", "2"}).code, kExitError);
  EXPECT_EQ(Cli({"build", "--m", "2", "--n", "1", "--bogus"}).code, kExitError);
  EXPECT_EQ(Cli({"verify", "--net", Path("missing.json"), "--code", Path("x.json")}).code, kExitError);
  EXPECT_EQ(Cli({"build", "--m", "3", "--n", "3"}).code, kExitError);
  EXPECT_EQ(Cli({"nonsense"}).code, kExitError);
}

TEST_F(CliTest, RoutingVerifiesAndFlippedDecoderFails) {
  ASSERT_EQ(Cli({"build", "--m", "2", "--n", "1", "-o", Path("net.json")}).code, kExitOk);
  ASSERT_EQ(Cli({"routing", "--m", "2", "--n", "1", "--q", "3", "-o", Path("code.json")}).code, kExitOk);
  CliRun v = Cli({"verify", "--net", Path("net.json"), "--code", Path("code.json")});
  EXPECT_EQ(v.code, kExitOk) << v.err;
  EXPECT_TRUE(v.Json().at("pass").get<bool>());
  EXPECT_EQ(v.Json().at("terminals_checked"), 4);

  auto code = nlohmann::json::parse(Slurp(Path("code.json")));
  auto& dec = code.at("decoders").at("t_1").at("data");
  dec[0] = (dec[0].get<int>() + 1) % 3;
  std::ofstream(Path("bad.json")) << code.dump();
  v = Cli({"verify", "--net", Path("net.json"), "--code", Path("bad.json")});
  EXPECT_EQ(v.code, kExitNegative);
  EXPECT_EQ(v.Json().at("failures"), 1);
  v = Cli({"verify", "--net", Path("net.json"), "--code", Path("bad.json"), "--terminal", "t_0"});
  EXPECT_EQ(v.code, kExitOk);
}

TEST_F(CliTest, NetworkRoundTripThroughFiles) {
  ASSERT_EQ(Cli({"build", "--m", "2", "--n", "1", "--k", "2", "-o", Path("par.json")}).code, kExitOk);
  const NetworkGraph g = NetworkFromJson(nlohmann::json::parse(Slurp(Path("par.json"))));
  EXPECT_TRUE(g == BuildParallel(2, 1, 2));
}

TEST_F(CliTest, ManifestDigestsAreDeterministic) {
  ASSERT_EQ(Cli({"build", "--m", "2", "--n", "2", "-o", Path("a.json")}).code, kExitOk);
  ASSERT_EQ(Cli({"build", "--m", "2", "--n", "2", "-o", Path("b.json")}).code, kExitOk);
  const auto ma = nlohmann::json::parse(Slurp(Path("a.json") + ".manifest.json"));
  const auto mb = nlohmann::json::parse(Slurp(Path("b.json") + ".manifest.json"));
  EXPECT_EQ(ma.at("schema"), 1);
  EXPECT_EQ(ma.at("tool_version"), kToolVersion);
  EXPECT_TRUE(ma.at("seed").is_null());
  EXPECT_GE(ma.at("wall_time_seconds").get<double>(), 0.0);
  ASSERT_EQ(ma.at("outputs").size(), 1u);
  const std::string digest = ma.at("outputs")[0].at("sha256");
  EXPECT_EQ(digest, mb.at("outputs")[0].at("sha256").get<std::string>());
  EXPECT_EQ(digest, Sha256Hex(Slurp(Path("a.json"))));
}

TEST(Sha256Hex, KnownVectors) {
  EXPECT_EQ(Sha256Hex(""), "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  EXPECT_EQ(Sha256Hex("abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST_F(CliTest, SolveOutcomes) {
  ASSERT_EQ(Cli({"build", "--m", "2", "--n", "1", "-o", Path("net.json")}).code, kExitOk);
  CliRun r = Cli({"solve", "--net", Path("net.json"), "--r", "1", "--l", "1", "--q", "2"});
  EXPECT_EQ(r.code, kExitNegative);
  EXPECT_EQ(r.Json().at("outcome"), "infeasible");
  r = Cli({"solve", "--net", Path("net.json"), "--r", "2", "--l", "2", "--q", "2", "--mode", "routing"});
  EXPECT_EQ(r.code, kExitOk);
  r = Cli({"solve", "--net", Path("net.json"), "--r", "1", "--l", "1", "--q", "2", "--budget", "5"});
  EXPECT_EQ(r.code, kExitError);
  EXPECT_EQ(r.Json().at("outcome"), "budget-exhausted");
}

TEST_F(CliTest, CutboundAndAnalyses) {
  ASSERT_EQ(Cli({"build", "--m", "3", "--n", "1", "-o", Path("net.json")}).code, kExitOk);
  ASSERT_EQ(Cli({"routing", "--m", "3", "--n", "1", "--q", "2", "-o", Path("code.json")}).code, kExitOk);
  CliRun r = Cli({"cutbound", "--net", Path("net.json"), "--set", "2"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_EQ(r.Json().at("bound"), "1");
  r = Cli({"cutbound", "--net", Path("net.json"), "--sources", "s_1_1,s_2_1"});
  EXPECT_EQ(r.code, kExitOk);
  EXPECT_EQ(r.Json().at("set_size"), 2);
  EXPECT_EQ(Cli({"cutbound", "--net", Path("net.json"), "--set", "1", "--sources", "s_1_1"}).code,
            kExitError);
  r = Cli({"claims", "--net", Path("net.json"), "--code", Path("code.json")});
  EXPECT_EQ(r.code, kExitOk) << r.err;
  r = Cli({"polycheck", "--net", Path("net.json"), "--code", Path("code.json"), "--mode", "sampled",
           "--seed", "4"});
  EXPECT_EQ(r.code, kExitOk) << r.err;
}

TEST_F(CliTest, ReduceRejectsUnverifiedCode) {
  ASSERT_EQ(Cli({"build", "--m", "4", "--n", "1", "--k", "2", "-o", Path("par.json")}).code, kExitOk);
  ASSERT_EQ(Cli({"routing", "--m", "4", "--n", "1", "--k", "2", "--y", "2", "--q", "2", "-o",
                 Path("code.json")})
                .code,
            kExitOk);
  EXPECT_EQ(Cli({"reduce", "--net", Path("par.json"), "--code", Path("code.json")}).code, kExitNegative);
}

TEST(ExportDot, Shapes) {
  const std::string dot = ExportDot(BuildMNetwork(2, 1));
  EXPECT_EQ(dot.rfind("digraph network {", 0), 0u);
  size_t arrows = 0;
  for (size_t pos = dot.find("->"); pos != std::string::npos; pos = dot.find("->", pos + 2)) ++arrows;
  EXPECT_EQ(arrows, 20u);

  const std::string empty = ExportDot(NetworkGraph{});
  EXPECT_EQ(empty, "digraph network {\n}\n");

  const std::string par = ExportDot(BuildParallel(2, 1, 2));
  EXPECT_NE(par.find("subgraph cluster_c1"), std::string::npos);
  EXPECT_NE(par.find("subgraph cluster_c2"), std::string::npos);
  EXPECT_EQ(par.find("subgraph cluster_c3"), std::string::npos);
}

}  // namespace
}  // namespace lncw
