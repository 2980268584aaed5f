// SPDX-FileCopyrightText: © 2026 The symcsp Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <string>
#include <sys/wait.h>

#include <json.hpp>

#include "symcsp/io.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct CliRun {
  int code;
  std::string out;
};

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / ("symcsp_cli_" + std::to_string(::getpid()) + "_" +
                                        ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  CliRun run(const std::string& args) {
    std::string cmd = "cd '" + dir_.string() + "' && '" SYMCSP_CLI "' " + args + " 2>/dev/null";
    CliRun r{0, ""};
    FILE* p = popen(cmd.c_str(), "r");
    char buf[4096];
    while (auto n = fread(buf, 1, sizeof buf, p)) r.out.append(buf, n);
    int status = pclose(p);
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
  }
  std::string file(const std::string& name) { return symcsp::read_file(dir_ / name); }
  void put(const std::string& name, const std::string& text) { symcsp::write_file_atomic(dir_ / name, text); }

  fs::path dir_;
};

}  // namespace

TEST_F(Cli, Params) {
  auto r = run("params --alpha 1 --gamma 0.25 --epsilon 0.25");
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "d=145 ℓ=11 m=14 r=12 q=16384\n");
  auto j = json::parse(run("params --json --no-timestamp").out);
  EXPECT_EQ(j["d"], 145);
}

TEST_F(Cli, UnsatThenTree) {
  ASSERT_EQ(run("gen unsat --delta 0.5 -o u.gug").code, 0);
  auto r = run("--no-timestamp solve tree -i u.gug --witness w.txt");
  ASSERT_EQ(r.code, 0);
  auto j = json::parse(r.out);
  EXPECT_EQ(j["value"], "2/5");
  EXPECT_EQ(j["satisfied"], 4);
  EXPECT_EQ(j["total"], 10);
  auto inst = symcsp::parse_gug(file("u.gug"));
  auto w = symcsp::parse_group_assignment(inst, file("w.txt"));
  EXPECT_EQ(symcsp::evaluate(inst, w).satisfied, 4u);
}

TEST_F(Cli, VacuousInstance) {
  put("e.gug", "gug m=2\nvertex a\nvertex b\n");
  auto j = json::parse(run("--no-timestamp solve brute -i e.gug").out);
  EXPECT_EQ(j["value"], "1/1");
  EXPECT_EQ(j["vacuous"], true);
}

TEST_F(Cli, ExitCodes) {
  EXPECT_EQ(run("").code, 1);
  EXPECT_EQ(run("solve nope -i x").code, 1);
  EXPECT_EQ(run("solve brute -i missing.gug").code, 2);
  put("bad.gug", "gug m=2\nbundle a b zz\n");
  EXPECT_EQ(run("solve brute -i bad.gug").code, 2);
  EXPECT_EQ(run("params --alpha 2").code, 2);
  ASSERT_EQ(run("--seed 3 gen random-pair --girth-override -o rp").code, 0);
  EXPECT_EQ(run("game --pair rp.json --duplicator tree --k 3 --rounds 100 -o t.json").code, 3);
  EXPECT_EQ(json::parse(file("t.json"))["transcript"]["outcome"], "strategy-violation");
}

TEST_F(Cli, RoundTripOfEmittedInstances) {
  ASSERT_EQ(run("gen klein --family k4 -o k").code, 0);
  ASSERT_EQ(run("gen cops-graph --k 4 -o c.graph").code, 0);
  ASSERT_EQ(run("lift -i k.u2.gug -o k.lift.gug").code, 0);
  for (auto f : {"k.u1.gug", "k.u2.gug", "k.lift.gug"}) {
    auto text = file(f);
    EXPECT_EQ(symcsp::format_gug(symcsp::parse_gug(text)), text) << f;
  }
  auto g = file("c.graph");
  EXPECT_EQ(symcsp::format_graph(symcsp::parse_graph(g).graph), g);
  EXPECT_EQ(symcsp::parse_gug(file("k.lift.gug")).vertex_count(), 16u);
}

TEST_F(Cli, ReproducibleOutputs) {
  auto once = [&](const std::string& tag) {
    EXPECT_EQ(run("--seed 9 --no-timestamp gen random-pair --girth-override -o p" + tag).code, 0);
    EXPECT_EQ(run("--seed 4 --no-timestamp game --pair p" + tag + ".json --duplicator tree --rounds 40 -o g" + tag +
                  ".json")
                  .code,
              0);
    EXPECT_EQ(run("--seed 2 --no-timestamp sdp maxcut -i c.graph -o s" + tag + ".json --round 200").code, 0);
  };
  ASSERT_EQ(run("gen cops-graph --k 3 -o c.graph").code, 0);
  once("a");
  once("b");
  EXPECT_EQ(file("pa.json"), file("pb.json"));
  EXPECT_EQ(file("pa.u1.gug"), file("pb.u1.gug"));
  EXPECT_EQ(file("ga.json"), file("gb.json"));
  EXPECT_EQ(file("sa.json"), file("sb.json"));
  EXPECT_EQ(json::parse(file("ga.json"))["transcript"]["outcome"], "survived");
}

TEST_F(Cli, GamesFromFiles) {
  ASSERT_EQ(run("gen klein --family k4 -o k").code, 0);
  auto j = json::parse(run("--no-timestamp game --u1 k.u1.gug --u2 k.u2.gug --duplicator identity "
                           "--spoiler exhaustive --depth 2")
                           .out);
  EXPECT_EQ(j["found"], true);
  j = json::parse(run("--no-timestamp game --pair k.json --duplicator cops --k 3 --rounds 60").out);
  EXPECT_EQ(j["transcript"]["outcome"], "survived");
  EXPECT_EQ(j["transcript"]["rounds"].size(), 60u);
}

TEST_F(Cli, SdpAndReport) {
  put("c.csp", "csp q=2\nctype neq arity=2 sat=0,1;1,0\napply neq a b w=1\napply neq b c w=1\n"
               "apply neq c d w=1\napply neq d a w=1\n");
  auto r = run("--no-timestamp sdp lc -i c.csp -o lc.json --sdpa lc.sdpa");
  ASSERT_EQ(r.code, 0);
  auto j = json::parse(file("lc.json"));
  EXPECT_NEAR(j["value"].get<double>(), 1.0, 1e-4);
  EXPECT_EQ(j["scale"], "1/4");
  EXPECT_NE(file("lc.sdpa").find("* constant"), std::string::npos);
  ASSERT_EQ(run("--no-timestamp sdp gap -i c.csp -i c.csp --eta 0.01 --grid 0.5 --grid 2 -o gap.json").code, 0);
  auto gap = json::parse(file("gap.json"));
  EXPECT_TRUE(gap["curve"][0]["lookup"].is_null());
  EXPECT_NEAR(gap["curve"][1]["lookup"].get<double>(), 0.99, 1e-9);
  ASSERT_EQ(run("--no-timestamp report --dir . -o summary.json").code, 0);
  auto rep = json::parse(file("summary.json"));
  EXPECT_EQ(rep["files"], 2);
  EXPECT_TRUE(rep["runs"].contains("lc.json"));
}
