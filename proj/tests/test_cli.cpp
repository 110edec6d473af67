// Copyright 2026 The qrecon Authors
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

// Drives the built qrecon executable end to end.

#include <gtest/gtest.h>
#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <string>

#include "qrecon/report.hpp"

namespace {

struct Run {
  int code = -1;
  std::string out;
};

/// Runs the CLI with `args`; stderr is folded into the captured output.
Run cli(const std::string& args) {
  const std::string cmd = std::string("\"") + QRECON_CLI + "\" " + args + " 2>&1";
  Run r;
  FILE* p = popen(cmd.c_str(), "r");
  if (!p) return r;
  std::array<char, 4096> buf{};
  std::size_t n = 0;
  while ((n = fread(buf.data(), 1, buf.size(), p)) > 0) r.out.append(buf.data(), n);
  const int status = pclose(p);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string scn(const std::string& name) { return std::string(QRECON_SCENARIO_DIR) + "/" + name + ".scn"; }

TEST(Cli, CheckPassesWithExitZero) {
  const auto r = cli("check " + scn("scenario-A"));
  EXPECT_EQ(r.code, 0) << r.out;
  EXPECT_NE(r.out.find("summary: 13 pass, 0 fail, 0 error"), std::string::npos) << r.out;
}

TEST(Cli, BundledNameResolves) {
  EXPECT_EQ(cli("validate scenario-A").code, 0);
}

TEST(Cli, FailingCheckExitsOne) {
  const auto r = cli("check " + scn("noncommutation-failing"));
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.out.find("fail"), std::string::npos);
}

TEST(Cli, ScenarioErrorExitsTwo) {
  const auto r = cli("check " + scn("broken"));
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.out.find("UnresolvedReference at /variables/0/group"), std::string::npos) << r.out;
}

TEST(Cli, UsageErrorsExitTwo) {
  EXPECT_EQ(cli("").code, 2);
  EXPECT_EQ(cli("frobnicate x").code, 2);
  EXPECT_EQ(cli("check " + scn("scenario-A") + " --format xml").code, 2);
  const auto r = cli("check " + scn("scenario-A") + " --only nope");
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.out.find("UnknownCheck"), std::string::npos);
}

TEST(Cli, MachineOutputParses) {
  const auto r = cli("check " + scn("scenario-A") + " --format machine --only relatedness,rep-unitary");
  ASSERT_EQ(r.code, 0) << r.out;
  const auto doc = nlohmann::json::parse(r.out);
  EXPECT_EQ(doc["schema"], qrecon::kReportSchema);
  ASSERT_EQ(doc["checks"].size(), 2u);
  EXPECT_EQ(doc["checks"][0]["check"], "relatedness");
  EXPECT_EQ(doc["checks"][1]["status"], "pass");
}

TEST(Cli, ChshSinglet) {
  const auto r = cli("chsh singlet");
  EXPECT_EQ(r.code, 0) << r.out;
  EXPECT_NE(r.out.find("S = 2.828427"), std::string::npos) << r.out;
}

TEST(Cli, ExperimentCommands) {
  EXPECT_EQ(cli("born born").code, 0);
  EXPECT_EQ(cli("ozawa ozawa").code, 0);
  EXPECT_EQ(cli("context context").code, 0);
  EXPECT_EQ(cli("context decision").code, 0);
  EXPECT_EQ(cli("chsh scenario-A").code, 2);  // no CHSH block
}

TEST(Cli, ReportRerender) {
  const auto file = (std::filesystem::temp_directory_path() / "qrecon_cli_report.json").string();
  ASSERT_EQ(cli("check " + scn("singlet") + " --format machine --out " + file).code, 0);
  std::ifstream in(file);
  const std::string saved((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  const auto again = cli("report " + file + " --format machine");
  EXPECT_EQ(again.code, 0);
  EXPECT_EQ(again.out, saved);
  const auto human = cli("report " + file);
  EXPECT_NE(human.out.find("summary:"), std::string::npos);
  std::filesystem::remove(file);
}

TEST(Cli, SeedIsDeterministic) {
  const auto a = cli("check amplitudes --format machine --seed 7");
  const auto b = cli("check amplitudes --format machine --seed 7");
  EXPECT_EQ(a.code, 0);
  EXPECT_EQ(a.out, b.out);
}

}  // namespace
