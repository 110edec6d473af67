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

#include <gtest/gtest.h>

#include <filesystem>
#include <map>

#include "qrecon/qrecon.hpp"

using namespace qrecon;
namespace fs = std::filesystem;

namespace {

std::string path(const std::string& name) { return std::string(QRECON_SCENARIO_DIR) + "/" + name + ".scn"; }

Scenario load(const std::string& name) { return load_scenario_file(path(name)); }

std::vector<std::string> corpus() {
  std::vector<std::string> out;
  for (const auto& e : fs::directory_iterator(QRECON_SCENARIO_DIR)) {
    if (e.path().extension() == ".scn" && e.path().stem() != "broken") out.push_back(e.path().stem().string());
  }
  std::sort(out.begin(), out.end());
  return out;
}

template <class F>
std::string error_kind(F&& f, std::string* where = nullptr) {
  try {
    f();
  } catch (const ScenarioError& e) {
    if (where) *where = e.path();
    return e.kind();
  }
  return "none";
}

TEST(Scenario, ScenarioAShape) {
  const auto s = load("scenario-A");
  EXPECT_EQ(s.phi.size(), 4u);
  EXPECT_EQ(s.variables.size(), 2u);
  EXPECT_EQ(s.groups.size(), 2u);
  EXPECT_EQ(s.transformations, "M");
}

TEST(Scenario, MissingGroupIsUnresolved) {
  std::string where;
  EXPECT_EQ(error_kind([] { load("broken"); }, &where), "UnresolvedReference");
  EXPECT_EQ(where, "/variables/0/group");
}

TEST(Scenario, EmptyDocumentIsSchemaError) {
  EXPECT_EQ(error_kind([] { load_scenario("{}"); }), "SchemaError");
  EXPECT_EQ(error_kind([] { load_scenario(""); }), "ParseError");
  EXPECT_EQ(error_kind([] { load_scenario("[1, 2]"); }), "SchemaError");
}

TEST(Scenario, UnknownCheckRejected) {
  std::string where;
  const std::string doc = R"({"version": 1, "name": "x", "phi_space": {"id": "O", "points": ["0", "1"]}, "variables": [],
    "checks": ["no-such-check"]})";
  EXPECT_EQ(error_kind([&] { load_scenario(doc); }, &where), "UnknownCheck");
  EXPECT_EQ(where, "/checks/0");
}

TEST(Scenario, WrongVersionRejected) {
  const std::string doc = R"({"version": 99, "name": "x", "phi_space": {"id": "O", "points": ["0"]}})";
  EXPECT_NE(error_kind([&] { load_scenario(doc); }), "none");
}

TEST(Scenario, MissingFileIsIOError) {
  EXPECT_EQ(error_kind([] { load_scenario_file("/nonexistent/file.scn"); }), "IOError");
}

TEST(Scenario, RoundTripWholeCorpus) {
  const auto names = corpus();
  ASSERT_GE(names.size(), 15u);
  for (const auto& n : names) {
    const auto s = load(n);
    const auto text = serialize_scenario(s);
    const auto again = load_scenario(text);
    EXPECT_EQ(again, s) << n;
    EXPECT_EQ(serialize_scenario(again), text) << n;
  }
}

TEST(Scenario, CheckRegistryMatchesDispatcher) {
  EXPECT_EQ(check_names().size(), 24u);
  for (const auto& n : check_names()) EXPECT_TRUE(checks::registry().count(n)) << n;
  EXPECT_EQ(checks::registry().size(), check_names().size());
}

// Expected status of every check in the bundled corpus. Anything not listed
// is expected to pass.
TEST(ScenarioCorpus, ExpectedOutcomes) {
  const std::map<std::pair<std::string, std::string>, CheckStatus> special{
      {{"noncommutation-failing", "noncommutation"}, CheckStatus::Fail},
      {{"lemmas-negative", "rep-coherent"}, CheckStatus::Fail},
      {{"nontransitive", "regular-group"}, CheckStatus::Fail},
      {{"nontransitive", "operator-construction"}, CheckStatus::Error},
  };
  for (const auto& n : corpus()) {
    const auto s = load(n);
    const auto r = run_checks(s);
    ASSERT_EQ(r.checks.size(), s.checks.size()) << n;
    for (std::size_t i = 0; i < r.checks.size(); ++i) {
      const auto& c = r.checks[i];
      EXPECT_EQ(c.check, s.checks[i]);
      auto it = special.find({n, c.check});
      const auto want = it == special.end() ? CheckStatus::Pass : it->second;
      EXPECT_EQ(c.status, want) << n << " / " << c.check << ": " << c.message;
    }
  }
}

TEST(ScenarioCorpus, NonTransitiveErrorKind) {
  const auto r = run_checks(load("nontransitive"));
  bool seen = false;
  for (const auto& c : r.checks) {
    if (c.check == "operator-construction") {
      EXPECT_EQ(c.error, "PostulateViolation");
      seen = true;
    }
  }
  EXPECT_TRUE(seen);
}

TEST(ScenarioCorpus, ScenarioAWitness) {
  RunOptions opt;
  opt.only = {"relatedness"};
  const auto r = run_checks(load("scenario-A"), opt);
  ASSERT_EQ(r.checks.size(), 1u);
  ASSERT_FALSE(r.checks[0].witnesses.empty());
  EXPECT_NE(r.checks[0].witnesses[0].find("(1 2)"), std::string::npos);
}

TEST(ScenarioCorpus, EmptyCheckListGivesEmptyReport) {
  auto s = load("scenario-A");
  s.checks.clear();
  EXPECT_TRUE(run_checks(s).checks.empty());
}

TEST(ScenarioCorpus, UnknownCheckAtRunTime) {
  const auto c = run_check(load("scenario-A"), "bogus");
  EXPECT_EQ(c.status, CheckStatus::Error);
  EXPECT_EQ(c.error, "UnknownCheck");
}

TEST(ScenarioCorpus, Deterministic) {
  for (const auto& n : corpus()) {
    const auto s = load(n);
    EXPECT_EQ(serialize_report(run_checks(s), ReportFormat::Machine),
              serialize_report(run_checks(s), ReportFormat::Machine))
        << n;
  }
}

}  // namespace
