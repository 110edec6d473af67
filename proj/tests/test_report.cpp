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

#include <cmath>
#include <json.hpp>
#include <limits>

#include "qrecon/qrecon.hpp"

using namespace qrecon;

namespace {

Report sample() {
  Report r;
  r.scenario = "sample";
  r.checks.push_back({"chsh", CheckStatus::Pass, {{"classical_bound", 2.0}, {"singlet.S", 2.8284271247461903}}, {}, "ok", ""});
  r.checks.push_back({"noncommutation", CheckStatus::Fail, {{"min_norm", 0.0}}, {"theta/eta"},
                      "operators 'theta' and 'eta' commute (norm 0)", ""});
  r.checks.push_back({"regular-group", CheckStatus::Error, {}, {}, "not transitive", "PostulateViolation"});
  return r;
}

TEST(Report, OnePassMachineDocument) {
  Report r;
  r.scenario = "one";
  r.checks.push_back({"chsh", CheckStatus::Pass, {{"x", 1.0}}, {}, "", ""});
  const auto doc = nlohmann::json::parse(serialize_report(r, ReportFormat::Machine));
  EXPECT_EQ(doc["schema"], kReportSchema);
  EXPECT_EQ(doc["checks"][0]["status"], "pass");
  EXPECT_EQ(doc["summary"]["pass"], 1);
}

TEST(Report, MachineRoundTripIsByteIdentical) {
  const auto text = serialize_report(sample(), ReportFormat::Machine);
  const auto parsed = parse_report(text);
  EXPECT_EQ(parsed, sample());
  EXPECT_EQ(serialize_report(parsed, ReportFormat::Machine), text);
}

TEST(Report, HumanNamesFailingPairAndNorm) {
  const auto text = serialize_report(sample(), ReportFormat::Human);
  EXPECT_NE(text.find("noncommutation"), std::string::npos);
  EXPECT_NE(text.find("'theta' and 'eta'"), std::string::npos);
  EXPECT_NE(text.find("min_norm=0"), std::string::npos);
  EXPECT_NE(text.find("[PostulateViolation]"), std::string::npos);
  EXPECT_NE(text.find("summary: 1 pass, 1 fail, 1 error"), std::string::npos);
}

TEST(Report, FailingCorpusScenarioHumanText) {
  const auto s = load_scenario_file(std::string(QRECON_SCENARIO_DIR) + "/noncommutation-failing.scn");
  const auto text = serialize_report(run_checks(s), ReportFormat::Human);
  EXPECT_NE(text.find("fail"), std::string::npos);
  EXPECT_NE(text.find("norm"), std::string::npos);
}

TEST(Report, ParseErrors) {
  EXPECT_THROW(parse_report("not json"), ScenarioError);
  EXPECT_THROW(parse_report(R"({"schema": "other/1"})"), ScenarioError);
}

TEST(Report, FormatDoubleRoundTrips) {
  for (double x : {0.0, 1.0, 2.8284271247461903, 1e-17, -3.5, 123456789.125}) {
    EXPECT_EQ(std::stod(format_double(x)), x);
  }
}

// Every corpus report survives the machine round trip exactly.
TEST(ReportProperty, CorpusRoundTrip) {
  for (const auto& name : {"scenario-A", "coherence", "singlet", "ozawa", "noncommutation-failing", "nontransitive"}) {
    const auto s = load_scenario_file(std::string(QRECON_SCENARIO_DIR) + "/" + name + ".scn");
    const auto r = run_checks(s);
    const auto text = serialize_report(r, ReportFormat::Machine);
    EXPECT_EQ(parse_report(text), r) << name;
    EXPECT_EQ(serialize_report(parse_report(text), ReportFormat::Machine), text) << name;
    for (const auto& c : r.checks) {
      for (const auto& [k, v] : c.metrics) EXPECT_TRUE(std::isfinite(v)) << name << " " << k;
    }
  }
}

}  // namespace
