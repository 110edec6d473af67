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

// Minimal embedding of the check runner: load a scenario file, run its
// checks and print the human report.

#include <iostream>

#include "qrecon/qrecon.hpp"

int main(int argc, char** argv) {
  if (argc != 2) {
    std::cerr << "usage: run_scenario FILE.scn\n";
    return 2;
  }
  try {
    const auto report = qrecon::run_checks(qrecon::load_scenario_file(argv[1]));
    std::cout << qrecon::serialize_report(report, qrecon::ReportFormat::Human);
    for (const auto& c : report.checks) {
      if (c.status != qrecon::CheckStatus::Pass) return 1;
    }
    return 0;
  } catch (const qrecon::ScenarioError& e) {
    std::cerr << e.kind() << " at " << e.path() << ": " << e.what() << "\n";
    return 2;
  }
}
