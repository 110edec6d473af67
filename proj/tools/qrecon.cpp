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

// qrecon: validate scenarios, run check suites and single experiments.
//
// Exit codes: 0 all executed checks pass, 1 some check failed or errored,
// 2 usage or scenario error.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "qrecon/qrecon.hpp"

#ifndef QRECON_SCENARIO_DIR
#define QRECON_SCENARIO_DIR "scenarios"
#endif

namespace {

namespace fs = std::filesystem;
using namespace qrecon;

constexpr int kPass = 0;
constexpr int kFail = 1;
constexpr int kUsage = 2;

struct Options {
  std::string scenario;
  std::string format = "human";
  std::vector<std::string> only;
  std::string out;
  std::uint64_t seed = 1;
};

/// Exact path, then with ".scn", then inside the bundled corpus.
std::string resolve(const std::string& name) {
  const std::vector<fs::path> candidates{
      name, name + ".scn", fs::path(QRECON_SCENARIO_DIR) / name,
      fs::path(QRECON_SCENARIO_DIR) / (name + ".scn")};
  for (const auto& p : candidates) {
    std::error_code ec;
    if (fs::is_regular_file(p, ec)) return p.string();
  }
  return name;
}

ReportFormat format_of(const Options& o) {
  return o.format == "machine" ? ReportFormat::Machine : ReportFormat::Human;
}

void emit(const Options& o, const std::string& text) {
  if (o.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(o.out, std::ios::binary);
  if (!f) throw ScenarioError("IOError", o.out, "cannot write output file");
  f << text;
}

int exit_code(const Report& r) { return r.all_passed() ? kPass : kFail; }

/// Runs `names` (ignoring the scenario's own list) and prints the report.
/// `preamble` lines go before a human report and are dropped for machine output.
int run_named(const Options& o, const Scenario& s, const std::vector<std::string>& names,
              const std::string& preamble = {}) {
  RunOptions opt;
  opt.seed = o.seed;
  Report r;
  r.scenario = s.name;
  for (const auto& n : names) r.checks.push_back(run_check(s, n, opt));
  const auto fmt = format_of(o);
  emit(o, (fmt == ReportFormat::Human ? preamble : std::string()) + serialize_report(r, fmt));
  return exit_code(r);
}

int cmd_validate(const Options& o) {
  const auto s = load_scenario_file(resolve(o.scenario));
  std::cout << "ok: " << s.name << " (" << s.variables.size() << " variables, "
            << s.groups.size() << " groups, " << s.checks.size() << " checks)\n";
  return kPass;
}

int cmd_check(const Options& o) {
  for (const auto& n : o.only) {
    if (!is_check_name(n)) throw ScenarioError("UnknownCheck", "--only", "unknown check '" + n + "'");
  }
  const auto s = load_scenario_file(resolve(o.scenario));
  RunOptions opt;
  opt.seed = o.seed;
  opt.only = o.only;
  const auto r = run_checks(s, opt);
  emit(o, serialize_report(r, format_of(o)));
  return exit_code(r);
}

[[noreturn]] void no_experiment(const std::string& what) {
  throw ScenarioError("SchemaError", "/experiments/" + what, "scenario has no " + what + " experiment");
}

int cmd_born(const Options& o) {
  const auto s = load_scenario_file(resolve(o.scenario));
  if (s.born.empty()) no_experiment("born");
  std::ostringstream pre;
  for (const auto& b : s.born) {
    const auto p = born_matrix(s.basis(b.a)->basis, s.basis(b.b)->basis);
    pre << b.id << ": P(" << b.b << " = j | " << b.a << " = k)\n";
    for (Eigen::Index k = 0; k < p.rows(); ++k) {
      pre << "  ";
      for (Eigen::Index j = 0; j < p.cols(); ++j) pre << (j ? "  " : "") << format_double(p(k, j));
      pre << "\n";
    }
  }
  return run_named(o, s, {"born-rule", "trace-rule"}, pre.str());
}

int cmd_chsh(const Options& o) {
  const auto s = load_scenario_file(resolve(o.scenario));
  if (s.chsh.empty()) no_experiment("chsh");
  std::ostringstream pre;
  for (const auto& c : s.chsh) {
    pre << c.id << ": S = " << format_double(chsh_value(c.setup).s) << "\n";
  }
  return run_named(o, s, {"chsh"}, pre.str());
}

int cmd_ozawa(const Options& o) {
  const auto s = load_scenario_file(resolve(o.scenario));
  if (s.ozawa.empty()) no_experiment("ozawa");
  return run_named(o, s, {"intersubjectivity"});
}

int cmd_context(const Options& o) {
  const auto s = load_scenario_file(resolve(o.scenario));
  std::vector<std::string> names;
  if (!s.contexts.empty()) names.push_back("context-constraint");
  if (!s.decisions.empty()) names.push_back("decision-context");
  if (names.empty()) no_experiment("context");
  return run_named(o, s, names);
}

/// Re-renders a saved machine report.
int cmd_report(const Options& o) {
  std::ifstream in(o.scenario);
  if (!in) throw ScenarioError("IOError", o.scenario, "cannot open report");
  std::stringstream ss;
  ss << in.rdbuf();
  const auto r = parse_report(ss.str());
  emit(o, serialize_report(r, format_of(o)));
  return exit_code(r);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"qrecon: finite-model verification of quantum reconstruction checks"};
  app.require_subcommand(1);
  Options opt;

  auto add = [&](const std::string& name, const std::string& help, const std::string& what) {
    auto* sub = app.add_subcommand(name, help);
    sub->add_option(what, opt.scenario, what)->required();
    sub->add_option("--format", opt.format, "output format")
        ->check(CLI::IsMember({"machine", "human"}));
    sub->add_option("--out", opt.out, "write output to this file");
    sub->add_option("--seed", opt.seed, "seed for randomized sweeps");
    return sub;
  };
  add("validate", "load and resolve a scenario", "scenario");
  auto* check = add("check", "run the scenario's checks", "scenario");
  check->add_option("--only", opt.only, "comma-separated checks to run")->delimiter(',');
  add("born", "Born and trace-rule experiments", "scenario");
  add("chsh", "CHSH experiments", "scenario");
  add("ozawa", "meter agreement experiments", "scenario");
  add("context", "context and decision experiments", "scenario");
  add("report", "re-render a machine report", "report");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  const std::string cmd = app.get_subcommands().front()->get_name();
  try {
    if (cmd == "validate") return cmd_validate(opt);
    if (cmd == "check") return cmd_check(opt);
    if (cmd == "born") return cmd_born(opt);
    if (cmd == "chsh") return cmd_chsh(opt);
    if (cmd == "ozawa") return cmd_ozawa(opt);
    if (cmd == "context") return cmd_context(opt);
    return cmd_report(opt);
  } catch (const ScenarioError& e) {
    std::cerr << "qrecon: " << e.kind() << " at " << e.what() << "\n";
  } catch (const Error& e) {
    std::cerr << "qrecon: " << e.kind() << ": " << e.what() << "\n";
  } catch (const std::exception& e) {
    std::cerr << "qrecon: " << e.what() << "\n";
  }
  return kUsage;
}
