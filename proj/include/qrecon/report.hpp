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

/**
 * @file
 * Check reports and their two renderings: a versioned JSON document for
 * machines and aligned text for people.
 */

#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "qrecon/errors.hpp"

namespace qrecon {

inline constexpr const char* kReportSchema = "qrecon-report/1";

enum class CheckStatus { Pass, Fail, Error };

inline const char* to_string(CheckStatus s) {
  switch (s) {
    case CheckStatus::Pass: return "pass";
    case CheckStatus::Fail: return "fail";
    case CheckStatus::Error: return "error";
  }
  return "?";
}

inline CheckStatus parse_status(const std::string& s) {
  if (s == "pass") return CheckStatus::Pass;
  if (s == "fail") return CheckStatus::Fail;
  if (s == "error") return CheckStatus::Error;
  throw ScenarioError("ReportError", "/checks", "unknown status '" + s + "'");
}

struct CheckOutcome {
  std::string check;
  CheckStatus status = CheckStatus::Pass;
  /// Finite numbers only.
  std::map<std::string, double> metrics;
  std::vector<std::string> witnesses;
  std::string message;
  /// Error kind when status is Error.
  std::string error;

  friend bool operator==(const CheckOutcome&, const CheckOutcome&) = default;
};

struct Report {
  std::string scenario;
  std::vector<CheckOutcome> checks;

  std::size_t count(CheckStatus s) const {
    return std::size_t(std::count_if(checks.begin(), checks.end(),
                                     [&](const CheckOutcome& c) { return c.status == s; }));
  }
  bool all_passed() const { return count(CheckStatus::Pass) == checks.size(); }

  friend bool operator==(const Report&, const Report&) = default;
};

enum class ReportFormat { Machine, Human };

/// Shortest decimal text that reads back to the same double.
inline std::string format_double(double x) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return ec == std::errc() ? std::string(buf, end) : std::string("nan");
}

namespace detail {

inline std::string machine_report(const Report& r) {
  using ojson = nlohmann::ordered_json;
  ojson doc;
  doc["schema"] = kReportSchema;
  doc["scenario"] = r.scenario;
  doc["summary"] = {{"pass", r.count(CheckStatus::Pass)},
                    {"fail", r.count(CheckStatus::Fail)},
                    {"error", r.count(CheckStatus::Error)}};
  ojson checks = ojson::array();
  for (const auto& c : r.checks) {
    ojson j;
    j["check"] = c.check;
    j["status"] = to_string(c.status);
    ojson metrics = ojson::object();
    for (const auto& [k, v] : c.metrics) metrics[k] = v;
    j["metrics"] = std::move(metrics);
    j["witnesses"] = c.witnesses;
    j["message"] = c.message;
    if (!c.error.empty()) j["error"] = c.error;
    checks.push_back(std::move(j));
  }
  doc["checks"] = std::move(checks);
  return doc.dump(2) + "\n";
}

inline std::string pad(std::string s, std::size_t width) {
  if (s.size() < width) s.append(width - s.size(), ' ');
  return s;
}

inline std::string human_report(const Report& r) {
  std::size_t width = 5;
  for (const auto& c : r.checks) width = std::max(width, c.check.size());
  std::string out = "scenario: " + r.scenario + "\n";
  for (const auto& c : r.checks) {
    out += pad(c.check, width + 2) + pad(to_string(c.status), 7);
    if (!c.error.empty()) out += "[" + c.error + "] ";
    out += c.message + "\n";
    if (!c.metrics.empty()) {
      std::string line;
      for (const auto& [k, v] : c.metrics) {
        line += (line.empty() ? "" : "  ") + k + "=" + format_double(v);
      }
      out += std::string(width + 2, ' ') + line + "\n";
    }
    for (const auto& w : c.witnesses) out += std::string(width + 2, ' ') + "- " + w + "\n";
  }
  out += "summary: " + std::to_string(r.count(CheckStatus::Pass)) + " pass, " +
         std::to_string(r.count(CheckStatus::Fail)) + " fail, " +
         std::to_string(r.count(CheckStatus::Error)) + " error\n";
  return out;
}

}  // namespace detail

inline std::string serialize_report(const Report& r, ReportFormat format) {
  return format == ReportFormat::Machine ? detail::machine_report(r) : detail::human_report(r);
}

/// Reads a machine report back.
inline Report parse_report(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ScenarioError("ParseError", "/", e.what());
  }
  auto fail = [](const std::string& path, const std::string& what) -> void {
    throw ScenarioError("ReportError", path, what);
  };
  if (!doc.is_object() || doc.value("schema", "") != kReportSchema) {
    fail("/schema", std::string("expected schema '") + kReportSchema + "'");
  }
  Report r;
  try {
    r.scenario = doc.at("scenario").get<std::string>();
    const auto& checks = doc.at("checks");
    for (std::size_t i = 0; i < checks.size(); ++i) {
      const auto& j = checks.at(i);
      CheckOutcome c;
      c.check = j.at("check").get<std::string>();
      c.status = parse_status(j.at("status").get<std::string>());
      for (const auto& [k, v] : j.at("metrics").items()) c.metrics[k] = v.get<double>();
      c.witnesses = j.at("witnesses").get<std::vector<std::string>>();
      c.message = j.at("message").get<std::string>();
      if (j.contains("error")) c.error = j.at("error").get<std::string>();
      r.checks.push_back(std::move(c));
    }
  } catch (const nlohmann::json::exception& e) {
    fail("/checks", e.what());
  }
  return r;
}

}  // namespace qrecon
