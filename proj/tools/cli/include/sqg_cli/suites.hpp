#pragma once

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "sqg/inequalities.hpp"
#include "sqg_cli/config.hpp"

namespace sqg::cli {

using Json = nlohmann::ordered_json;

inline constexpr int kReportFormatVersion = 1;

/// One hard invariant of a suite: pass iff value <= limit (or the stated relation).
struct Check {
  std::string name;
  double value = 0.0;
  double limit = 0.0;
  bool pass = true;
  std::string detail;
};

struct SuiteResult {
  std::string suite;
  std::vector<RatioReport> reports;
  std::vector<Check> checks;
  Json summary = Json::object();

  bool pass() const;
  const Check* find_check(const std::string& name) const;
  const RatioReport* find_report(const std::string& name) const;
};

/// Thrown for an unknown suite name.
class UnknownSuite : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

const std::vector<std::string>& suite_names();

/// Reads the suite's keys from cfg (recording defaults), checks that no unknown
/// keys remain, then runs it.
SuiteResult run_suite(const std::string& name, Config& cfg);

Json to_json(const RatioReport& report);
Json to_json(const SuiteResult& result);
/// Concatenated CSV of all reports, first column "report".
void write_suite_csv(std::ostream& os, const SuiteResult& result);

/// JSON number, or the string "inf"/"-inf"/"nan" for non-finite values.
Json number(double v);

}  // namespace sqg::cli
