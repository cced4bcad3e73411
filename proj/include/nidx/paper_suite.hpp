#pragma once

#include "nidx/io.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace nidx {

enum class ClaimStatus { pass, fail, recorded };
std::string to_string(ClaimStatus s);

struct ClaimResult {
  std::string claim_id;
  int criterion = 0;       // acceptance criterion this check belongs to
  std::string reference;   // the statement being checked
  std::vector<double> computed;
  std::string expected;    // bound or value, human readable
  double margin = 0.0;     // signed slack against the exact bound
  double tolerance = 0.0;  // pass iff margin >= -tolerance
  ClaimStatus status = ClaimStatus::fail;
  std::vector<std::string> details;
};

struct SuiteConfig {
  std::uint64_t seed = 1;
  double budget_scale = 1.0;
  /// Comma-separated tokens; a token selects every claim whose id starts
  /// with it. Empty selects everything.
  std::string filter;
};

struct ClaimInfo {
  std::string id;
  int criterion;
  std::string reference;
};

std::vector<ClaimInfo> registered_claims();

/// Runs the selected claims; results are ordered by claim id. Throws
/// ValidationError("unknown claim id ...") when a filter token selects nothing.
std::vector<ClaimResult> run_suite(const SuiteConfig& cfg);

Json suite_to_json(const SuiteConfig& cfg, const std::vector<ClaimResult>& results);
std::string suite_to_csv(const std::vector<ClaimResult>& results);
bool suite_passed(const std::vector<ClaimResult>& results);

}  // namespace nidx
