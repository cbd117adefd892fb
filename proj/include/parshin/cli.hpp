#pragma once

// Job dispatch behind the command-line tool. A job is a JSON object such as
// {"command": "classgroup", "scheme": "p1", "q": 3, "divisor": "[0]+[inf]",
// "n": 2}; its report is a JSON object with "schema": 1, the echoed input,
// the result and the concept anchors, plus a timing field that is excluded
// from every comparison.

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

namespace parshin::cli {

using Json = nlohmann::ordered_json;

inline constexpr int kSchema = 1;

enum ExitCode : int { kOk = 0, kFailure = 1, kNotStabilized = 2, kUnsupported = 3 };

struct RunReport {
  Json payload;  // everything except timing
  double seconds = 0.0;
  int exit_code = kOk;
};

// Validates and dispatches; never throws for module errors (they become an
// "error" object with the machine-readable code and the matching exit code).
RunReport run(const Json& job);

// Batch mode: jobs run concurrently, reports are assembled in input order.
std::vector<RunReport> run_batch(const std::vector<Json>& jobs);

std::string render_json(const RunReport& r, bool with_timing = true);
std::string render_markdown(const RunReport& r);

struct RegressionSummary {
  std::size_t entries = 0;
  std::size_t passed = 0;
  std::vector<std::string> mismatches;  // "file: key, key"
};

// Replays every golden entry {"job": ..., "report": ...} in the directory.
// Throws GOLDEN_MISMATCH naming the diverging keys.
RegressionSummary regression_suite(const std::filesystem::path& dir);
// Writes (or overwrites) a golden entry for the job.
void write_golden(const std::filesystem::path& file, const Json& job);

// Top-level keys whose values differ (union of both key sets).
std::vector<std::string> diff_keys(const Json& a, const Json& b);

}  // namespace parshin::cli
