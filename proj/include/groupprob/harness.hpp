#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace groupprob {

inline constexpr const char* kToolVersion = "0.1.0";

/// Result of running one named check on a JSON scenario.
struct CheckOutcome {
  /// "satisfied", "violated" or "undecided".
  std::string status;
  nlohmann::json report;
};

/// Checks: kk, sharpness, levy, tail, mont, word-norm, refute-f2.
/// `seed` is used by checks that sample when the scenario gives none.
CheckOutcome run_check(std::string_view check, const nlohmann::json& scenario, std::uint64_t seed = 0);
const std::vector<std::string>& check_names();

struct ManifestEntry {
  std::string id;
  std::string check;
  /// Scenario file; empty when `inline_scenario` is used.
  std::filesystem::path path;
  nlohmann::json inline_scenario;
  /// Merged over the scenario (JSON merge patch).
  nlohmann::json overrides = nlohmann::json::object();
};

struct BatchManifest {
  std::vector<ManifestEntry> scenarios;
  std::uint64_t seed = 0;
  std::filesystem::path output_dir = ".";
};

/// Relative paths resolve against `base_dir`.
BatchManifest manifest_from_json(const nlohmann::json& j, const std::filesystem::path& base_dir = ".");
BatchManifest load_manifest(const std::filesystem::path& path);

struct LedgerRecord {
  std::string id;
  std::string check;
  /// satisfied | violated | undecided | error
  std::string status;
  nlohmann::json report;
  std::string error;
  std::string timestamp;
  std::string tool_version = kToolVersion;
  std::string input_digest;

  nlohmann::json to_json() const;
  static LedgerRecord from_json(const nlohmann::json& j);
};

struct BatchResult {
  std::vector<LedgerRecord> records;
  std::filesystem::path ledger_path;
  /// 0 all satisfied, 1 infrastructure error or undecided, 2 some violation.
  int exit_code = 0;
};

/// Runs every scenario (concurrently) and writes `output_dir/ledger.jsonl`
/// in manifest order.
BatchResult run_batch(const BatchManifest& manifest);

int exit_code_for(const std::vector<LedgerRecord>& records);

std::vector<LedgerRecord> read_ledger(const std::filesystem::path& path);

/// Format: "json", "csv" or "markdown". Rows are sorted by id.
std::string emit_summary(const std::vector<LedgerRecord>& records, std::string_view format);

std::string sha256_hex(std::string_view bytes);

}  // namespace groupprob
