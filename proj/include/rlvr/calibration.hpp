#pragma once

#include <array>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "rlvr/dataset.hpp"

namespace rlvr::calibration {

struct CalibrationRecord {
  std::string problem_id;
  std::string model_id;
  bool passed = false;
  bool inference_error = false;
  friend bool operator==(const CalibrationRecord&, const CalibrationRecord&) = default;
};

Json to_json(const CalibrationRecord& record);
CalibrationRecord record_from_json(const Json& j);
std::vector<CalibrationRecord> read_records(std::istream& in);
std::vector<CalibrationRecord> read_records(const std::filesystem::path& path);
void write_records(const std::vector<CalibrationRecord>& records, std::ostream& out);

/// Easy when pass_rate >= easy, Medium when >= medium, else Hard.
struct Thresholds {
  double easy = 0.67;
  double medium = 0.34;
};

/// Tier of `passes` successes out of `models`, with the thresholds compared
/// on pass counts so that 67 of 100 is exactly Easy.
DifficultyTier tier_for(int passes, int models, const Thresholds& thresholds = {});

struct TierEntry {
  std::string problem_id;
  int passes = 0;
  int models = 0;
  double pass_rate = 0.0;
  DifficultyTier tier = DifficultyTier::Hard;
};

struct TierManifest {
  std::vector<std::string> roster;
  Thresholds thresholds;
  std::vector<TierEntry> problems;  // sorted by problem id

  const TierEntry* find(const std::string& problem_id) const;
};

/// Throws DataError for an empty or duplicated roster, unknown models,
/// duplicate (problem, model) pairs, or missing pairs (listed).
TierManifest compute_tiers(const std::vector<CalibrationRecord>& records, const std::vector<std::string>& roster,
                           const Thresholds& thresholds = {});

Json to_json(const TierManifest& manifest);
TierManifest tier_manifest_from_json(const Json& j);

enum class SubsetKind { Easy, Mixed };

struct SubsetRequest {
  std::string name;
  SubsetKind kind = SubsetKind::Mixed;
  std::size_t size = 0;
};

struct CurationPlan {
  std::size_t test_size = 200;
  std::vector<SubsetRequest> subsets;
  /// When positive, each subset gets a disjoint `{name}_val` companion of
  /// round(size * fraction) problems.
  double validation_fraction = 0.0;
  std::uint64_t seed = 0;
};

/// Test 200 (500 for graphs) plus easy/mixed subsets of 100, 200 and 500.
CurationPlan default_plan(TaskFamily family, std::uint64_t seed = 0);

/// Per-tier quota of a stratified draw: size/3 each, remainder to Easy
/// first, then Medium.
std::array<std::size_t, 3> stratified_quota(std::size_t size);

struct SplitManifest {
  std::uint64_t seed = 0;
  std::map<std::string, std::vector<std::string>> subsets;  // includes "test"; ids sorted
};

/// Test set first (stratified), then each subset independently from the
/// remainder. Throws ConfigError for duplicate names and DataError for
/// tier shortfalls.
SplitManifest curate_splits(const TierManifest& manifest, const CurationPlan& plan);

Json to_json(const SplitManifest& splits);
SplitManifest split_manifest_from_json(const Json& j);

struct CheckResult {
  std::string name;
  bool passed = true;
  std::string detail;
};

struct ManifestReport {
  std::vector<CheckResult> checks;
  bool ok() const;
};

/// Re-checks disjointness, stratification, easy-tier purity and id validity.
ManifestReport verify_manifest(const SplitManifest& splits, const TierManifest& manifest);

Json to_json(const ManifestReport& report);

}  // namespace rlvr::calibration
