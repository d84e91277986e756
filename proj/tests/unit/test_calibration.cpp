#include <set>
#include <sstream>

#include "doctest.h"
#include "rlvr/calibration.hpp"

using namespace rlvr;
using namespace rlvr::calibration;

namespace {

// Tier from first principles: pass_rate = k/n compared exactly with p/100.
DifficultyTier reference_tier(int passes, int models, int easy_pct = 67, int medium_pct = 34) {
  if (100 * passes >= easy_pct * models) return DifficultyTier::Easy;
  if (100 * passes >= medium_pct * models) return DifficultyTier::Medium;
  return DifficultyTier::Hard;
}

std::string pid(int i) {
  std::string s = std::to_string(i);
  return "p-" + std::string(4 - s.size(), '0') + s;
}

// n problems over `models` models; problem i passes for (i * 7) % (models+1) models.
std::vector<CalibrationRecord> synthetic_records(int n, int models) {
  std::vector<CalibrationRecord> out;
  for (int i = 0; i < n; ++i) {
    const int passes = (i * 7) % (models + 1);
    for (int m = 0; m < models; ++m) out.push_back({pid(i), "m" + std::to_string(m), m < passes, false});
  }
  return out;
}

std::vector<std::string> roster_of(int models) {
  std::vector<std::string> r;
  for (int m = 0; m < models; ++m) r.push_back("m" + std::to_string(m));
  return r;
}

TierManifest balanced_manifest(int per_tier) {
  TierManifest m;
  m.roster = {"a", "b", "c"};
  int id = 0;
  for (auto tier : {DifficultyTier::Easy, DifficultyTier::Medium, DifficultyTier::Hard}) {
    for (int i = 0; i < per_tier; ++i) {
      TierEntry e;
      e.problem_id = pid(id++);
      e.models = 3;
      e.passes = tier == DifficultyTier::Easy ? 3 : tier == DifficultyTier::Medium ? 1 : 0;
      e.pass_rate = e.passes / 3.0;
      e.tier = tier;
      m.problems.push_back(e);
    }
  }
  std::sort(m.problems.begin(), m.problems.end(),
            [](const TierEntry& a, const TierEntry& b) { return a.problem_id < b.problem_id; });
  return m;
}

}  // namespace

TEST_SUITE("calibration") {
  TEST_CASE("tier boundaries on 100 models") {
    CHECK(tier_for(67, 100) == DifficultyTier::Easy);
    CHECK(tier_for(66, 100) == DifficultyTier::Medium);
    CHECK(tier_for(34, 100) == DifficultyTier::Medium);
    CHECK(tier_for(33, 100) == DifficultyTier::Hard);
    CHECK(tier_for(100, 100) == DifficultyTier::Easy);
    CHECK(tier_for(0, 100) == DifficultyTier::Hard);
  }

  TEST_CASE("tiers match exact rational comparison for every roster size up to 100") {
    for (int n = 1; n <= 100; ++n)
      for (int k = 0; k <= n; ++k) REQUIRE(tier_for(k, n) == reference_tier(k, n));
  }

  TEST_CASE("compute_tiers counts passes per problem") {
    const auto manifest = compute_tiers(synthetic_records(50, 10), roster_of(10));
    REQUIRE(manifest.problems.size() == 50);
    for (const auto& e : manifest.problems) {
      const int i = std::stoi(e.problem_id.substr(2));
      CHECK(e.passes == (i * 7) % 11);
      CHECK(e.models == 10);
      CHECK(e.tier == reference_tier(e.passes, 10));
    }
    CHECK(manifest.find(pid(3)) != nullptr);
    CHECK(manifest.find("nope") == nullptr);
  }

  TEST_CASE("compute_tiers rejects incomplete or inconsistent records") {
    auto records = synthetic_records(5, 3);
    CHECK_THROWS_AS(compute_tiers(records, {}), DataError);
    CHECK_THROWS_AS(compute_tiers(records, {"m0", "m0", "m1"}), DataError);
    CHECK_THROWS_AS(compute_tiers(records, {"m0", "m1"}), DataError);
    auto missing = records;
    missing.pop_back();
    CHECK_THROWS_AS(compute_tiers(missing, roster_of(3)), DataError);
    auto dup = records;
    dup.push_back(records.front());
    CHECK_THROWS_AS(compute_tiers(dup, roster_of(3)), DataError);
  }

  TEST_CASE("inference errors count as failures") {
    std::vector<CalibrationRecord> records = {{"p", "a", false, true}, {"p", "b", true, false}, {"p", "c", true, false}};
    const auto m = compute_tiers(records, {"a", "b", "c"});
    CHECK(m.problems[0].passes == 2);
    CHECK(m.problems[0].tier == DifficultyTier::Medium);
  }

  TEST_CASE("records and manifests round-trip through JSON") {
    const auto records = synthetic_records(4, 2);
    std::stringstream buf;
    write_records(records, buf);
    CHECK(read_records(buf) == records);
    const auto m = compute_tiers(records, roster_of(2));
    const auto back = tier_manifest_from_json(to_json(m));
    CHECK(back.roster == m.roster);
    REQUIRE(back.problems.size() == m.problems.size());
    for (std::size_t i = 0; i < m.problems.size(); ++i) {
      CHECK(back.problems[i].problem_id == m.problems[i].problem_id);
      CHECK(back.problems[i].tier == m.problems[i].tier);
    }
  }

  TEST_CASE("stratified quotas") {
    CHECK(stratified_quota(100) == std::array<std::size_t, 3>{34, 33, 33});
    CHECK(stratified_quota(200) == std::array<std::size_t, 3>{67, 67, 66});
    CHECK(stratified_quota(500) == std::array<std::size_t, 3>{167, 167, 166});
  }

  TEST_CASE("default plan curation") {
    const auto manifest = balanced_manifest(800);
    for (auto family : {TaskFamily::Counting, TaskFamily::Graph}) {
      const auto plan = default_plan(family, 3);
      const auto splits = curate_splits(manifest, plan);
      CHECK(splits.subsets.at("test").size() == (family == TaskFamily::Graph ? 500u : 200u));
      const std::set<std::string> test(splits.subsets.at("test").begin(), splits.subsets.at("test").end());
      for (const auto& [name, ids] : splits.subsets) {
        CHECK(std::is_sorted(ids.begin(), ids.end()));
        CHECK(std::set<std::string>(ids.begin(), ids.end()).size() == ids.size());
        if (name == "test") continue;
        for (const auto& id : ids) CHECK(test.count(id) == 0);
        std::array<std::size_t, 3> counts{};
        for (const auto& id : ids) ++counts[static_cast<int>(manifest.find(id)->tier)];
        if (name.rfind("easy_", 0) == 0) CHECK(counts[0] == ids.size());
        if (name.rfind("mixed_", 0) == 0) {
          for (auto c : counts) CHECK(std::abs(static_cast<long>(c) - static_cast<long>(ids.size() / 3)) <= 1);
        }
      }
      CHECK(verify_manifest(splits, manifest).ok());
      CHECK(to_json(curate_splits(manifest, plan)) == to_json(splits));
      auto other = plan;
      other.seed = 4;
      CHECK(curate_splits(manifest, other).subsets.at("mixed_100") != splits.subsets.at("mixed_100"));
    }
  }

  TEST_CASE("validation companions are disjoint from their training subset") {
    auto plan = default_plan(TaskFamily::Counting, 1);
    plan.validation_fraction = 0.1;
    const auto manifest = balanced_manifest(800);
    const auto splits = curate_splits(manifest, plan);
    REQUIRE(splits.subsets.count("mixed_200_val"));
    CHECK(splits.subsets.at("mixed_200_val").size() == 20);
    const auto& train = splits.subsets.at("mixed_200");
    for (const auto& id : splits.subsets.at("mixed_200_val"))
      CHECK(std::find(train.begin(), train.end(), id) == train.end());
    CHECK(verify_manifest(splits, manifest).ok());
  }

  TEST_CASE("curation errors") {
    const auto manifest = balanced_manifest(50);
    CHECK_THROWS_AS(curate_splits(manifest, default_plan(TaskFamily::Graph)), DataError);
    CurationPlan plan;
    plan.test_size = 30;
    plan.subsets = {{"a", SubsetKind::Easy, 5}, {"a", SubsetKind::Mixed, 5}};
    CHECK_THROWS_AS(curate_splits(manifest, plan), ConfigError);
    plan.subsets = {{"a", SubsetKind::Easy, 0}};
    CHECK_THROWS_AS(curate_splits(manifest, plan), ConfigError);
  }

  TEST_CASE("verify_manifest flags tampering") {
    const auto manifest = balanced_manifest(800);
    auto splits = curate_splits(manifest, default_plan(TaskFamily::Spatial));
    splits.subsets["easy_100"].push_back(splits.subsets["test"].front());
    CHECK_FALSE(verify_manifest(splits, manifest).ok());
    splits = curate_splits(manifest, default_plan(TaskFamily::Spatial));
    splits.subsets["easy_100"].back() = "unknown";
    CHECK_FALSE(verify_manifest(splits, manifest).ok());
    CHECK(split_manifest_from_json(to_json(splits)).subsets == splits.subsets);
  }
}
