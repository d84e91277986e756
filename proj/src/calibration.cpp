#include "rlvr/calibration.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <unordered_map>
#include <unordered_set>

#include "rlvr/rng.hpp"

namespace rlvr::calibration {

namespace {

int tier_index(DifficultyTier t) { return static_cast<int>(t); }

bool starts_with(const std::string& s, std::string_view prefix) { return s.rfind(prefix, 0) == 0; }

bool ends_with(const std::string& s, std::string_view suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

std::string join_ids(const std::vector<std::string>& ids, std::size_t limit = 10) {
  std::string out;
  for (std::size_t i = 0; i < ids.size() && i < limit; ++i) out += (i ? ", " : "") + ids[i];
  if (ids.size() > limit) out += ", ... (" + std::to_string(ids.size()) + " total)";
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------
// Records
// ---------------------------------------------------------------------------

Json to_json(const CalibrationRecord& record) {
  Json j = Json::object();
  j["problem_id"] = record.problem_id;
  j["model_id"] = record.model_id;
  j["passed"] = record.passed;
  if (record.inference_error) j["inference_error"] = true;
  return j;
}

CalibrationRecord record_from_json(const Json& j) {
  if (!j.is_object()) throw DataError("record must be a JSON object");
  try {
    CalibrationRecord r;
    r.problem_id = j.at("problem_id").get<std::string>();
    r.model_id = j.at("model_id").get<std::string>();
    r.passed = j.at("passed").get<bool>();
    if (auto it = j.find("inference_error"); it != j.end()) r.inference_error = it->get<bool>();
    return r;
  } catch (const Json::exception& e) {
    throw DataError(std::string("bad calibration record: ") + e.what());
  }
}

std::vector<CalibrationRecord> read_records(std::istream& in) {
  std::vector<CalibrationRecord> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      out.push_back(record_from_json(Json::parse(line)));
    } catch (const std::exception& e) {
      throw DataError("line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return out;
}

std::vector<CalibrationRecord> read_records(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  return read_records(in);
}

void write_records(const std::vector<CalibrationRecord>& records, std::ostream& out) {
  for (const auto& r : records) out << to_json(r).dump() << '\n';
}

// ---------------------------------------------------------------------------
// Tiers
// ---------------------------------------------------------------------------

DifficultyTier tier_for(int passes, int models, const Thresholds& thresholds) {
  if (models <= 0) throw PreconditionError("tier_for needs at least one model");
  auto needed = [models](double threshold) {
    return static_cast<int>(std::ceil(threshold * models - 1e-9));
  };
  if (passes >= needed(thresholds.easy)) return DifficultyTier::Easy;
  if (passes >= needed(thresholds.medium)) return DifficultyTier::Medium;
  return DifficultyTier::Hard;
}

const TierEntry* TierManifest::find(const std::string& problem_id) const {
  auto it = std::lower_bound(problems.begin(), problems.end(), problem_id,
                             [](const TierEntry& e, const std::string& id) { return e.problem_id < id; });
  return (it != problems.end() && it->problem_id == problem_id) ? &*it : nullptr;
}

TierManifest compute_tiers(const std::vector<CalibrationRecord>& records, const std::vector<std::string>& roster,
                           const Thresholds& thresholds) {
  if (roster.empty()) throw DataError("model roster is empty");
  if (!(thresholds.easy > thresholds.medium && thresholds.medium > 0.0 && thresholds.easy <= 1.0)) {
    throw ConfigError("thresholds must satisfy 0 < medium < easy <= 1");
  }
  std::unordered_map<std::string, std::size_t> model_index;
  for (const auto& m : roster) {
    if (!model_index.emplace(m, model_index.size()).second) throw DataError("model '" + m + "' listed twice in roster");
  }
  std::map<std::string, std::vector<int>> matrix;  // problem -> per-model state (-1 missing, 0, 1)
  for (const auto& r : records) {
    auto it = model_index.find(r.model_id);
    if (it == model_index.end()) throw DataError("record for model '" + r.model_id + "' not in roster");
    auto& row = matrix.try_emplace(r.problem_id, std::vector<int>(roster.size(), -1)).first->second;
    if (row[it->second] != -1) {
      throw DataError("duplicate record for (" + r.problem_id + ", " + r.model_id + ")");
    }
    row[it->second] = r.passed ? 1 : 0;
  }
  std::vector<std::string> gaps;
  TierManifest manifest;
  manifest.roster = roster;
  manifest.thresholds = thresholds;
  for (const auto& [problem, row] : matrix) {
    int passes = 0;
    for (std::size_t m = 0; m < row.size(); ++m) {
      if (row[m] == -1) gaps.push_back("(" + problem + ", " + roster[m] + ")");
      passes += row[m] == 1;
    }
    const int models = static_cast<int>(roster.size());
    manifest.problems.push_back(TierEntry{problem, passes, models, static_cast<double>(passes) / models,
                                          tier_for(passes, models, thresholds)});
  }
  if (!gaps.empty()) throw DataError("missing calibration records: " + join_ids(gaps));
  return manifest;
}

Json to_json(const TierManifest& manifest) {
  Json problems = Json::array();
  for (const auto& e : manifest.problems) {
    problems.push_back({{"problem_id", e.problem_id},
                        {"passes", e.passes},
                        {"models", e.models},
                        {"pass_rate", e.pass_rate},
                        {"tier", to_string(e.tier)}});
  }
  return {{"roster", manifest.roster},
          {"thresholds", {{"easy", manifest.thresholds.easy}, {"medium", manifest.thresholds.medium}}},
          {"problems", problems}};
}

TierManifest tier_manifest_from_json(const Json& j) {
  try {
    TierManifest m;
    m.roster = j.at("roster").get<std::vector<std::string>>();
    m.thresholds.easy = j.at("thresholds").at("easy").get<double>();
    m.thresholds.medium = j.at("thresholds").at("medium").get<double>();
    for (const auto& e : j.at("problems")) {
      m.problems.push_back(TierEntry{e.at("problem_id").get<std::string>(), e.at("passes").get<int>(),
                                     e.at("models").get<int>(), e.at("pass_rate").get<double>(),
                                     parse_difficulty_tier(e.at("tier").get<std::string>())});
    }
    std::sort(m.problems.begin(), m.problems.end(),
              [](const TierEntry& a, const TierEntry& b) { return a.problem_id < b.problem_id; });
    return m;
  } catch (const Json::exception& e) {
    throw DataError(std::string("bad tier manifest: ") + e.what());
  }
}

// ---------------------------------------------------------------------------
// Curation
// ---------------------------------------------------------------------------

CurationPlan default_plan(TaskFamily family, std::uint64_t seed) {
  CurationPlan plan;
  plan.seed = seed;
  plan.test_size = family == TaskFamily::Graph ? 500 : 200;
  for (std::size_t size : {100, 200, 500}) {
    plan.subsets.push_back({"easy_" + std::to_string(size), SubsetKind::Easy, size});
    plan.subsets.push_back({"mixed_" + std::to_string(size), SubsetKind::Mixed, size});
  }
  return plan;
}

std::array<std::size_t, 3> stratified_quota(std::size_t size) {
  std::array<std::size_t, 3> q{size / 3, size / 3, size / 3};
  for (std::size_t i = 0; i < size % 3; ++i) ++q[i];
  return q;
}

namespace {

using Pools = std::array<std::vector<std::string>, 3>;

std::vector<std::string> draw(const Pools& pools, SubsetKind kind, std::size_t size, std::uint64_t seed,
                              const std::string& name) {
  std::array<std::size_t, 3> quota{};
  if (kind == SubsetKind::Easy) {
    quota = {size, 0, 0};
  } else {
    quota = stratified_quota(size);
  }
  std::string shortfall;
  for (int t = 0; t < 3; ++t) {
    if (pools[t].size() < quota[t]) {
      shortfall += std::string(shortfall.empty() ? "" : "; ") + std::string(to_string(static_cast<DifficultyTier>(t))) +
                   " needs " + std::to_string(quota[t]) + ", has " + std::to_string(pools[t].size());
    }
  }
  if (!shortfall.empty()) throw DataError("subset '" + name + "' cannot be filled: " + shortfall);
  Rng rng(derive_seed(seed, name));
  std::vector<std::string> out;
  for (int t = 0; t < 3; ++t) {
    std::vector<std::string> pool = pools[t];
    rng.shuffle(std::span(pool));
    out.insert(out.end(), pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(quota[t]));
  }
  std::sort(out.begin(), out.end());
  return out;
}

Pools without(const Pools& pools, const std::vector<std::string>& taken) {
  const std::unordered_set<std::string> drop(taken.begin(), taken.end());
  Pools out;
  for (int t = 0; t < 3; ++t)
    for (const auto& id : pools[t])
      if (!drop.count(id)) out[t].push_back(id);
  return out;
}

}  // namespace

SplitManifest curate_splits(const TierManifest& manifest, const CurationPlan& plan) {
  std::set<std::string> names{"test"};
  for (const auto& s : plan.subsets) {
    if (s.size == 0) throw ConfigError("subset '" + s.name + "' has size 0");
    if (!names.insert(s.name).second) throw ConfigError("subset name '" + s.name + "' requested twice");
    if (plan.validation_fraction > 0 && !names.insert(s.name + "_val").second) {
      throw ConfigError("subset name '" + s.name + "_val' requested twice");
    }
  }
  if (plan.validation_fraction < 0 || plan.validation_fraction >= 1) {
    throw ConfigError("validation fraction must lie in [0, 1)");
  }
  Pools pools;
  for (const auto& e : manifest.problems) pools[tier_index(e.tier)].push_back(e.problem_id);
  for (auto& p : pools) std::sort(p.begin(), p.end());

  SplitManifest splits;
  splits.seed = plan.seed;
  const auto test = draw(pools, SubsetKind::Mixed, plan.test_size, plan.seed, "test");
  splits.subsets["test"] = test;
  const Pools remainder = without(pools, test);
  for (const auto& s : plan.subsets) {
    auto ids = draw(remainder, s.kind, s.size, plan.seed, s.name);
    if (plan.validation_fraction > 0) {
      const auto val_size = static_cast<std::size_t>(std::llround(static_cast<double>(s.size) * plan.validation_fraction));
      if (val_size > 0) {
        splits.subsets[s.name + "_val"] = draw(without(remainder, ids), s.kind, val_size, plan.seed, s.name + "_val");
      }
    }
    splits.subsets[s.name] = std::move(ids);
  }
  return splits;
}

Json to_json(const SplitManifest& splits) {
  Json subsets = Json::object();
  for (const auto& [name, ids] : splits.subsets) subsets[name] = ids;
  return {{"seed", splits.seed}, {"subsets", subsets}};
}

SplitManifest split_manifest_from_json(const Json& j) {
  try {
    SplitManifest s;
    s.seed = j.at("seed").get<std::uint64_t>();
    for (const auto& [name, ids] : j.at("subsets").items()) s.subsets[name] = ids.get<std::vector<std::string>>();
    return s;
  } catch (const Json::exception& e) {
    throw DataError(std::string("bad split manifest: ") + e.what());
  }
}

// ---------------------------------------------------------------------------
// Verification
// ---------------------------------------------------------------------------

bool ManifestReport::ok() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed; });
}

ManifestReport verify_manifest(const SplitManifest& splits, const TierManifest& manifest) {
  ManifestReport report;
  auto add = [&](std::string name, bool passed, std::string detail) {
    report.checks.push_back({std::move(name), passed, std::move(detail)});
  };

  const auto test_it = splits.subsets.find("test");
  add("test_present", test_it != splits.subsets.end(), test_it == splits.subsets.end() ? "no test subset" : "");
  const std::vector<std::string> empty;
  const auto& test = test_it != splits.subsets.end() ? test_it->second : empty;
  const std::unordered_set<std::string> test_ids(test.begin(), test.end());

  for (const auto& [name, ids] : splits.subsets) {
    std::vector<std::string> unknown, repeated;
    std::unordered_set<std::string> seen;
    std::array<std::size_t, 3> counts{};
    for (const auto& id : ids) {
      if (!seen.insert(id).second) repeated.push_back(id);
      const auto* entry = manifest.find(id);
      if (!entry) {
        unknown.push_back(id);
        continue;
      }
      ++counts[tier_index(entry->tier)];
    }
    add(name + ":known_ids", unknown.empty(), unknown.empty() ? "" : "unknown ids: " + join_ids(unknown));
    add(name + ":unique_ids", repeated.empty(), repeated.empty() ? "" : "repeated ids: " + join_ids(repeated));

    const std::string counts_text = "tier counts " + std::to_string(counts[0]) + "/" + std::to_string(counts[1]) + "/" +
                                    std::to_string(counts[2]);
    if (name == "test" || starts_with(name, "mixed")) {
      const double third = static_cast<double>(ids.size()) / 3.0;
      bool balanced = true;
      for (auto c : counts) balanced = balanced && std::abs(static_cast<double>(c) - third) <= 1.0;
      add(name + ":stratified", balanced, counts_text);
    } else if (starts_with(name, "easy")) {
      add(name + ":easy_only", counts[1] == 0 && counts[2] == 0, counts_text);
    }

    if (name != "test") {
      std::vector<std::string> overlap;
      for (const auto& id : ids)
        if (test_ids.count(id)) overlap.push_back(id);
      add(name + ":disjoint_from_test", overlap.empty(), overlap.empty() ? "" : "shared with test: " + join_ids(overlap));
    }
    if (ends_with(name, "_val")) {
      const auto train = splits.subsets.find(name.substr(0, name.size() - 4));
      if (train != splits.subsets.end()) {
        const std::unordered_set<std::string> train_ids(train->second.begin(), train->second.end());
        std::vector<std::string> overlap;
        for (const auto& id : ids)
          if (train_ids.count(id)) overlap.push_back(id);
        add(name + ":disjoint_from_train", overlap.empty(),
            overlap.empty() ? "" : "shared with " + train->first + ": " + join_ids(overlap));
      }
    }
  }
  return report;
}

Json to_json(const ManifestReport& report) {
  Json checks = Json::array();
  for (const auto& c : report.checks) checks.push_back({{"name", c.name}, {"passed", c.passed}, {"detail", c.detail}});
  return {{"ok", report.ok()}, {"checks", checks}};
}

}  // namespace rlvr::calibration
