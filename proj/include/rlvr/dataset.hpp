#pragma once

#include <filesystem>
#include <iosfwd>
#include <vector>

#include "json.hpp"
#include "rlvr/problem.hpp"

namespace rlvr {

using Json = nlohmann::json;

inline constexpr int kSchemaVersion = 1;

Json to_json(const GroundTruth& truth);
GroundTruth truth_from_json(const Json& j);

Json to_json(const ProblemSpec& spec);
ProblemSpec spec_from_json(const Json& j);

Json to_json(const ComplexityMeta& meta);
ComplexityMeta complexity_from_json(const Json& j, TaskFamily family);

/// One dataset record. `include_truth = false` drops the truth field.
Json to_json(const ProblemInstance& instance, bool include_truth = true);
ProblemInstance instance_from_json(const Json& j);

struct ReadOptions {
  /// Re-solve every spec and compare with the stored truth.
  bool resolve_truth = true;
};

/// One JSON object per line. Throws DataError on duplicate ids.
std::size_t write_dataset(const std::vector<ProblemInstance>& instances, std::ostream& out);
std::size_t write_dataset(const std::vector<ProblemInstance>& instances, const std::filesystem::path& path);

/// Parses and re-validates every line; errors cite the 1-based line number.
std::vector<ProblemInstance> read_dataset(std::istream& in, const ReadOptions& options = {});
std::vector<ProblemInstance> read_dataset(const std::filesystem::path& path, const ReadOptions& options = {});

}  // namespace rlvr
