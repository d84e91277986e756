#pragma once

#include <chrono>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "rlvr/calibration.hpp"
#include "rlvr/scoring.hpp"

namespace rlvr::harness {

struct Decoding {
  double temperature = 0.0;
  int max_tokens = 4096;
};

struct ModelOutput {
  std::string text;
  bool truncated = false;
};

/// The model endpoint failed; the harness retries these.
class TransportError : public IoError {
 public:
  using IoError::IoError;
};

/// One completion per call; implementations keep no state between calls.
class ModelClient {
 public:
  virtual ~ModelClient() = default;
  virtual const std::string& model_id() const = 0;
  virtual ModelOutput complete(const std::string& prompt, const Decoding& decoding) = 0;
};

/// Answers every known prompt with its canonical, well-formatted truth.
class OracleClient : public ModelClient {
 public:
  OracleClient(std::string model_id, const std::vector<ProblemInstance>& problems);
  const std::string& model_id() const override { return id_; }
  ModelOutput complete(const std::string& prompt, const Decoding& decoding) override;

 private:
  std::string id_;
  std::unordered_map<std::string, std::string> answers_;
};

/// Always returns an empty completion.
class EmptyClient : public ModelClient {
 public:
  explicit EmptyClient(std::string model_id) : id_(std::move(model_id)) {}
  const std::string& model_id() const override { return id_; }
  ModelOutput complete(const std::string&, const Decoding&) override { return {}; }

 private:
  std::string id_;
};

/// Replays fixed outputs keyed by prompt; unknown prompts get `fallback`.
class ScriptedClient : public ModelClient {
 public:
  ScriptedClient(std::string model_id, std::unordered_map<std::string, ModelOutput> script, ModelOutput fallback = {});
  const std::string& model_id() const override { return id_; }
  ModelOutput complete(const std::string& prompt, const Decoding& decoding) override;

 private:
  std::string id_;
  std::unordered_map<std::string, ModelOutput> script_;
  ModelOutput fallback_;
};

/// Deterministic pseudo-model. Each prompt has a latent difficulty in [0, 1)
/// (mostly shared across models, partly per model) and the client answers
/// correctly when it is below `skill`; a hash of (model id, prompt) picks
/// the format. Wrong answers, rambling and truncation fill the rest.
class SkillClient : public ModelClient {
 public:
  SkillClient(std::string model_id, double skill, const std::vector<ProblemInstance>& problems);
  const std::string& model_id() const override { return id_; }
  ModelOutput complete(const std::string& prompt, const Decoding& decoding) override;

 private:
  std::string id_;
  double skill_;
  std::unordered_map<std::string, const ProblemInstance*> by_prompt_;
};

struct EvalRunConfig {
  std::vector<ModelClient*> roster;
  Decoding decoding;
  /// Test evaluation requires greedy decoding (temperature 0).
  bool test_mode = true;
  std::size_t concurrency = 4;
  int max_attempts = 3;
  std::chrono::milliseconds initial_backoff{200};
  /// Stop after this many (problem, model) evaluations; rerun to resume.
  std::optional<std::size_t> max_calls;
  /// Records are appended here while running and rewritten in canonical
  /// (problem, roster) order at the end. Existing records are resumed.
  std::optional<std::filesystem::path> records_path;
  /// Raw completions go to `{cache_dir}/{run_id}/{model_id}/{problem_id}.json`.
  std::optional<std::filesystem::path> cache_dir;
  std::string run_id = "run";
  ScoreOptions score;
};

struct EvalRecord {
  std::string problem_id;
  std::string model_id;
  bool passed = false;
  rewards::TelemetryCategory category = rewards::TelemetryCategory::ExtractionFailure;
  bool inference_error = false;
  double reward = 0.0;
  friend bool operator==(const EvalRecord&, const EvalRecord&) = default;
};

Json to_json(const EvalRecord& record);
EvalRecord eval_record_from_json(const Json& j);
std::vector<EvalRecord> read_eval_records(const std::filesystem::path& path);
calibration::CalibrationRecord to_calibration(const EvalRecord& record);

struct RateCell {
  std::size_t problems = 0;
  std::size_t passed = 0;
  double rate() const { return problems ? static_cast<double>(passed) / static_cast<double>(problems) : 0.0; }
};

struct EvalReport {
  std::map<std::pair<std::string, std::string>, RateCell> by_family;  // (model, family)
  std::map<std::pair<std::string, std::string>, RateCell> by_tier;    // (model, tier)
  std::map<std::pair<std::string, std::string>, RateCell> by_query;   // (model, AL/AO/RL/RO)
  std::map<std::string, std::size_t> categories;                      // category -> count
  std::size_t total_records = 0;
};

/// Aggregate records; `tiers` adds per-tier accuracy when given.
EvalReport build_report(const std::vector<EvalRecord>& records, const std::vector<ProblemInstance>& problems,
                        const calibration::TierManifest* tiers = nullptr);

/// "text", "json" or "csv" (columns model_id,family,problems,passed,pass_rate).
/// Throws ConfigError for other formats.
std::string render_report(const EvalReport& report, std::string_view format);

struct EvalOutcome {
  std::vector<EvalRecord> records;  // canonical order, including resumed ones
  EvalReport report;
  bool complete = true;
  std::size_t evaluated = 0;  // pairs evaluated by this call
  std::size_t pending = 0;    // pairs left for a resume
};

EvalOutcome run_eval(const std::vector<ProblemInstance>& problems, const EvalRunConfig& config);

/// Replace characters outside [A-Za-z0-9._-] so ids are safe path parts.
std::string sanitize_path_part(std::string_view text);

}  // namespace rlvr::harness
