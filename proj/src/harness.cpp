#include "rlvr/harness.hpp"

#include <algorithm>
#include <atomic>
#include <fstream>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

#include "rlvr/rng.hpp"

namespace rlvr::harness {

using parsing::render_answer;

// ---------------------------------------------------------------------------
// Mock clients
// ---------------------------------------------------------------------------

OracleClient::OracleClient(std::string model_id, const std::vector<ProblemInstance>& problems)
    : id_(std::move(model_id)) {
  for (const auto& p : problems) answers_[p.prompt] = render_answer(p.truth, p.family);
}

ModelOutput OracleClient::complete(const std::string& prompt, const Decoding&) {
  auto it = answers_.find(prompt);
  return {it == answers_.end() ? std::string() : it->second, false};
}

ScriptedClient::ScriptedClient(std::string model_id, std::unordered_map<std::string, ModelOutput> script,
                               ModelOutput fallback)
    : id_(std::move(model_id)), script_(std::move(script)), fallback_(std::move(fallback)) {}

ModelOutput ScriptedClient::complete(const std::string& prompt, const Decoding&) {
  auto it = script_.find(prompt);
  return it == script_.end() ? fallback_ : it->second;
}

SkillClient::SkillClient(std::string model_id, double skill, const std::vector<ProblemInstance>& problems)
    : id_(std::move(model_id)), skill_(skill) {
  for (const auto& p : problems) by_prompt_[p.prompt] = &p;
}

namespace {

GroundTruth perturb(const GroundTruth& truth) {
  return std::visit(
      [](const auto& t) -> GroundTruth {
        using T = std::decay_t<decltype(t)>;
        if constexpr (std::is_same_v<T, IntScalar>) {
          return IntScalar{t.value + 1};
        } else if constexpr (std::is_same_v<T, RealScalar>) {
          return RealScalar{t.value + 1.0, t.precision};
        } else if constexpr (std::is_same_v<T, VertexSet> || std::is_same_v<T, NodeSequence>) {
          T out = t;
          if (out.nodes.empty()) {
            out.nodes.push_back(0);
          } else {
            out.nodes.pop_back();
          }
          return out;
        } else if constexpr (std::is_same_v<T, EdgeSet>) {
          EdgeSet out = t;
          if (out.edges.empty()) {
            out.edges.emplace_back(0, 1);
          } else {
            out.edges.pop_back();
          }
          return out;
        } else if constexpr (std::is_same_v<T, Partition>) {
          return Partition{t.second.empty() ? t.first : t.second, {}};
        } else if constexpr (std::is_same_v<T, Coordinate>) {
          return Coordinate{t.x + 1.0, t.y};
        } else if constexpr (std::is_same_v<T, Orientation>) {
          return Orientation{t.token == "North" ? "South" : "North"};
        } else {
          return RelativeOrientation{t.token == "same" ? "opposite" : "same"};
        }
      },
      truth);
}

std::uint64_t text_hash(std::string_view a, std::string_view b) {
  std::uint64_t h = 1469598103934665603ULL;
  for (char c : a) h = (h ^ static_cast<unsigned char>(c)) * 1099511628211ULL;
  h = (h ^ 0x1f) * 1099511628211ULL;
  for (char c : b) h = (h ^ static_cast<unsigned char>(c)) * 1099511628211ULL;
  return h;
}

std::string formatted(const GroundTruth& value, TaskFamily family, double style) {
  const std::string canonical = render_answer(value, family);
  if (family == TaskFamily::Counting) {
    const std::string number = canonical.substr(8);
    if (style < 0.7) return "Let me work through the steps.\nApplying the filters in order.\n" + canonical;
    if (style < 0.85) return "After applying every step, the answer is " + number + ".";
    return "Working it out.\n" + number;
  }
  if (style < 0.6) return "Here is my answer.\n```json\n" + canonical + "\n```";
  if (style < 0.9) return "Reasoning about the structure. " + canonical;
  const auto payload = Json::parse(canonical).at("answer");
  return "Final answer:\n" + (payload.is_string() ? payload.get<std::string>() : payload.dump());
}

}  // namespace

ModelOutput SkillClient::complete(const std::string& prompt, const Decoding&) {
  auto it = by_prompt_.find(prompt);
  if (it == by_prompt_.end()) return {};
  const ProblemInstance& p = *it->second;
  Rng rng(text_hash(id_, prompt));
  // shared per-problem difficulty plus a smaller per-model component
  const double difficulty = 0.75 * Rng(text_hash("", prompt)).uniform01() + 0.25 * rng.uniform01();
  const double style = rng.uniform01();
  if (difficulty < skill_) return {formatted(p.truth, p.family, style), false};
  const double failure = rng.uniform01();
  if (failure < 0.5) return {formatted(perturb(p.truth), p.family, style), false};
  if (failure < 0.8) return {"I am not sure how to approach this problem, so I will stop here.", false};
  return {"Let me enumerate every case carefully. Case 1 ... case 2 ...", true};
}

// ---------------------------------------------------------------------------
// Records
// ---------------------------------------------------------------------------

Json to_json(const EvalRecord& r) {
  Json j = Json::object();
  j["problem_id"] = r.problem_id;
  j["model_id"] = r.model_id;
  j["passed"] = r.passed;
  j["category"] = rewards::to_string(r.category);
  j["inference_error"] = r.inference_error;
  j["reward"] = r.reward;
  return j;
}

EvalRecord eval_record_from_json(const Json& j) {
  try {
    EvalRecord r;
    r.problem_id = j.at("problem_id").get<std::string>();
    r.model_id = j.at("model_id").get<std::string>();
    r.passed = j.at("passed").get<bool>();
    r.category = rewards::parse_category(j.at("category").get<std::string>());
    r.inference_error = j.value("inference_error", false);
    r.reward = j.value("reward", 0.0);
    return r;
  } catch (const Json::exception& e) {
    throw DataError(std::string("bad evaluation record: ") + e.what());
  }
}

std::vector<EvalRecord> read_eval_records(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  std::vector<EvalRecord> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      out.push_back(eval_record_from_json(Json::parse(line)));
    } catch (const std::exception& e) {
      throw DataError(path.string() + " line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return out;
}

calibration::CalibrationRecord to_calibration(const EvalRecord& r) {
  return {r.problem_id, r.model_id, r.passed, r.inference_error};
}

std::string sanitize_path_part(std::string_view text) {
  std::string out;
  for (char c : text) {
    const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '.' ||
                    c == '_' || c == '-';
    out += ok ? c : '_';
  }
  if (out.empty() || out == "." || out == "..") out = "_" + out;
  return out;
}

// ---------------------------------------------------------------------------
// Report
// ---------------------------------------------------------------------------

EvalReport build_report(const std::vector<EvalRecord>& records, const std::vector<ProblemInstance>& problems,
                        const calibration::TierManifest* tiers) {
  std::unordered_map<std::string, const ProblemInstance*> index;
  for (const auto& p : problems) index[p.id] = &p;
  EvalReport report;
  for (int c = 0; c < rewards::kCategoryCount; ++c) {
    report.categories[std::string(rewards::to_string(static_cast<rewards::TelemetryCategory>(c)))] = 0;
  }
  for (const auto& r : records) {
    auto it = index.find(r.problem_id);
    if (it == index.end()) throw DataError("record references unknown problem '" + r.problem_id + "'");
    const ProblemInstance& p = *it->second;
    auto bump = [&](RateCell& cell) {
      ++cell.problems;
      cell.passed += r.passed;
    };
    bump(report.by_family[{r.model_id, std::string(to_string(p.family))}]);
    if (const auto* s = std::get_if<SpatialComplexity>(&p.complexity)) {
      bump(report.by_query[{r.model_id, std::string(abbreviation(s->query_kind))}]);
    }
    if (tiers) {
      if (const auto* entry = tiers->find(r.problem_id)) {
        bump(report.by_tier[{r.model_id, std::string(to_string(entry->tier))}]);
      }
    }
    ++report.categories[std::string(rewards::to_string(r.category))];
    ++report.total_records;
  }
  return report;
}

namespace {

Json cells_json(const std::map<std::pair<std::string, std::string>, RateCell>& cells, const char* key) {
  Json rows = Json::array();
  for (const auto& [k, cell] : cells) {
    rows.push_back({{"model_id", k.first},
                    {key, k.second},
                    {"problems", cell.problems},
                    {"passed", cell.passed},
                    {"pass_rate", cell.rate()}});
  }
  return rows;
}

void text_table(std::ostringstream& out, const std::string& title, const char* column,
                const std::map<std::pair<std::string, std::string>, RateCell>& cells) {
  out << title << "\n";
  char line[256];
  std::snprintf(line, sizeof line, "%-24s %-10s %9s %7s %9s\n", "model_id", column, "problems", "passed", "pass_rate");
  out << line;
  for (const auto& [k, cell] : cells) {
    std::snprintf(line, sizeof line, "%-24s %-10s %9zu %7zu %9s\n", k.first.c_str(), k.second.c_str(), cell.problems,
                  cell.passed, format_fixed(cell.rate(), 4).c_str());
    out << line;
  }
}

}  // namespace

std::string render_report(const EvalReport& report, std::string_view format) {
  std::ostringstream out;
  if (format == "csv") {
    out << "model_id,family,problems,passed,pass_rate\n";
    for (const auto& [k, cell] : report.by_family) {
      out << k.first << ',' << k.second << ',' << cell.problems << ',' << cell.passed << ','
          << format_fixed(cell.rate(), 4) << '\n';
    }
    return out.str();
  }
  if (format == "json") {
    Json j = {{"total_records", report.total_records},
              {"by_family", cells_json(report.by_family, "family")},
              {"by_tier", cells_json(report.by_tier, "tier")},
              {"by_query", cells_json(report.by_query, "query")},
              {"categories", report.categories}};
    return j.dump(2) + "\n";
  }
  if (format == "text") {
    text_table(out, "Pass rate by family", "family", report.by_family);
    if (!report.by_tier.empty()) text_table(out, "\nPass rate by tier", "tier", report.by_tier);
    if (!report.by_query.empty()) text_table(out, "\nPass rate by query type", "query", report.by_query);
    out << "\nReward categories (" << report.total_records << " records)\n";
    for (const auto& [name, count] : report.categories) out << "  " << name << ": " << count << "\n";
    return out.str();
  }
  throw ConfigError("unknown report format '" + std::string(format) + "' (expected text, json or csv)");
}

// ---------------------------------------------------------------------------
// Evaluation run
// ---------------------------------------------------------------------------

namespace {

struct Task {
  std::size_t problem;
  std::size_t model;
};

void write_cache(const EvalRunConfig& config, const ProblemInstance& p, const std::string& model_id,
                 const ModelOutput& output, bool inference_error) {
  const auto dir = *config.cache_dir / sanitize_path_part(config.run_id) / sanitize_path_part(model_id);
  std::filesystem::create_directories(dir);
  std::ofstream out(dir / (sanitize_path_part(p.id) + ".json"), std::ios::trunc);
  if (!out) throw IoError("cannot write completion cache in '" + dir.string() + "'");
  Json j = {{"problem_id", p.id},
            {"model_id", model_id},
            {"text", output.text},
            {"truncated", output.truncated},
            {"inference_error", inference_error}};
  out << j.dump() << '\n';
}

EvalRecord evaluate(const EvalRunConfig& config, const ProblemInstance& p, ModelClient& client) {
  ModelOutput output;
  bool inference_error = true;
  auto backoff = config.initial_backoff;
  for (int attempt = 0; attempt < config.max_attempts; ++attempt) {
    try {
      output = client.complete(p.prompt, config.decoding);
      inference_error = false;
      break;
    } catch (const std::exception&) {
      if (attempt + 1 < config.max_attempts) {
        std::this_thread::sleep_for(backoff);
        backoff *= 2;
      }
    }
  }
  if (inference_error) output = {};
  if (config.cache_dir) write_cache(config, p, client.model_id(), output, inference_error);
  const auto score = score_completion(p, {output.text, output.truncated, client.model_id(), p.id}, config.score);
  EvalRecord r;
  r.problem_id = p.id;
  r.model_id = client.model_id();
  r.passed = !inference_error && score.correct;
  r.category = score.reward.category;
  r.inference_error = inference_error;
  r.reward = score.reward.total;
  return r;
}

}  // namespace

EvalOutcome run_eval(const std::vector<ProblemInstance>& problems, const EvalRunConfig& config) {
  if (config.roster.empty()) throw ConfigError("evaluation needs at least one model");
  if (config.test_mode && config.decoding.temperature != 0.0) {
    throw ConfigError("test evaluation uses greedy decoding; temperature must be 0");
  }
  if (config.concurrency == 0) throw ConfigError("concurrency must be at least 1");
  if (config.max_attempts < 1) throw ConfigError("max_attempts must be at least 1");

  std::unordered_map<std::string, std::size_t> problem_index, model_index;
  for (std::size_t i = 0; i < problems.size(); ++i) {
    if (!problem_index.emplace(problems[i].id, i).second) throw DataError("duplicate problem id '" + problems[i].id + "'");
  }
  for (std::size_t m = 0; m < config.roster.size(); ++m) {
    if (!model_index.emplace(config.roster[m]->model_id(), m).second) {
      throw ConfigError("model '" + config.roster[m]->model_id() + "' appears twice in the roster");
    }
  }

  const std::size_t n_models = config.roster.size();
  std::vector<std::optional<EvalRecord>> slots(problems.size() * n_models);
  if (config.records_path && std::filesystem::exists(*config.records_path)) {
    for (auto& r : read_eval_records(*config.records_path)) {
      auto p = problem_index.find(r.problem_id);
      auto m = model_index.find(r.model_id);
      if (p == problem_index.end() || m == model_index.end()) {
        throw DataError("existing record (" + r.problem_id + ", " + r.model_id + ") does not belong to this run");
      }
      auto& slot = slots[p->second * n_models + m->second];
      if (slot) throw DataError("duplicate existing record (" + r.problem_id + ", " + r.model_id + ")");
      slot = std::move(r);
    }
  }

  std::vector<Task> tasks;
  for (std::size_t p = 0; p < problems.size(); ++p)
    for (std::size_t m = 0; m < n_models; ++m)
      if (!slots[p * n_models + m]) tasks.push_back({p, m});
  EvalOutcome outcome;
  std::size_t budget = tasks.size();
  if (config.max_calls && *config.max_calls < budget) budget = *config.max_calls;
  outcome.pending = tasks.size() - budget;
  outcome.complete = outcome.pending == 0;
  tasks.resize(budget);

  std::ofstream append;
  if (config.records_path) {
    append.open(*config.records_path, std::ios::app);
    if (!append) throw IoError("cannot open '" + config.records_path->string() + "' for appending");
  }

  std::vector<std::optional<EvalRecord>> results(tasks.size());
  std::atomic<std::size_t> next{0};
  std::mutex commit_mutex;
  std::size_t committed = 0;
  std::exception_ptr failure;
  auto worker = [&]() {
    while (true) {
      const std::size_t i = next.fetch_add(1);
      if (i >= tasks.size()) return;
      try {
        auto record = evaluate(config, problems[tasks[i].problem], *config.roster[tasks[i].model]);
        std::lock_guard lock(commit_mutex);
        results[i] = std::move(record);
        while (committed < results.size() && results[committed]) {
          if (append.is_open()) append << to_json(*results[committed]).dump() << '\n' << std::flush;
          ++committed;
        }
      } catch (...) {
        std::lock_guard lock(commit_mutex);
        if (!failure) failure = std::current_exception();
        next = tasks.size();
        return;
      }
    }
  };
  const std::size_t n_threads = std::min(config.concurrency, std::max<std::size_t>(tasks.size(), 1));
  std::vector<std::thread> threads;
  for (std::size_t t = 0; t < n_threads; ++t) threads.emplace_back(worker);
  for (auto& t : threads) t.join();
  append.close();
  if (failure) std::rethrow_exception(failure);

  for (std::size_t i = 0; i < tasks.size(); ++i) {
    slots[tasks[i].problem * n_models + tasks[i].model] = std::move(results[i]);
  }
  outcome.evaluated = tasks.size();
  for (auto& slot : slots)
    if (slot) outcome.records.push_back(std::move(*slot));

  if (config.records_path) {
    const auto tmp = config.records_path->string() + ".tmp";
    {
      std::ofstream out(tmp, std::ios::trunc);
      if (!out) throw IoError("cannot write '" + tmp + "'");
      for (const auto& r : outcome.records) out << to_json(r).dump() << '\n';
    }
    std::filesystem::rename(tmp, *config.records_path);
  }
  outcome.report = build_report(outcome.records, problems);
  return outcome;
}

}  // namespace rlvr::harness
