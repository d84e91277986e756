#include <atomic>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "rlvr/harness.hpp"

using namespace rlvr;
using namespace rlvr::harness;
namespace fs = std::filesystem;

namespace {

std::vector<ProblemInstance> small_mix() {
  std::vector<ProblemInstance> all;
  counting::CountingConfig c;
  c.count = 15;
  graph::GraphConfig g;
  g.count = 15;
  g.max_nodes = 10;
  spatial::SpatialConfig s;
  s.count = 15;
  for (auto& p : counting::generate_counting(c)) all.push_back(p);
  for (auto& p : graph::generate_graphs(g)) all.push_back(p);
  for (auto& p : spatial::generate_spatial(s)) all.push_back(p);
  return all;
}

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("rlvr_harness_" + name + "_" + std::to_string(::getpid()));
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path);
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

class FlakyClient : public ModelClient {
 public:
  FlakyClient(std::string id, int failures, const std::vector<ProblemInstance>& problems)
      : id_(std::move(id)), failures_(failures), oracle_(id_, problems) {}
  const std::string& model_id() const override { return id_; }
  ModelOutput complete(const std::string& prompt, const Decoding& d) override {
    if (calls_.fetch_add(1) < failures_) throw TransportError("connection reset");
    return oracle_.complete(prompt, d);
  }
  int calls() const { return calls_; }

 private:
  std::string id_;
  int failures_;
  std::atomic<int> calls_{0};
  OracleClient oracle_;
};

}  // namespace

TEST_SUITE("harness") {
  TEST_CASE("oracle and empty clients bracket the pass rate") {
    const auto problems = small_mix();
    OracleClient oracle("oracle", problems);
    EmptyClient empty("empty");
    EvalRunConfig config;
    config.roster = {&oracle, &empty};
    const auto outcome = run_eval(problems, config);
    REQUIRE(outcome.records.size() == problems.size() * 2);
    CHECK(outcome.complete);
    for (const auto& r : outcome.records) {
      CHECK(r.passed == (r.model_id == "oracle"));
      if (r.model_id == "oracle") CHECK(r.category == rewards::TelemetryCategory::CorrectWellFormatted);
      else CHECK(r.category == rewards::TelemetryCategory::ExtractionFailure);
    }
    CHECK(outcome.report.by_family.at({"oracle", "graph"}).rate() == 1.0);
    CHECK(outcome.report.by_family.at({"empty", "spatial"}).rate() == 0.0);
  }

  TEST_CASE("records are in canonical order and independent of concurrency") {
    const auto problems = small_mix();
    SkillClient a("a", 0.3, problems), b("b", 0.8, problems);
    const auto dir = scratch("order");
    EvalRunConfig config;
    config.roster = {&a, &b};
    config.concurrency = 1;
    config.records_path = dir / "serial.jsonl";
    const auto serial = run_eval(problems, config);
    config.concurrency = 8;
    config.records_path = dir / "parallel.jsonl";
    const auto parallel = run_eval(problems, config);
    CHECK(serial.records == parallel.records);
    CHECK(slurp(dir / "serial.jsonl") == slurp(dir / "parallel.jsonl"));
    for (std::size_t i = 0; i < serial.records.size(); ++i) {
      CHECK(serial.records[i].problem_id == problems[i / 2].id);
      CHECK(serial.records[i].model_id == (i % 2 ? "b" : "a"));
    }
    fs::remove_all(dir);
  }

  TEST_CASE("call budget and resume reproduce a full run") {
    const auto problems = small_mix();
    SkillClient a("a", 0.5, problems), b("b", 0.5, problems);
    const auto dir = scratch("resume");
    EvalRunConfig config;
    config.roster = {&a, &b};
    config.records_path = dir / "full.jsonl";
    run_eval(problems, config);

    config.records_path = dir / "partial.jsonl";
    config.max_calls = 31;
    auto first = run_eval(problems, config);
    CHECK_FALSE(first.complete);
    CHECK(first.evaluated == 31);
    CHECK(first.pending == problems.size() * 2 - 31);
    CHECK(first.records.size() == 31);
    auto second = run_eval(problems, config);
    CHECK(second.evaluated == 31);
    config.max_calls.reset();
    auto last = run_eval(problems, config);
    CHECK(last.complete);
    CHECK(last.records.size() == problems.size() * 2);
    CHECK(slurp(dir / "partial.jsonl") == slurp(dir / "full.jsonl"));
    CHECK(run_eval(problems, config).evaluated == 0);
    fs::remove_all(dir);
  }

  TEST_CASE("transport errors are retried, then recorded as inference errors") {
    const auto problems = small_mix();
    std::vector<ProblemInstance> one(problems.begin(), problems.begin() + 1);
    FlakyClient flaky("flaky", 2, one), dead("dead", 1000, one);
    EvalRunConfig config;
    config.roster = {&flaky, &dead};
    config.initial_backoff = std::chrono::milliseconds(1);
    config.concurrency = 1;
    const auto outcome = run_eval(one, config);
    CHECK(flaky.calls() == 3);
    CHECK(dead.calls() == 3);
    CHECK(outcome.records[0].passed);
    CHECK_FALSE(outcome.records[0].inference_error);
    CHECK_FALSE(outcome.records[1].passed);
    CHECK(outcome.records[1].inference_error);
    CHECK(outcome.records[1].category == rewards::TelemetryCategory::ExtractionFailure);
    CHECK(to_calibration(outcome.records[1]).inference_error);
  }

  TEST_CASE("raw completions are cached per run, model and problem") {
    const auto problems = small_mix();
    OracleClient oracle("org/model:v1", problems);
    const auto dir = scratch("cache");
    EvalRunConfig config;
    config.roster = {&oracle};
    config.cache_dir = dir;
    config.run_id = "r1";
    run_eval(problems, config);
    const auto file = dir / "r1" / sanitize_path_part("org/model:v1") / (problems[3].id + ".json");
    REQUIRE(fs::exists(file));
    const auto j = Json::parse(slurp(file));
    CHECK(j["text"] == parsing::render_answer(problems[3].truth, problems[3].family));
    CHECK(sanitize_path_part("a/b c") == "a_b_c");
    fs::remove_all(dir);
  }

  TEST_CASE("configuration errors") {
    const auto problems = small_mix();
    OracleClient oracle("o", problems);
    EvalRunConfig config;
    CHECK_THROWS_AS(run_eval(problems, config), ConfigError);
    config.roster = {&oracle, &oracle};
    CHECK_THROWS_AS(run_eval(problems, config), ConfigError);
    config.roster = {&oracle};
    config.decoding.temperature = 0.7;
    CHECK_THROWS_AS(run_eval(problems, config), ConfigError);
    config.test_mode = false;
    CHECK_NOTHROW(run_eval(problems, config));
  }

  TEST_CASE("reports") {
    const auto problems = small_mix();
    SkillClient a("a", 0.5, problems);
    EvalRunConfig config;
    config.roster = {&a};
    const auto outcome = run_eval(problems, config);
    const auto csv = render_report(outcome.report, "csv");
    CHECK(csv.rfind("model_id,family,problems,passed,pass_rate\n", 0) == 0);
    CHECK(csv.find("a,counting,15,") != std::string::npos);
    CHECK(Json::parse(render_report(outcome.report, "json")).is_object());
    CHECK(render_report(outcome.report, "text").find("counting") != std::string::npos);
    CHECK_THROWS_AS(render_report(outcome.report, "xml"), ConfigError);
    std::size_t total = 0;
    for (const auto& [name, n] : outcome.report.categories) total += n;
    CHECK(total == outcome.records.size());
  }

  TEST_CASE("eval records round-trip") {
    EvalRecord r{"p", "m", true, rewards::TelemetryCategory::CorrectOtherFormat, false, 1.0};
    CHECK(eval_record_from_json(to_json(r)) == r);
  }
}
