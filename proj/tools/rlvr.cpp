#include <chrono>
#include <csignal>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "CLI11.hpp"
#include "rlvr/calibration.hpp"
#include "rlvr/dataset.hpp"
#include "rlvr/harness.hpp"
#include "rlvr/http_client.hpp"
#include "rlvr/service.hpp"

using namespace rlvr;

namespace {

enum ExitCode { kOk = 0, kUsage = 1, kData = 2, kExternal = 3 };

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, sep))
    if (!item.empty()) out.push_back(item);
  return out;
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "'");
  Json j = Json::parse(in, nullptr, false);
  if (j.is_discarded()) throw DataError("'" + path + "' is not valid JSON");
  return j;
}

void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot write '" + path + "'");
  out << text;
}

std::unique_ptr<parsing::Normalizer> make_normalizer(const std::string& spec) {
  if (spec.empty() || spec == "none") return nullptr;
  if (spec == "stub") return std::make_unique<parsing::StubNormalizer>();
  return std::make_unique<service::HttpNormalizer>(spec);
}

// ---------------------------------------------------------------------------
// generate
// ---------------------------------------------------------------------------

struct GenerateArgs {
  std::string family = "counting";
  std::size_t count = 100;
  std::uint64_t seed = 0;
  std::string out = "-";
  std::vector<std::string> operators;
  int min_range_scale = 1, max_range_scale = 3;
  int min_filters = 1, max_filters = 4;
  int min_transforms = 0, max_transforms = 3;
  int min_nodes = graph::kMinNodes, max_nodes = graph::kMaxNodes;
  double min_density = 0.15, max_density = 0.5;
  double directed_fraction = 0.25, weighted_fraction = 0.25;
  long solve_budget_ms = graph::kDefaultSolveBudget.count();
  int min_actions = 1, max_actions = 10;
  int min_particles = 2, max_particles = 4;
  std::string query_mix = "1,1,1,1";
};

int run_generate(const GenerateArgs& a) {
  const auto start = std::chrono::steady_clock::now();
  const TaskFamily family = parse_task_family(a.family);
  std::vector<ProblemInstance> problems;
  if (family == TaskFamily::Counting) {
    counting::CountingConfig c;
    c.count = a.count;
    c.seed = a.seed;
    c.min_range_scale = a.min_range_scale;
    c.max_range_scale = a.max_range_scale;
    c.min_filters = a.min_filters;
    c.max_filters = a.max_filters;
    c.min_transforms = a.min_transforms;
    c.max_transforms = a.max_transforms;
    for (const auto& op : a.operators) c.operator_whitelist.push_back(counting::parse_aggregate_kind(op));
    problems = counting::generate_counting(c);
  } else if (family == TaskFamily::Graph) {
    graph::GraphConfig c;
    c.count = a.count;
    c.seed = a.seed;
    c.min_nodes = a.min_nodes;
    c.max_nodes = a.max_nodes;
    c.min_edge_density = a.min_density;
    c.max_edge_density = a.max_density;
    c.directed_fraction = a.directed_fraction;
    c.weighted_fraction = a.weighted_fraction;
    c.solve_budget = std::chrono::milliseconds(a.solve_budget_ms);
    for (const auto& op : a.operators) c.operator_whitelist.push_back(graph::parse_operator_kind(op));
    problems = graph::generate_graphs(c);
  } else {
    spatial::SpatialConfig c;
    c.count = a.count;
    c.seed = a.seed;
    c.min_actions = a.min_actions;
    c.max_actions = a.max_actions;
    c.min_particles = a.min_particles;
    c.max_particles = a.max_particles;
    std::vector<double> w;
    for (const auto& part : split(a.query_mix, ',')) w.push_back(std::stod(part));
    if (w.size() != 4) throw ConfigError("--query-mix takes four weights: AL,AO,RL,RO");
    c.query_mix = {w[0], w[1], w[2], w[3]};
    problems = spatial::generate_spatial(c);
  }
  if (a.out == "-") {
    write_dataset(problems, std::cout);
  } else {
    write_dataset(problems, std::filesystem::path(a.out));
  }

  std::map<std::string, std::size_t> histogram;
  for (const auto& p : problems) {
    std::string key;
    if (const auto* c = std::get_if<CountingComplexity>(&p.complexity)) {
      key = "steps=" + std::to_string(c->total_steps);
    } else if (const auto* g = std::get_if<GraphComplexity>(&p.complexity)) {
      key = "nodes=" + std::string(g->n_nodes < 10 ? "0" : "") + std::to_string(g->n_nodes);
    } else {
      const auto& s = std::get<SpatialComplexity>(p.complexity);
      key = std::string(abbreviation(s.query_kind)) + " actions=" + (s.n_actions < 10 ? "0" : "") +
            std::to_string(s.n_actions);
    }
    ++histogram[key];
  }
  const double elapsed =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  std::cerr << "generated " << problems.size() << " " << a.family << " problems in " << format_fixed(elapsed, 2)
            << " s\n";
  for (const auto& [key, n] : histogram) std::cerr << "  " << key << ": " << n << "\n";
  if (family == TaskFamily::Graph) {
    const auto stats = graph::last_generation_stats();
    std::cerr << "  solver budget rejections: " << stats.budget_rejections << " of " << stats.draws << " draws\n";
  }
  return kOk;
}

// ---------------------------------------------------------------------------
// solve
// ---------------------------------------------------------------------------

int run_solve(const std::string& dataset, const std::string& problem_id) {
  const auto problems = read_dataset(std::filesystem::path(dataset), {.resolve_truth = false});
  int mismatches = 0;
  for (const auto& p : problems) {
    if (!problem_id.empty() && p.id != problem_id) continue;
    const auto truth = solve_truth(p.spec);
    const bool same = truth == p.truth;
    mismatches += !same;
    std::cout << p.id << "\t" << describe(truth) << (same ? "" : "\tMISMATCH with stored truth") << "\n";
  }
  return mismatches ? kData : kOk;
}

// ---------------------------------------------------------------------------
// verify
// ---------------------------------------------------------------------------

int run_verify(const std::string& dataset, const std::string& completions_path, const std::string& out_path,
               const std::string& normalizer_spec, std::size_t length_threshold) {
  const auto problems = read_dataset(std::filesystem::path(dataset), {.resolve_truth = false});
  std::ifstream in(completions_path);
  if (!in) throw IoError("cannot open '" + completions_path + "'");
  std::vector<parsing::Completion> completions;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    Json j = Json::parse(line, nullptr, false);
    if (j.is_discarded() || !j.is_object() || !j.contains("problem_id") || !j.contains("completion")) {
      throw DataError(completions_path + " line " + std::to_string(line_no) +
                      ": expected {problem_id, completion, truncated?}");
    }
    completions.push_back({j["completion"].get<std::string>(), j.value("truncated", false), j.value("model_id", ""),
                           j["problem_id"].get<std::string>()});
  }
  if (completions.size() != problems.size()) {
    throw DataError("dataset has " + std::to_string(problems.size()) + " problems but completions file has " +
                    std::to_string(completions.size()) + " lines");
  }
  for (std::size_t i = 0; i < problems.size(); ++i) {
    if (completions[i].problem_id != problems[i].id) {
      throw DataError("completion " + std::to_string(i + 1) + " is for '" + completions[i].problem_id +
                      "' but the dataset has '" + problems[i].id + "' at that position");
    }
  }
  auto normalizer = make_normalizer(normalizer_spec);
  ScoreOptions options{normalizer.get(), length_threshold};
  std::ostringstream out;
  std::size_t correct = 0;
  for (std::size_t i = 0; i < problems.size(); ++i) {
    const auto r = score_completion(problems[i], completions[i], options);
    correct += r.correct;
    Json j = {{"problem_id", problems[i].id},
              {"status", parsing::to_string(r.parsed.status)},
              {"format_class", parsing::to_string(r.parsed.format_class)},
              {"correct", r.correct},
              {"reward", service::to_json(r.reward)},
              {"category", rewards::to_string(r.reward.category)}};
    if (problems[i].family == TaskFamily::Graph) j["verdict"] = graph::to_string(r.verification.verdict);
    out << j.dump() << "\n";
  }
  write_text(out_path, out.str());
  std::cerr << correct << " of " << problems.size() << " completions correct\n";
  return kOk;
}

// ---------------------------------------------------------------------------
// eval
// ---------------------------------------------------------------------------

std::vector<std::unique_ptr<harness::ModelClient>> load_roster(const std::string& path,
                                                               const std::vector<ProblemInstance>& problems) {
  const Json j = read_json_file(path);
  if (!j.is_array()) throw DataError("roster must be a JSON array of model entries");
  std::vector<std::unique_ptr<harness::ModelClient>> clients;
  for (const auto& entry : j) {
    const auto id = entry.value("model_id", "");
    const auto type = entry.value("type", "http");
    if (id.empty()) throw DataError("roster entry without model_id");
    if (type == "oracle") {
      clients.push_back(std::make_unique<harness::OracleClient>(id, problems));
    } else if (type == "empty") {
      clients.push_back(std::make_unique<harness::EmptyClient>(id));
    } else if (type == "skill") {
      clients.push_back(std::make_unique<harness::SkillClient>(id, entry.value("skill", 0.5), problems));
    } else if (type == "http") {
      clients.push_back(
          std::make_unique<harness::HttpModelClient>(id, entry.value("url", ""), entry.value("api_key_env", "")));
    } else {
      throw DataError("unknown roster client type '" + type + "'");
    }
  }
  return clients;
}

struct EvalArgs {
  std::string dataset, roster, records, cache_dir, run_id = "run", tiers, report_format = "text", normalizer;
  std::size_t jobs = 4;
  double temperature = 0.0;
  int max_tokens = 4096;
  bool calibration_mode = false;
  std::size_t max_calls = 0;
};

int run_eval(const EvalArgs& a) {
  const auto problems = read_dataset(std::filesystem::path(a.dataset), {.resolve_truth = false});
  auto clients = load_roster(a.roster, problems);
  auto normalizer = make_normalizer(a.normalizer);
  harness::EvalRunConfig config;
  for (auto& c : clients) config.roster.push_back(c.get());
  config.decoding = {a.temperature, a.max_tokens};
  config.test_mode = !a.calibration_mode;
  config.concurrency = a.jobs;
  if (a.max_calls) config.max_calls = a.max_calls;
  if (!a.records.empty()) config.records_path = a.records;
  if (!a.cache_dir.empty()) config.cache_dir = a.cache_dir;
  config.run_id = a.run_id;
  config.score.normalizer = normalizer.get();
  auto outcome = harness::run_eval(problems, config);
  std::optional<calibration::TierManifest> tiers;
  if (!a.tiers.empty()) tiers = calibration::tier_manifest_from_json(read_json_file(a.tiers));
  const auto report = harness::build_report(outcome.records, problems, tiers ? &*tiers : nullptr);
  std::cout << harness::render_report(report, a.report_format);
  if (!outcome.complete) {
    std::cerr << "call budget reached: " << outcome.pending << " pairs pending; rerun with the same --records file to "
              << "resume\n";
  }
  return kOk;
}

// ---------------------------------------------------------------------------
// calibrate / curate / report
// ---------------------------------------------------------------------------

int run_calibrate(const std::string& records_path, const std::string& models, const std::string& out,
                  double easy, double medium) {
  const auto records = calibration::read_records(std::filesystem::path(records_path));
  std::vector<std::string> roster = split(models, ',');
  if (roster.empty()) {
    std::set<std::string> seen;
    for (const auto& r : records)
      if (seen.insert(r.model_id).second) roster.push_back(r.model_id);
  }
  const auto manifest = calibration::compute_tiers(records, roster, {easy, medium});
  write_text(out, to_json(manifest).dump(2) + "\n");
  std::array<std::size_t, 3> counts{};
  for (const auto& e : manifest.problems) ++counts[static_cast<int>(e.tier)];
  std::cerr << manifest.problems.size() << " problems over " << roster.size() << " models: " << counts[0]
            << " easy, " << counts[1] << " medium, " << counts[2] << " hard\n";
  return kOk;
}

struct CurateArgs {
  std::string tiers, plan = "default", family = "counting", out = "-", dataset, subset_out;
  std::vector<std::string> subsets;
  std::size_t test_size = 0;
  double validation_fraction = 0.0;
  std::uint64_t seed = 0;
};

int run_curate(const CurateArgs& a) {
  const auto manifest = calibration::tier_manifest_from_json(read_json_file(a.tiers));
  if (a.plan != "default") throw ConfigError("unknown plan '" + a.plan + "' (only 'default' is built in)");
  auto plan = calibration::default_plan(parse_task_family(a.family), a.seed);
  if (!a.subsets.empty()) {
    plan.subsets.clear();
    for (const auto& s : a.subsets) {
      const auto parts = split(s, ':');
      if (parts.size() != 3 || (parts[1] != "easy" && parts[1] != "mixed")) {
        throw ConfigError("--subset takes name:easy|mixed:size, got '" + s + "'");
      }
      plan.subsets.push_back({parts[0], parts[1] == "easy" ? calibration::SubsetKind::Easy
                                                            : calibration::SubsetKind::Mixed,
                              static_cast<std::size_t>(std::stoull(parts[2]))});
    }
  }
  if (a.test_size) plan.test_size = a.test_size;
  plan.validation_fraction = a.validation_fraction;
  const auto splits = calibration::curate_splits(manifest, plan);
  write_text(a.out, to_json(splits).dump(2) + "\n");
  const auto report = calibration::verify_manifest(splits, manifest);
  for (const auto& c : report.checks) {
    if (!c.passed) std::cerr << "FAILED " << c.name << ": " << c.detail << "\n";
  }
  if (!a.subset_out.empty()) {
    if (a.dataset.empty()) throw ConfigError("--subset-out needs --dataset");
    const auto problems = read_dataset(std::filesystem::path(a.dataset), {.resolve_truth = false});
    std::unordered_map<std::string, const ProblemInstance*> index;
    for (const auto& p : problems) index[p.id] = &p;
    std::filesystem::create_directories(a.subset_out);
    for (const auto& [name, ids] : splits.subsets) {
      std::vector<ProblemInstance> subset;
      for (const auto& id : ids) {
        auto it = index.find(id);
        if (it == index.end()) throw DataError("subset '" + name + "' names '" + id + "', which is not in the dataset");
        subset.push_back(*it->second);
      }
      write_dataset(subset, std::filesystem::path(a.subset_out) / (name + ".jsonl"));
    }
  }
  std::cerr << splits.subsets.size() << " subsets curated; manifest checks " << (report.ok() ? "passed" : "FAILED")
            << "\n";
  return report.ok() ? kOk : kData;
}

int run_report(const std::string& records, const std::string& dataset, const std::string& tiers_path,
               const std::string& format, const std::string& out) {
  const auto problems = read_dataset(std::filesystem::path(dataset), {.resolve_truth = false});
  const auto recs = harness::read_eval_records(records);
  std::optional<calibration::TierManifest> tiers;
  if (!tiers_path.empty()) tiers = calibration::tier_manifest_from_json(read_json_file(tiers_path));
  write_text(out, harness::render_report(harness::build_report(recs, problems, tiers ? &*tiers : nullptr), format));
  return kOk;
}

// ---------------------------------------------------------------------------
// serve
// ---------------------------------------------------------------------------

service::Server* g_server = nullptr;

void handle_signal(int) {
  if (g_server) g_server->stop();
}

int run_serve(std::vector<std::string> datasets, const std::string& host, int port, std::size_t length_threshold,
              const std::string& normalizer_spec) {
  service::ServiceConfig config;
  config.host = host;
  config.port = port;
  config.length_threshold = length_threshold;
  config = service::config_from_env(config);
  if (datasets.empty()) {
    if (const char* env = std::getenv("RLVR_SERVICE_DATASETS")) datasets = split(env, ':');
  }
  if (datasets.empty()) throw ConfigError("serve needs --dataset or RLVR_SERVICE_DATASETS");
  std::vector<ProblemInstance> problems;
  for (const auto& path : datasets) {
    auto part = read_dataset(std::filesystem::path(path), {.resolve_truth = false});
    problems.insert(problems.end(), std::make_move_iterator(part.begin()), std::make_move_iterator(part.end()));
  }
  service::ServiceState state(std::move(problems), config, make_normalizer(normalizer_spec));
  service::Server server(state);
  const int bound = server.bind(config.host, config.port);
  std::cout << "listening on " << config.host << ":" << bound << std::endl;
  g_server = &server;
  std::signal(SIGINT, handle_signal);
  std::signal(SIGTERM, handle_signal);
  server.listen();
  g_server = nullptr;
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Procedural task generation, verification and reward scoring for counting, graph and spatial problems"};
  app.option_defaults()->always_capture_default();
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Show help for every subcommand");

  app.set_config("--config", "", "TOML file with one [subcommand] section of option defaults (flags win)");
  app.allow_config_extras(CLI::config_extras_mode::ignore);

  GenerateArgs gen;
  auto* generate = app.add_subcommand("generate", "Generate a JSONL dataset");
  generate->add_option("--family", gen.family, "counting, graph or spatial")
      ->check(CLI::IsMember({"counting", "graph", "spatial"}));
  generate->add_option("--count", gen.count, "Number of problems");
  generate->add_option("--seed", gen.seed, "Generator seed");
  generate->add_option("--out", gen.out, "Output JSONL path ('-' for stdout)");
  generate->add_option("--operators", gen.operators, "Operator whitelist (default: all)")->delimiter(',');
  generate->add_option("--min-range-scale", gen.min_range_scale, "Counting: smallest range scale (1-3)");
  generate->add_option("--max-range-scale", gen.max_range_scale, "Counting: largest range scale (1-3)");
  generate->add_option("--min-filters", gen.min_filters, "Counting: fewest filters");
  generate->add_option("--max-filters", gen.max_filters, "Counting: most filters");
  generate->add_option("--min-transforms", gen.min_transforms, "Counting: fewest transformations");
  generate->add_option("--max-transforms", gen.max_transforms, "Counting: most transformations");
  generate->add_option("--min-nodes", gen.min_nodes, "Graph: fewest nodes");
  generate->add_option("--max-nodes", gen.max_nodes, "Graph: most nodes");
  generate->add_option("--min-density", gen.min_density, "Graph: lowest edge density");
  generate->add_option("--max-density", gen.max_density, "Graph: highest edge density");
  generate->add_option("--directed-fraction", gen.directed_fraction, "Graph: share of directed graphs");
  generate->add_option("--weighted-fraction", gen.weighted_fraction, "Graph: share of weighted graphs");
  generate->add_option("--solve-budget-ms", gen.solve_budget_ms, "Graph: per-instance solver budget");
  generate->add_option("--min-actions", gen.min_actions, "Spatial: fewest actions");
  generate->add_option("--max-actions", gen.max_actions, "Spatial: most actions");
  generate->add_option("--min-particles", gen.min_particles, "Spatial: fewest particles");
  generate->add_option("--max-particles", gen.max_particles, "Spatial: most particles");
  generate->add_option("--query-mix", gen.query_mix, "Spatial: query weights AL,AO,RL,RO");

  std::string solve_dataset, solve_id;
  auto* solve = app.add_subcommand("solve", "Re-solve every problem of a dataset and compare with stored truths");
  solve->add_option("--dataset", solve_dataset, "Dataset JSONL")->required();
  solve->add_option("--problem-id", solve_id, "Only this problem");

  std::string verify_dataset, verify_completions, verify_out = "-", verify_normalizer;
  std::size_t verify_threshold = rewards::kDefaultLengthThreshold;
  auto* verify = app.add_subcommand("verify", "Score a completions file against a dataset");
  verify->add_option("--dataset", verify_dataset, "Dataset JSONL")->required();
  verify->add_option("--completions", verify_completions, "JSONL of {problem_id, completion, truncated?}")->required();
  verify->add_option("--out", verify_out, "Output JSONL ('-' for stdout)");
  verify->add_option("--normalizer", verify_normalizer, "none, stub or an endpoint URL");
  verify->add_option("--length-threshold", verify_threshold, "Graph completions longer than this score -0.2");

  EvalArgs ev;
  auto* eval = app.add_subcommand("eval", "Run models over a dataset and record pass/fail per problem");
  eval->add_option("--dataset", ev.dataset, "Dataset JSONL")->required();
  eval->add_option("--roster", ev.roster, "JSON roster of {model_id, type, url?, api_key_env?, skill?}")->required();
  eval->add_option("--records", ev.records, "Records JSONL (resumed when it exists)");
  eval->add_option("--cache-dir", ev.cache_dir, "Raw completion cache directory");
  eval->add_option("--run-id", ev.run_id, "Run id used in the cache layout");
  eval->add_option("--jobs", ev.jobs, "Concurrent model calls");
  eval->add_option("--temperature", ev.temperature, "Sampling temperature");
  eval->add_option("--max-tokens", ev.max_tokens, "Generation token limit");
  eval->add_flag("--calibration-mode", ev.calibration_mode, "Allow non-zero temperature");
  eval->add_option("--max-calls", ev.max_calls, "Stop after this many evaluations (0 = no limit)");
  eval->add_option("--tiers", ev.tiers, "Tier manifest for per-tier accuracy");
  eval->add_option("--report-format", ev.report_format, "text, json or csv");
  eval->add_option("--normalizer", ev.normalizer, "none, stub or an endpoint URL");

  std::string cal_records, cal_models, cal_out = "-";
  double cal_easy = 0.67, cal_medium = 0.34;
  auto* calibrate = app.add_subcommand("calibrate", "Assign difficulty tiers from evaluation records");
  calibrate->add_option("--records", cal_records, "Records JSONL")->required();
  calibrate->add_option("--models", cal_models, "Comma-separated roster (default: models in the records)");
  calibrate->add_option("--easy-threshold", cal_easy, "Pass rate at or above which a problem is easy");
  calibrate->add_option("--medium-threshold", cal_medium, "Pass rate at or above which a problem is medium");
  calibrate->add_option("--out", cal_out, "Tier manifest JSON ('-' for stdout)");

  CurateArgs cur;
  auto* curate = app.add_subcommand("curate", "Draw test and training subsets from a tier manifest");
  curate->add_option("--tiers", cur.tiers, "Tier manifest JSON")->required();
  curate->add_option("--plan", cur.plan, "Built-in plan");
  curate->add_option("--family", cur.family, "Family (sets the default test size)")
      ->check(CLI::IsMember({"counting", "graph", "spatial"}));
  curate->add_option("--subset", cur.subsets, "Replace the plan's subsets: name:easy|mixed:size");
  curate->add_option("--test-size", cur.test_size, "Override the test size (0 = plan default)");
  curate->add_option("--validation-fraction", cur.validation_fraction, "Size of each {name}_val companion");
  curate->add_option("--seed", cur.seed, "Curation seed");
  curate->add_option("--out", cur.out, "Split manifest JSON ('-' for stdout)");
  curate->add_option("--dataset", cur.dataset, "Dataset JSONL used by --subset-out");
  curate->add_option("--subset-out", cur.subset_out, "Directory for one JSONL per subset");

  std::vector<std::string> serve_datasets;
  std::string serve_host = "127.0.0.1", serve_normalizer;
  int serve_port = 8080;
  std::size_t serve_threshold = rewards::kDefaultLengthThreshold;
  auto* serve = app.add_subcommand("serve", "Run the reward service");
  serve->add_option("--dataset", serve_datasets, "Dataset JSONL (repeatable)");
  serve->add_option("--host", serve_host, "Bind address");
  serve->add_option("--port", serve_port, "Port (0 picks a free one)");
  serve->add_option("--length-threshold", serve_threshold, "Graph completions longer than this score -0.2");
  serve->add_option("--normalizer", serve_normalizer, "none, stub or an endpoint URL");

  std::string rep_records, rep_dataset, rep_tiers, rep_format = "text", rep_out = "-";
  auto* report = app.add_subcommand("report", "Summarize evaluation records");
  report->add_option("--records", rep_records, "Records JSONL")->required();
  report->add_option("--dataset", rep_dataset, "Dataset JSONL")->required();
  report->add_option("--tiers", rep_tiers, "Tier manifest for per-tier accuracy");
  report->add_option("--format", rep_format, "text, json or csv");
  report->add_option("--out", rep_out, "Output path ('-' for stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (generate->parsed()) return run_generate(gen);
    if (solve->parsed()) return run_solve(solve_dataset, solve_id);
    if (verify->parsed()) return run_verify(verify_dataset, verify_completions, verify_out, verify_normalizer,
                                            verify_threshold);
    if (eval->parsed()) return run_eval(ev);
    if (calibrate->parsed()) return run_calibrate(cal_records, cal_models, cal_out, cal_easy, cal_medium);
    if (curate->parsed()) return run_curate(cur);
    if (serve->parsed()) return run_serve(serve_datasets, serve_host, serve_port, serve_threshold, serve_normalizer);
    if (report->parsed()) return run_report(rep_records, rep_dataset, rep_tiers, rep_format, rep_out);
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExternal;
  } catch (const parsing::NormalizerUnavailable& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExternal;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kData;
  }
  return kUsage;
}
