#include "rlvr/service.hpp"

#include <cstdlib>

#include "httplib.h"
#include "rlvr/dataset.hpp"

namespace rlvr::service {

namespace {

Response json_response(int status, Json body) {
  body["schema_version"] = kSchemaVersion;
  return {status, body.dump()};
}

Response error_response(int status, const std::string& message) {
  return json_response(status, {{"error", message}});
}

bool is_json(const std::string& content_type) {
  return content_type.rfind("application/json", 0) == 0;
}

/// Parsed request body or an error response.
std::variant<Json, Response> parse_body(const std::string& body, const std::string& content_type) {
  if (!is_json(content_type)) return error_response(415, "content type must be application/json");
  Json j = Json::parse(body, nullptr, false);
  if (j.is_discarded() || !j.is_object()) return error_response(400, "request body must be a JSON object");
  return j;
}

struct ScoreRequest {
  std::string problem_id;
  parsing::Completion completion;
};

std::optional<ScoreRequest> score_request(const Json& j) {
  auto id = j.find("problem_id");
  auto text = j.find("completion");
  if (id == j.end() || !id->is_string() || text == j.end() || !text->is_string()) return std::nullopt;
  ScoreRequest req;
  req.problem_id = id->get<std::string>();
  req.completion.text = text->get<std::string>();
  req.completion.problem_id = req.problem_id;
  if (auto t = j.find("truncated"); t != j.end()) {
    if (!t->is_boolean()) return std::nullopt;
    req.completion.truncated = t->get<bool>();
  }
  return req;
}

Json reward_payload(const std::string& problem_id, const ScoreResult& result) {
  Json j = to_json(result.reward);
  j["problem_id"] = problem_id;
  j["normalizer_unavailable"] = result.normalizer_unavailable;
  return j;
}

}  // namespace

ServiceConfig config_from_env(ServiceConfig config) {
  if (const char* host = std::getenv("RLVR_SERVICE_HOST")) config.host = host;
  try {
    if (const char* port = std::getenv("RLVR_SERVICE_PORT")) config.port = std::stoi(port);
    if (const char* threshold = std::getenv("RLVR_SERVICE_LENGTH_THRESHOLD")) {
      config.length_threshold = static_cast<std::size_t>(std::stoull(threshold));
    }
  } catch (const std::exception&) {
    throw ConfigError("RLVR_SERVICE_PORT / RLVR_SERVICE_LENGTH_THRESHOLD must be integers");
  }
  return config;
}

Json to_json(const rewards::RewardBreakdown& r) {
  Json j = Json::object();
  j["correctness"] = r.correctness;
  j["format_bonus"] = r.format_bonus;
  j["step_penalty"] = r.step_penalty;
  j["length_penalty"] = r.length_penalty;
  j["total"] = r.total;
  j["category"] = rewards::to_string(r.category);
  return j;
}

ServiceState::ServiceState(std::vector<ProblemInstance> problems, ServiceConfig config,
                           std::unique_ptr<parsing::Normalizer> normalizer)
    : problems_(std::move(problems)), config_(std::move(config)), normalizer_(std::move(normalizer)) {
  for (std::size_t i = 0; i < problems_.size(); ++i) {
    if (!index_.emplace(problems_[i].id, i).second) throw DataError("duplicate problem id '" + problems_[i].id + "'");
  }
}

const ProblemInstance* ServiceState::find(const std::string& id) const {
  auto it = index_.find(id);
  return it == index_.end() ? nullptr : &problems_[it->second];
}

ScoreResult ServiceState::score_and_count(const ProblemInstance& problem, const parsing::Completion& completion) {
  ScoreOptions options;
  options.normalizer = normalizer_.get();
  options.length_threshold = config_.length_threshold;
  ScoreResult result = score_completion(problem, completion, options);
  counters_[static_cast<int>(problem.family)][static_cast<int>(result.reward.category)].fetch_add(
      1, std::memory_order_relaxed);
  return result;
}

Response ServiceState::health() const {
  return json_response(200, {{"status", "ok"}, {"problems", problems_.size()}});
}

Response ServiceState::get_problem(const std::string& id) const {
  const auto* p = find(id);
  if (!p) return error_response(404, "unknown problem id '" + id + "'");
  return {200, to_json(*p, false).dump()};
}

Response ServiceState::reward(const std::string& body, const std::string& content_type) {
  auto parsed = parse_body(body, content_type);
  if (auto* r = std::get_if<Response>(&parsed)) return *r;
  auto req = score_request(std::get<Json>(parsed));
  if (!req) return error_response(400, "expected {problem_id: string, completion: string, truncated?: bool}");
  const auto* p = find(req->problem_id);
  if (!p) return error_response(404, "unknown problem id '" + req->problem_id + "'");
  return json_response(200, reward_payload(req->problem_id, score_and_count(*p, req->completion)));
}

Response ServiceState::verify(const std::string& body, const std::string& content_type) {
  auto parsed = parse_body(body, content_type);
  if (auto* r = std::get_if<Response>(&parsed)) return *r;
  auto req = score_request(std::get<Json>(parsed));
  if (!req) return error_response(400, "expected {problem_id: string, completion: string, truncated?: bool}");
  const auto* p = find(req->problem_id);
  if (!p) return error_response(404, "unknown problem id '" + req->problem_id + "'");
  ScoreOptions options;
  options.normalizer = normalizer_.get();
  options.length_threshold = config_.length_threshold;
  const auto result = score_completion(*p, req->completion, options);
  Json j = {{"problem_id", req->problem_id},
            {"status", parsing::to_string(result.parsed.status)},
            {"format_class", parsing::to_string(result.parsed.format_class)},
            {"step_count", result.parsed.step_count},
            {"via_normalizer", result.parsed.via_normalizer},
            {"correct", result.correct}};
  j["answer"] = result.parsed.value ? rlvr::to_json(*result.parsed.value) : Json(nullptr);
  if (p->family == TaskFamily::Graph) {
    j["verdict"] = graph::to_string(result.verification.verdict);
    j["detail"] = result.verification.detail;
  } else {
    j["verdict"] = result.parsed.value ? (result.correct ? "correct" : "incorrect") : "invalid";
  }
  return json_response(200, j);
}

Response ServiceState::batch_score(const std::string& body, const std::string& content_type) {
  auto parsed = parse_body(body, content_type);
  if (auto* r = std::get_if<Response>(&parsed)) return *r;
  const Json& j = std::get<Json>(parsed);
  auto ids = j.find("problem_ids");
  auto texts = j.find("completions");
  if (ids == j.end() || texts == j.end() || !ids->is_array() || !texts->is_array()) {
    return error_response(400, "expected {problem_ids: [...], completions: [...], truncated?: [...]}");
  }
  if (ids->size() != texts->size()) return error_response(400, "problem_ids and completions differ in length");
  const Json* truncated = nullptr;
  if (auto t = j.find("truncated"); t != j.end()) {
    if (!t->is_array() || t->size() != ids->size()) return error_response(400, "truncated must align with completions");
    truncated = &*t;
  }
  for (std::size_t i = 0; i < ids->size(); ++i) {
    if (!(*ids)[i].is_string() || !(*texts)[i].is_string() || (truncated && !(*truncated)[i].is_boolean())) {
      return error_response(400, "item " + std::to_string(i) + " is malformed");
    }
  }
  Json results = Json::array();
  for (std::size_t i = 0; i < ids->size(); ++i) {
    const auto id = (*ids)[i].get<std::string>();
    const auto* p = find(id);
    if (!p) {
      results.push_back({{"problem_id", id}, {"error", "unknown problem id"}});
      continue;
    }
    parsing::Completion c{(*texts)[i].get<std::string>(), truncated && (*truncated)[i].get<bool>(), "", id};
    results.push_back(reward_payload(id, score_and_count(*p, c)));
  }
  return json_response(200, {{"results", results}});
}

std::uint64_t ServiceState::scored_total() const {
  std::uint64_t total = 0;
  for (const auto& family : counters_)
    for (const auto& c : family) total += c.load(std::memory_order_relaxed);
  return total;
}

Response ServiceState::metrics() const {
  Json counters = Json::object();
  for (int f = 0; f < 3; ++f) {
    Json family = Json::object();
    for (int c = 0; c < rewards::kCategoryCount; ++c) {
      family[std::string(rewards::to_string(static_cast<rewards::TelemetryCategory>(c)))] =
          counters_[f][c].load(std::memory_order_relaxed);
    }
    counters[std::string(to_string(static_cast<TaskFamily>(f)))] = family;
  }
  return json_response(200, {{"scored_total", scored_total()}, {"counters", counters}});
}

// ---------------------------------------------------------------------------
// HTTP front end
// ---------------------------------------------------------------------------

Server::Server(ServiceState& state) : state_(state), server_(std::make_unique<httplib::Server>()) {
  auto reply = [](httplib::Response& res, const Response& r) { res.status = r.status, res.set_content(r.body, "application/json"); };
  for (const std::string prefix : {"/v1", ""}) {
    server_->Get(prefix + "/health", [this, reply](const httplib::Request&, httplib::Response& res) {
      reply(res, state_.health());
    });
    server_->Get(prefix + "/metrics", [this, reply](const httplib::Request&, httplib::Response& res) {
      reply(res, state_.metrics());
    });
    server_->Get(prefix + R"(/problems/([^/]+))", [this, reply](const httplib::Request& req, httplib::Response& res) {
      reply(res, state_.get_problem(req.matches[1]));
    });
    server_->Post(prefix + "/reward", [this, reply](const httplib::Request& req, httplib::Response& res) {
      reply(res, state_.reward(req.body, req.get_header_value("Content-Type")));
    });
    server_->Post(prefix + "/verify", [this, reply](const httplib::Request& req, httplib::Response& res) {
      reply(res, state_.verify(req.body, req.get_header_value("Content-Type")));
    });
    server_->Post(prefix + "/batch_score", [this, reply](const httplib::Request& req, httplib::Response& res) {
      reply(res, state_.batch_score(req.body, req.get_header_value("Content-Type")));
    });
  }
  server_->set_error_handler([](const httplib::Request&, httplib::Response& res) {
    if (res.body.empty()) {
      Json j = {{"schema_version", kSchemaVersion}, {"error", "no such route"}};
      res.set_content(j.dump(), "application/json");
    }
  });
}

Server::~Server() = default;

int Server::bind(const std::string& host, int port) {
  if (port == 0) {
    const int bound = server_->bind_to_any_port(host);
    if (bound < 0) throw IoError("cannot bind to " + host);
    return bound;
  }
  if (!server_->bind_to_port(host, port)) throw IoError("cannot bind to " + host + ":" + std::to_string(port));
  return port;
}

void Server::listen() { server_->listen_after_bind(); }

void Server::stop() { server_->stop(); }

}  // namespace rlvr::service
