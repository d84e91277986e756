#pragma once

#include <array>
#include <atomic>
#include <memory>
#include <string>
#include <unordered_map>
#include <vector>

#include "rlvr/dataset.hpp"
#include "rlvr/scoring.hpp"

namespace httplib {
class Server;
}

namespace rlvr::service {

struct ServiceConfig {
  std::string host = "127.0.0.1";
  int port = 8080;  // 0 picks a free port
  std::size_t length_threshold = rewards::kDefaultLengthThreshold;
};

/// Overlay RLVR_SERVICE_HOST, RLVR_SERVICE_PORT and
/// RLVR_SERVICE_LENGTH_THRESHOLD onto `config`.
ServiceConfig config_from_env(ServiceConfig config);

struct Response {
  int status = 200;
  std::string body;
};

/// Problem store plus telemetry counters. Handlers are callable directly and
/// are safe to run concurrently.
class ServiceState {
 public:
  ServiceState(std::vector<ProblemInstance> problems, ServiceConfig config,
               std::unique_ptr<parsing::Normalizer> normalizer = nullptr);

  Response health() const;
  Response get_problem(const std::string& id) const;
  Response reward(const std::string& body, const std::string& content_type);
  Response verify(const std::string& body, const std::string& content_type);
  Response batch_score(const std::string& body, const std::string& content_type);
  Response metrics() const;

  std::uint64_t scored_total() const;
  const ServiceConfig& config() const { return config_; }

 private:
  const ProblemInstance* find(const std::string& id) const;
  ScoreResult score_and_count(const ProblemInstance& problem, const parsing::Completion& completion);

  std::vector<ProblemInstance> problems_;
  std::unordered_map<std::string, std::size_t> index_;
  ServiceConfig config_;
  std::unique_ptr<parsing::Normalizer> normalizer_;
  std::array<std::array<std::atomic<std::uint64_t>, rewards::kCategoryCount>, 3> counters_{};
};

Json to_json(const rewards::RewardBreakdown& reward);

/// HTTP front end: every route is served under /v1/ and at the bare path.
class Server {
 public:
  explicit Server(ServiceState& state);
  ~Server();
  Server(const Server&) = delete;
  Server& operator=(const Server&) = delete;

  /// Bind to host:port (port 0 picks one); returns the bound port.
  int bind(const std::string& host, int port);
  /// Serve until stop() is called.
  void listen();
  void stop();

 private:
  ServiceState& state_;
  std::unique_ptr<httplib::Server> server_;
};

/// Normalizer reached over HTTP: POST {problem, completion} -> {canonical},
/// bearer credential from RLVR_NORMALIZER_API_KEY when set.
class HttpNormalizer : public parsing::Normalizer {
 public:
  explicit HttpNormalizer(std::string url, int timeout_seconds = 30);
  std::string canonicalize(const ProblemInstance& problem, const std::string& completion) override;

 private:
  std::string url_;
  int timeout_seconds_;
};

}  // namespace rlvr::service
