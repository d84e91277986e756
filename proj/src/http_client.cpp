#include "rlvr/http_client.hpp"

#include <cstdlib>

#include "httplib.h"
#include "rlvr/service.hpp"

namespace rlvr::harness {

std::pair<std::string, std::string> split_url(const std::string& url) {
  const auto scheme = url.find("://");
  if (scheme == std::string::npos) throw ConfigError("URL '" + url + "' has no scheme");
  const auto path = url.find('/', scheme + 3);
  if (path == std::string::npos) return {url, "/"};
  return {url.substr(0, path), url.substr(path)};
}

HttpModelClient::HttpModelClient(std::string model_id, std::string url, std::string api_key_env, int timeout_seconds)
    : id_(std::move(model_id)), url_(std::move(url)), api_key_env_(std::move(api_key_env)),
      timeout_seconds_(timeout_seconds) {
  split_url(url_);
}

ModelOutput HttpModelClient::complete(const std::string& prompt, const Decoding& decoding) {
  const auto [base, path] = split_url(url_);
  httplib::Client client(base);
  client.set_connection_timeout(timeout_seconds_, 0);
  client.set_read_timeout(timeout_seconds_, 0);
  httplib::Headers headers;
  if (!api_key_env_.empty()) {
    if (const char* key = std::getenv(api_key_env_.c_str())) headers.emplace("Authorization", std::string("Bearer ") + key);
  }
  const Json request = {
      {"model", id_}, {"prompt", prompt}, {"temperature", decoding.temperature}, {"max_tokens", decoding.max_tokens}};
  auto res = client.Post(path, headers, request.dump(), "application/json");
  if (!res) throw TransportError("request to " + url_ + " failed: " + httplib::to_string(res.error()));
  if (res->status != 200) throw TransportError("endpoint " + url_ + " answered HTTP " + std::to_string(res->status));
  const Json body = Json::parse(res->body, nullptr, false);
  if (body.is_discarded() || !body.is_object() || !body.contains("text") || !body["text"].is_string()) {
    throw TransportError("endpoint " + url_ + " returned an unexpected payload");
  }
  return {body["text"].get<std::string>(), body.value("truncated", false)};
}

}  // namespace rlvr::harness

namespace rlvr::service {

HttpNormalizer::HttpNormalizer(std::string url, int timeout_seconds)
    : url_(std::move(url)), timeout_seconds_(timeout_seconds) {
  harness::split_url(url_);
}

std::string HttpNormalizer::canonicalize(const ProblemInstance& problem, const std::string& completion) {
  const auto [base, path] = harness::split_url(url_);
  httplib::Client client(base);
  client.set_connection_timeout(timeout_seconds_, 0);
  client.set_read_timeout(timeout_seconds_, 0);
  httplib::Headers headers;
  if (const char* key = std::getenv("RLVR_NORMALIZER_API_KEY")) headers.emplace("Authorization", std::string("Bearer ") + key);
  const Json request = {{"problem", problem.prompt}, {"completion", completion}};
  auto res = client.Post(path, headers, request.dump(), "application/json");
  if (!res) throw parsing::NormalizerUnavailable("normalizer unreachable: " + httplib::to_string(res.error()));
  if (res->status != 200) throw parsing::NormalizerUnavailable("normalizer answered HTTP " + std::to_string(res->status));
  const Json body = Json::parse(res->body, nullptr, false);
  if (body.is_discarded() || !body.is_object() || !body.contains("canonical") || !body["canonical"].is_string()) {
    throw parsing::NormalizerUnavailable("normalizer returned an unexpected payload");
  }
  return body["canonical"].get<std::string>();
}

}  // namespace rlvr::service
