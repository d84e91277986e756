#pragma once

#include <string>

#include "rlvr/harness.hpp"

namespace rlvr::harness {

/// Generic completion endpoint: POST {model, prompt, temperature,
/// max_tokens} -> {text, truncated}. Transport failures and non-200
/// answers raise TransportError.
class HttpModelClient : public ModelClient {
 public:
  /// `api_key_env` names the environment variable holding a bearer token
  /// (empty for none).
  HttpModelClient(std::string model_id, std::string url, std::string api_key_env = {}, int timeout_seconds = 120);
  const std::string& model_id() const override { return id_; }
  ModelOutput complete(const std::string& prompt, const Decoding& decoding) override;

 private:
  std::string id_;
  std::string url_;
  std::string api_key_env_;
  int timeout_seconds_;
};

/// Split "http://host:port/path" into ("http://host:port", "/path").
std::pair<std::string, std::string> split_url(const std::string& url);

}  // namespace rlvr::harness
