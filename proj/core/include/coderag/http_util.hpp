#pragma once

#include <chrono>
#include <functional>
#include <optional>
#include <string>

namespace coderag {

struct HttpUrl {
  std::string host;
  int port = 80;
  std::string path = "/";
};

/// Accepts `http://host[:port][/path]`. Throws Error(Config) otherwise.
HttpUrl parse_http_url(const std::string& url);

struct HttpResult {
  int status = 0;  // 0 when no response was received
  std::string body;
  std::optional<double> retry_after_seconds;
  bool timed_out = false;
  std::string transport_error;
};

/// Minimal JSON POST transport, replaceable in tests.
class HttpTransport {
 public:
  virtual ~HttpTransport() = default;
  virtual HttpResult post_json(const HttpUrl& url, const std::string& body,
                               const std::string& bearer_token,
                               std::chrono::milliseconds timeout) = 0;
};

/// Plain-HTTP transport backed by cpp-httplib.
class DefaultHttpTransport : public HttpTransport {
 public:
  HttpResult post_json(const HttpUrl& url, const std::string& body, const std::string& bearer_token,
                       std::chrono::milliseconds timeout) override;
};

struct RetryPolicy {
  int max_retries = 3;
  std::chrono::milliseconds base_delay{500};
  std::chrono::milliseconds max_delay{8000};
  // Injected so tests do not sleep.
  std::function<void(std::chrono::milliseconds)> sleep;
};

/// Delay before retry number `attempt` (0-based): base * 2^attempt, raised
/// to any server-provided Retry-After, capped at max_delay.
std::chrono::milliseconds retry_delay(const RetryPolicy& policy, int attempt,
                                      std::optional<double> retry_after_seconds);

bool is_retryable_status(int status);

/// First `max_bytes` of a response body for error messages.
std::string body_excerpt(const std::string& body, std::size_t max_bytes = 200);

/// Reads a secret from the environment; empty when unset.
std::string env_or_empty(const std::string& name);

}  // namespace coderag
