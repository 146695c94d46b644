#include "coderag/http_util.hpp"

#include <algorithm>
#include <cstdlib>
#include <thread>

#include <httplib.h>

#include "coderag/errors.hpp"

namespace coderag {

HttpUrl parse_http_url(const std::string& url) {
  constexpr std::string_view kScheme = "http://";
  if (!std::string_view(url).starts_with(kScheme)) {
    throw Error(ErrorCode::Config, "endpoint must be an http:// URL: " + url);
  }
  std::string rest = url.substr(kScheme.size());
  HttpUrl out;
  const auto slash = rest.find('/');
  if (slash != std::string::npos) {
    out.path = rest.substr(slash);
    rest.resize(slash);
  }
  const auto colon = rest.rfind(':');
  if (colon != std::string::npos) {
    const std::string port = rest.substr(colon + 1);
    if (port.empty() || !std::all_of(port.begin(), port.end(), ::isdigit) || port.size() > 5) {
      throw Error(ErrorCode::Config, "bad port in endpoint: " + url);
    }
    out.port = std::stoi(port);
    rest.resize(colon);
  }
  if (rest.empty()) throw Error(ErrorCode::Config, "missing host in endpoint: " + url);
  out.host = rest;
  return out;
}

HttpResult DefaultHttpTransport::post_json(const HttpUrl& url, const std::string& body,
                                           const std::string& bearer_token,
                                           std::chrono::milliseconds timeout) {
  httplib::Client client(url.host, url.port);
  const auto secs = std::chrono::duration_cast<std::chrono::seconds>(timeout);
  const auto usecs = std::chrono::duration_cast<std::chrono::microseconds>(timeout - secs);
  client.set_connection_timeout(secs.count(), usecs.count());
  client.set_read_timeout(secs.count(), usecs.count());
  client.set_write_timeout(secs.count(), usecs.count());
  httplib::Headers headers;
  if (!bearer_token.empty()) headers.emplace("Authorization", "Bearer " + bearer_token);
  auto res = client.Post(url.path, headers, body, "application/json");
  HttpResult out;
  if (!res) {
    out.timed_out = res.error() == httplib::Error::Read || res.error() == httplib::Error::Write ||
                    res.error() == httplib::Error::ConnectionTimeout;
    out.transport_error = httplib::to_string(res.error());
    return out;
  }
  out.status = res->status;
  out.body = res->body;
  if (res->has_header("Retry-After")) {
    const std::string value = res->get_header_value("Retry-After");
    char* end = nullptr;
    const double secs_value = std::strtod(value.c_str(), &end);
    if (end != value.c_str() && secs_value >= 0) out.retry_after_seconds = secs_value;
  }
  return out;
}

std::chrono::milliseconds retry_delay(const RetryPolicy& policy, int attempt,
                                      std::optional<double> retry_after_seconds) {
  std::chrono::milliseconds delay = policy.base_delay * (1L << std::min(attempt, 20));
  if (retry_after_seconds) {
    const auto server = std::chrono::milliseconds(static_cast<long long>(*retry_after_seconds * 1000.0));
    delay = std::max(delay, server);
  }
  return std::min(delay, policy.max_delay);
}

bool is_retryable_status(int status) { return status == 429 || status >= 500; }

std::string body_excerpt(const std::string& body, std::size_t max_bytes) {
  return body.size() <= max_bytes ? body : body.substr(0, max_bytes);
}

std::string env_or_empty(const std::string& name) {
  if (name.empty()) return {};
  const char* value = std::getenv(name.c_str());
  return value == nullptr ? std::string() : std::string(value);
}

}  // namespace coderag
