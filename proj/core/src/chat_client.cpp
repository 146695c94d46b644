#include "coderag/chat_client.hpp"

#include <thread>

#include <json.hpp>

#include "coderag/errors.hpp"

namespace coderag {

HttpChatClient::HttpChatClient(ChatClientConfig config, std::shared_ptr<HttpTransport> transport,
                               RetryPolicy retry)
    : config_(std::move(config)), transport_(std::move(transport)), retry_(std::move(retry)) {
  if (config_.model.empty()) throw Error(ErrorCode::Config, "chat client needs a model name");
  if (config_.endpoint.empty()) throw Error(ErrorCode::LlmUnavailable, "no chat endpoint configured");
  url_ = parse_http_url(config_.endpoint);
  if (!transport_) transport_ = std::make_shared<DefaultHttpTransport>();
  retry_.max_retries = config_.max_retries;
  if (!retry_.sleep) retry_.sleep = [](std::chrono::milliseconds d) { std::this_thread::sleep_for(d); };
}

ChatResponse HttpChatClient::chat(const ChatRequest& request) {
  nlohmann::ordered_json body;
  body["model"] = config_.model;
  body["messages"] = nlohmann::ordered_json::array({{{"role", "user"}, {"content", request.content}}});
  body["temperature"] = request.temperature;
  const std::string payload = body.dump();
  const std::string token = env_or_empty(config_.token_env);

  for (int attempt = 0;; ++attempt) {
    const HttpResult res = transport_->post_json(url_, payload, token, config_.timeout);
    if (config_.log) {
      config_.log("request=" + payload + " status=" + std::to_string(res.status) + " response=" + res.body);
    }
    if (res.status == 200) {
      try {
        const auto doc = nlohmann::json::parse(res.body);
        ChatResponse out;
        out.content = doc.at("choices").at(0).at("message").at("content").get<std::string>();
        out.response_id = doc.value("id", std::string());
        out.retries = attempt;
        return out;
      } catch (const nlohmann::json::exception& e) {
        throw HttpError(ErrorCode::LlmHttp, 200, body_excerpt(res.body),
                        std::string("malformed chat response: ") + e.what());
      }
    }
    const bool transport_failure = res.status == 0;
    const bool retryable = transport_failure || is_retryable_status(res.status);
    if (!retryable || attempt >= retry_.max_retries) {
      const std::string tries = " after " + std::to_string(attempt + 1) + " attempt(s)";
      if (res.timed_out) throw Error(ErrorCode::Timeout, "chat request timed out" + tries);
      if (transport_failure) {
        throw Error(ErrorCode::LlmUnavailable, "chat endpoint unreachable" + tries + ": " + res.transport_error);
      }
      throw HttpError(ErrorCode::LlmHttp, res.status, body_excerpt(res.body),
                      "chat request failed with status " + std::to_string(res.status) + tries);
    }
    retry_.sleep(retry_delay(retry_, attempt, res.retry_after_seconds));
  }
}

MockChatClient::MockChatClient(Responder responder, std::string model)
    : responder_(std::move(responder)), model_(std::move(model)) {}

ChatResponse MockChatClient::chat(const ChatRequest& request) {
  ++calls_;
  ChatResponse out;
  out.content = responder_(request);
  out.response_id = "mock-" + request.request_id;
  return out;
}

}  // namespace coderag
