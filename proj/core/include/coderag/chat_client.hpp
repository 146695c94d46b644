#pragma once

#include <atomic>
#include <chrono>
#include <functional>
#include <memory>
#include <string>

#include "coderag/http_util.hpp"

namespace coderag {

struct ChatRequest {
  std::string content;       // the single user message
  double temperature = 0.0;
  std::string request_id;    // caller's tag, never sent upstream
};

struct ChatResponse {
  std::string content;
  std::string response_id;
  int retries = 0;
};

class ChatClient {
 public:
  virtual ~ChatClient() = default;
  /// Throws HttpError(LlmHttp), Error(Timeout) or Error(LlmUnavailable).
  virtual ChatResponse chat(const ChatRequest& request) = 0;
  virtual std::string model() const = 0;
};

struct ChatClientConfig {
  std::string endpoint;  // http://host:port/v1/chat/completions
  std::string model;
  std::string token_env = "CODERAG_LLM_TOKEN";
  std::chrono::milliseconds timeout{60000};
  int max_retries = 3;
  // Receives one line per exchange; the bearer token never appears in it.
  std::function<void(const std::string&)> log;
};

/// Chat-completions client: POST {model, messages: [{role: "user",
/// content}], temperature}, reading choices[0].message.content.
class HttpChatClient : public ChatClient {
 public:
  HttpChatClient(ChatClientConfig config, std::shared_ptr<HttpTransport> transport = nullptr,
                 RetryPolicy retry = {});

  ChatResponse chat(const ChatRequest& request) override;
  std::string model() const override { return config_.model; }

 private:
  ChatClientConfig config_;
  HttpUrl url_;
  std::shared_ptr<HttpTransport> transport_;
  RetryPolicy retry_;
};

/// In-process client answering through a callback.
class MockChatClient : public ChatClient {
 public:
  using Responder = std::function<std::string(const ChatRequest&)>;

  explicit MockChatClient(Responder responder, std::string model = "mock");

  ChatResponse chat(const ChatRequest& request) override;
  std::string model() const override { return model_; }
  std::size_t calls() const { return calls_; }

 private:
  Responder responder_;
  std::string model_;
  std::atomic<std::size_t> calls_{0};
};

}  // namespace coderag
