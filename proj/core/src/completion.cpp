#include "coderag/completion.hpp"

#include <chrono>
#include <optional>

namespace coderag {

namespace {

std::optional<std::string> first_fenced_block(std::string_view reply) {
  std::size_t pos = 0;
  while (pos < reply.size()) {
    const auto open = reply.find("```", pos);
    if (open == std::string_view::npos) return std::nullopt;
    if (open != 0 && reply[open - 1] != '\n') {
      pos = open + 3;
      continue;
    }
    const auto line_end = reply.find('\n', open);
    if (line_end == std::string_view::npos) return std::nullopt;
    // The closing fence starts a line; the block may also run to the end.
    std::size_t search = line_end + 1;
    while (true) {
      const auto close = reply.find("```", search);
      if (close == std::string_view::npos) return std::string(reply.substr(line_end + 1));
      if (close == line_end + 1 || reply[close - 1] == '\n') {
        std::string_view body = reply.substr(line_end + 1, close - line_end - 1);
        if (!body.empty() && body.back() == '\n') body.remove_suffix(1);
        return std::string(body);
      }
      search = close + 3;
    }
  }
  return std::nullopt;
}

// Start and end of the longest region spanning a balanced top-level
// brace pair, widened to the start of its first line.
std::optional<std::string> longest_balanced(std::string_view reply) {
  std::size_t best_begin = 0, best_len = 0;
  int depth = 0;
  std::size_t open_at = 0;
  for (std::size_t i = 0; i < reply.size(); ++i) {
    if (reply[i] == '{') {
      if (depth == 0) open_at = i;
      ++depth;
    } else if (reply[i] == '}') {
      if (depth == 0) continue;
      if (--depth == 0) {
        const auto line = reply.rfind('\n', open_at);
        const std::size_t begin = line == std::string_view::npos ? 0 : line + 1;
        const std::size_t len = i + 1 - begin;
        if (len > best_len) {
          best_begin = begin;
          best_len = len;
        }
      }
    }
  }
  if (best_len == 0) return std::nullopt;
  return std::string(reply.substr(best_begin, best_len));
}

}  // namespace

std::string extract_code(std::string_view reply) {
  if (auto fenced = first_fenced_block(reply)) return *fenced;
  if (auto balanced = longest_balanced(reply)) return *balanced;
  return std::string(reply);
}

CompletionRecord complete(const PromptBundle& bundle, ChatClient& client, const std::string& example_id) {
  ChatRequest request;
  request.content = bundle.text;
  request.temperature = 0.0;
  request.request_id = example_id;
  const auto start = std::chrono::steady_clock::now();
  const ChatResponse response = client.chat(request);
  const auto elapsed = std::chrono::steady_clock::now() - start;

  CompletionRecord record;
  record.example_id = example_id;
  record.template_id = std::string(to_string(bundle.template_id));
  record.token_count = bundle.token_count;
  record.provenance = bundle.included;
  record.prompt_truncated = bundle.truncated || bundle.context_truncated;
  record.generated_code = extract_code(response.content);
  record.model = client.model();
  record.latency_ms = std::chrono::duration<double, std::milli>(elapsed).count();
  record.response_id = response.response_id;
  record.retries = response.retries;
  return record;
}

}  // namespace coderag
