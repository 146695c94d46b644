#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "coderag/chat_client.hpp"
#include "coderag/prompt.hpp"

namespace coderag {

/// The code in a model reply: the first fenced block's contents, else the
/// longest brace-balanced region, else the whole reply.
std::string extract_code(std::string_view reply);

struct CompletionRecord {
  std::string example_id;
  std::string technique;
  std::string mode;
  std::string template_id;
  std::size_t token_count = 0;
  std::vector<DocId> provenance;
  bool prompt_truncated = false;
  std::string generated_code;
  std::string model;
  double latency_ms = 0.0;
  std::string response_id;
  int retries = 0;
};

/// Sends the bundle as one user message at temperature 0. Errors from the
/// client propagate.
CompletionRecord complete(const PromptBundle& bundle, ChatClient& client, const std::string& example_id);

}  // namespace coderag
