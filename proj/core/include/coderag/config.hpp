#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>

#include "coderag/chat_client.hpp"
#include "coderag/embedder.hpp"
#include "coderag/lexical_index.hpp"
#include "coderag/pipeline.hpp"

namespace coderag {

/// Settings read from a `key = value` file.
///
///   index_dir            directory holding corpus and index segments
///   technique            base | identifier:<kind> | bm25 | semantic | hybrid
///   mode                 incomplete-context | complete-snippet
///   k                    retrieved snippets per prompt
///   budget               prompt token budget
///   token_counter        code | chars4
///   template_lang        zh | en
///   template.<id>        path of a template replacing the shipped one
///   annotations          true | false
///   max_in_flight        concurrent LLM requests
///   bm25.k, bm25.b       BM25 parameters
///   bm25.raw_idf         true keeps negative IDF values
///   metric.alpha .. metric.delta, metric.keyword_weight
///   llm.endpoint, llm.model, llm.timeout_ms, llm.max_retries, llm.token_env
///   lookup.endpoint, lookup.model, lookup.token_env   identifier extraction model
///   embed.kind           builtin | remote
///   embed.dim, embed.order, embed.char_cap
///   embed.endpoint, embed.model, embed.token_env, embed.batch_size,
///   embed.max_in_flight, embed.timeout_ms, embed.max_retries
///   serve.host, serve.port, serve.token_env
///
/// Tokens are never read from the file: `*.token_env` names the
/// environment variable that holds them.
struct Settings {
  std::filesystem::path index_dir = "index";
  PipelineConfig pipeline;
  Bm25Params bm25;
  ChatClientConfig llm;
  std::optional<ChatClientConfig> lookup;
  EmbedderSpec embed;
  std::string serve_host = "127.0.0.1";
  int serve_port = 8080;
  std::string serve_token_env;  // empty = no bearer check

  /// Applies one setting; throws Error(Config) for unknown keys or bad values.
  void set(std::string_view key, std::string_view value);
};

/// Throws Error(Config) with the 1-based line of the offending entry.
Settings parse_settings(std::string_view text, const std::filesystem::path& base_dir = {});
Settings load_settings(const std::filesystem::path& path);

}  // namespace coderag
