#pragma once

#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "coderag/benchmark_set.hpp"
#include "coderag/chat_client.hpp"
#include "coderag/codebleu.hpp"
#include "coderag/completion.hpp"
#include "coderag/identifier_index.hpp"
#include "coderag/prompt.hpp"
#include "coderag/retrieval.hpp"

namespace coderag {

/// base | identifier:<kind> | bm25 | semantic | hybrid
struct TechniqueSpec {
  enum class Family { Base, Identifier, Similarity };
  Family family = Family::Base;
  UnitKind kind = UnitKind::FuncDef;      // Identifier only
  Technique retrieval = Technique::Bm25;  // Similarity only

  std::string name() const;
  /// Throws Error(UnknownTechnique).
  static TechniqueSpec parse(std::string_view text);
};

struct PipelineConfig {
  TechniqueSpec technique;
  QueryMode mode = QueryMode::IncompleteContext;
  std::size_t k = 4;
  std::size_t budget = 2048;
  std::string token_counter = "code";
  Language language = Language::En;
  // Optional replacements for the shipped templates, by TemplateId.
  std::map<TemplateId, PromptTemplate> templates;
  CodeBleuWeights weights;
  CodeBleuOptions metric_options;
  bool include_annotations = false;
  std::size_t max_in_flight = 4;
};

struct PipelineIndices {
  const Corpus* corpus = nullptr;
  const IdentifierIndex* identifier = nullptr;
  const LexicalIndex* lexical = nullptr;
  const VectorStore* semantic = nullptr;
  Embedder* embedder = nullptr;
  ChatClient* lookup_client = nullptr;  // identifier extraction; null = static heuristic
};

struct ExampleResult {
  std::string example_id;
  Domain domain = Domain::Utils;
  Difficulty difficulty = Difficulty::Easy;
  CompletionRecord record;
  EvalScores scores;
  std::size_t snippet_count = 0;  // retrieved items rendered in the prompt
  std::vector<std::pair<DocId, double>> retrieved;
  bool failed = false;
  std::string error;
  std::vector<std::string> flags;
};

struct PipelineRun {
  std::string technique;
  std::string mode;
  std::string model;
  PipelineConfig config;
  std::vector<ExampleResult> results;  // benchmark order
};

/// Throws Error(EmptyIndex) when an index the technique needs is not
/// loaded, Error(Config) for k = 0 with a retrieval technique.
void require_indices(const PipelineConfig& config, const PipelineIndices& indices);

/// Throws only for configuration problems (missing index, unusable
/// template, unreachable model); failures on single examples are scored
/// 0 and recorded.
PipelineRun run_pipeline(const std::vector<BenchmarkExample>& benchmark, const PipelineConfig& config,
                         const PipelineIndices& indices, ChatClient& client);

/// Prompt for one example under `config`, with the retrieved hits.
struct PreparedPrompt {
  PromptBundle bundle;
  std::vector<std::pair<DocId, double>> retrieved;
  std::vector<std::string> flags;
};
PreparedPrompt prepare_prompt(const BenchmarkExample& example, const PipelineConfig& config,
                              const PipelineIndices& indices);

/// Mock responders for offline runs.
/// Answers each example with its ground truth (matched by request id).
MockChatClient::Responder ground_truth_responder(const std::vector<BenchmarkExample>& benchmark);
/// Answers with the first rendered item of the prompt in a code fence, or
/// with an empty body when the prompt has none.
MockChatClient::Responder first_snippet_responder();

}  // namespace coderag
