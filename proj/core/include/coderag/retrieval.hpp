#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "coderag/corpus.hpp"
#include "coderag/embedder.hpp"
#include "coderag/lexical_index.hpp"
#include "coderag/vector_store.hpp"

namespace coderag {

enum class Technique { Bm25, Semantic, Hybrid };
enum class QueryMode { IncompleteContext, CompleteSnippet };

std::string_view to_string(Technique t);
std::string_view to_string(QueryMode m);
/// Throws Error(UnknownTechnique).
Technique parse_technique(std::string_view text);
/// Throws Error(Config).
QueryMode parse_query_mode(std::string_view text);

struct RetrievalQuery {
  QueryMode mode = QueryMode::IncompleteContext;
  std::string text;
  std::string example_id;

  /// incomplete-context uses the context verbatim; complete-snippet
  /// appends the ground truth to it.
  static RetrievalQuery from_example(QueryMode mode, const std::string& example_id,
                                     const std::string& context, const std::string& ground_truth);
};

struct ScoredSnippet {
  DocId doc = 0;
  Technique technique = Technique::Bm25;
  double score = 0.0;
  std::size_t rank = 0;  // 1-based
  // Per-technique scores carried through fusion.
  std::optional<double> lexical_score;
  std::optional<double> semantic_score;

  bool operator==(const ScoredSnippet&) const = default;
};

inline constexpr std::string_view kFusionPolicy = "round-robin-lexical-first";

struct RetrievalConfig {
  std::size_t k = 4;
  Technique technique = Technique::Bm25;
};

/// Borrowed views of whatever indices are loaded.
struct RetrievalIndices {
  const Corpus* corpus = nullptr;
  const LexicalIndex* lexical = nullptr;
  const VectorStore* semantic = nullptr;
  Embedder* embedder = nullptr;
};

std::vector<ScoredSnippet> ranked_lexical(const std::vector<LexicalHit>& hits);
std::vector<ScoredSnippet> ranked_semantic(const std::vector<SemanticHit>& hits);

/// Throws Error(Config) for k = 0 and Error(EmptyIndex) when the index the
/// technique needs is not loaded; index errors propagate.
std::vector<ScoredSnippet> retrieve(const RetrievalQuery& query, const RetrievalConfig& cfg,
                                    const RetrievalIndices& indices);

/// Interleaves lex1, sem1, lex2, sem2, ... skipping doc ids already taken,
/// until k snippets or both lists are exhausted.
std::vector<ScoredSnippet> hybrid_merge(const std::vector<ScoredSnippet>& lex,
                                        const std::vector<ScoredSnippet>& sem, std::size_t k);

/// One persisted retrieval result list.
struct RetrievalRecord {
  std::string example_id;
  Technique technique = Technique::Bm25;
  QueryMode mode = QueryMode::IncompleteContext;
  std::size_t k = 4;
  std::vector<std::pair<DocId, double>> hits;

  bool operator==(const RetrievalRecord&) const = default;
};

std::string to_json_line(const RetrievalRecord& record);
/// Throws Error(Schema) naming `line_no`.
RetrievalRecord retrieval_record_from_json_line(std::string_view line, std::size_t line_no);
std::vector<RetrievalRecord> parse_retrieval_records(std::string_view content);

struct OverlapReport {
  std::size_t distinct_count = 0;               // examples with disjoint doc sets
  std::map<std::string, std::size_t> overlaps;  // example id -> |A ∩ B|
};

/// Throws Error(ExampleSetMismatch) unless both runs cover the same
/// example ids with equal k.
OverlapReport overlap_analysis(const std::vector<RetrievalRecord>& run_a,
                               const std::vector<RetrievalRecord>& run_b);

}  // namespace coderag
