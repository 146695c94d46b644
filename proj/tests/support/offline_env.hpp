#pragma once

#include <memory>

#include "coderag/benchmark_set.hpp"
#include "coderag/corpus.hpp"
#include "coderag/embedder.hpp"
#include "coderag/identifier_index.hpp"
#include "coderag/lexical_index.hpp"
#include "coderag/pipeline.hpp"
#include "coderag/vector_store.hpp"
#include "support/fixtures.hpp"

namespace testing_support {

/// Synthetic repos, every index, and the 10-example benchmark.
struct OfflineEnv {
  coderag::Corpus corpus;
  coderag::IdentifierIndex identifier;
  coderag::LexicalIndex lexical;
  std::unique_ptr<coderag::BuiltinHashEmbedder> embedder;
  coderag::VectorStore semantic;
  std::vector<coderag::BenchmarkExample> benchmark;

  OfflineEnv()
      : corpus(synthetic_corpus()),
        identifier(coderag::IdentifierIndex::build(corpus)),
        lexical(coderag::LexicalIndex::build(corpus)),
        embedder(std::make_unique<coderag::BuiltinHashEmbedder>()),
        semantic(coderag::build_semantic_index(corpus, *embedder).store),
        benchmark(coderag::load_benchmark(source_dir() / "data" / "benchmark.jsonl")) {}

  coderag::PipelineIndices indices() {
    return coderag::PipelineIndices{&corpus, &identifier, &lexical, &semantic, embedder.get(), nullptr};
  }
};

inline const std::vector<std::string>& all_techniques() {
  static const std::vector<std::string> t = {"base",
                                             "identifier:msg-def",
                                             "identifier:class-def",
                                             "identifier:func-dec",
                                             "identifier:func-def",
                                             "bm25",
                                             "semantic",
                                             "hybrid"};
  return t;
}

inline coderag::PipelineConfig config_for(const std::string& technique,
                                          coderag::QueryMode mode = coderag::QueryMode::IncompleteContext) {
  coderag::PipelineConfig c;
  c.technique = coderag::TechniqueSpec::parse(technique);
  c.mode = mode;
  return c;
}

}  // namespace testing_support
