#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "coderag/corpus.hpp"
#include "coderag/embedder.hpp"
#include "coderag/embedding.hpp"

namespace coderag {

struct VectorEntry {
  DocId doc = 0;
  Embedding embedding;
};

struct SemanticHit {
  DocId doc = 0;
  double score = 0.0;
};

class VectorStore {
 public:
  VectorStore() = default;
  VectorStore(std::string fingerprint, std::string corpus_hash);

  /// Throws Error(DimensionMismatch) when `e` disagrees with stored vectors.
  void add(DocId doc, Embedding e);
  bool contains(DocId doc) const;

  const std::vector<VectorEntry>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  std::size_t dim() const { return entries_.empty() ? 0 : entries_.front().embedding.dim(); }
  const std::string& fingerprint() const { return fingerprint_; }
  const std::string& corpus_hash() const { return corpus_hash_; }
  std::size_t truncated_inputs = 0;

  /// Exhaustive cosine scan; top-k by score, ties by ascending doc id.
  std::vector<SemanticHit> search(const Embedding& query, std::size_t k) const;

  /// Flat little-endian segment: "CRVS", version, dim, count, then per
  /// entry doc id, norm, and dim values.
  std::string serialize_binary() const;
  std::string manifest_json() const;
  static VectorStore deserialize(std::string_view binary, std::string_view manifest);

 private:
  std::string fingerprint_;
  std::string corpus_hash_;
  std::vector<VectorEntry> entries_;
};

struct EmbedFailure {
  std::vector<DocId> docs;
  std::string message;
};

struct SemanticBuild {
  VectorStore store;
  std::vector<EmbedFailure> failures;
  bool complete() const { return failures.empty(); }
};

/// Embeds every func-def unit. Units already present in `resume_from`
/// (same fingerprint and corpus) are reused; failed chunks are reported
/// and left out, so a later call can resume from the partial store.
SemanticBuild build_semantic_index(const Corpus& corpus, Embedder& embedder,
                                   const VectorStore* resume_from = nullptr,
                                   std::size_t chunk_size = 64);

/// Throws Error(FingerprintMismatch) when `embedder` differs from the one
/// the store was built with, Error(EmptyIndex) for an empty store.
std::vector<SemanticHit> search_semantic(std::string_view query, std::size_t k,
                                         const VectorStore& store, Embedder& embedder);

}  // namespace coderag
