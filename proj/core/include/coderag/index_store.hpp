#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include "coderag/corpus.hpp"
#include "coderag/identifier_index.hpp"
#include "coderag/lexical_index.hpp"
#include "coderag/vector_store.hpp"

namespace coderag {

/// On-disk index directory:
///   manifest.json           corpus hash and the segments present
///   corpus.jsonl            the corpus the segments were built from
///   identifier/<kind>.json  one identifier segment per unit kind
///   lexical.json            BM25 postings with parameters
///   semantic.bin/.json      vector segment and its manifest
class IndexDir {
 public:
  explicit IndexDir(std::filesystem::path root) : root_(std::move(root)) {}

  const std::filesystem::path& root() const { return root_; }

  /// Writes the corpus and a fresh manifest. Segments built from another
  /// corpus are removed.
  void write_corpus(const Corpus& corpus) const;
  /// Throws Error(EmptyIndex) when no corpus has been written.
  Corpus load_corpus() const;

  void save(const IdentifierIndex& index, const Corpus& corpus) const;
  void save(const LexicalIndex& index) const;
  void save(const VectorStore& store) const;

  bool has_identifier() const;
  bool has_lexical() const;
  bool has_semantic() const;

  /// Loaders throw Error(StaleIndex) when a segment's corpus hash differs
  /// from `corpus`, Error(EmptyIndex) when the segment is absent.
  IdentifierIndex load_identifier(const Corpus& corpus) const;
  LexicalIndex load_lexical(const Corpus& corpus) const;
  VectorStore load_semantic(const Corpus& corpus) const;

  /// Manifest contents as JSON text.
  std::string manifest() const;

 private:
  void update_manifest(const std::string& segment, const std::string& corpus_hash) const;
  std::string manifest_corpus_hash() const;

  std::filesystem::path root_;
};

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view content);

}  // namespace coderag
