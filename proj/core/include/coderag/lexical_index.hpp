#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "coderag/corpus.hpp"

namespace coderag {

struct Bm25Params {
  double k = 1.2;
  double b = 0.75;
  bool raw_idf = false;  // keep negative IDF values instead of flooring at 0
};

struct Posting {
  DocId doc = 0;
  std::size_t tf = 0;
};

struct LexicalHit {
  DocId doc = 0;
  double score = 0.0;
};

/// BM25 inverted index over the func-def units of a corpus.
class LexicalIndex {
 public:
  LexicalIndex() = default;

  /// Throws Error(CorpusFormat) if a unit fails validation.
  static LexicalIndex build(const Corpus& corpus, const Bm25Params& params = {});

  double idf(std::string_view term) const;
  /// Throws Error(EmptyIndex) when no documents are indexed.
  double score(const std::vector<std::string>& query_tokens, DocId doc) const;
  /// Top-k documents containing at least one query term, by descending
  /// score then ascending doc id.
  std::vector<LexicalHit> search(std::string_view query, std::size_t k) const;
  std::vector<LexicalHit> search_tokens(const std::vector<std::string>& query_tokens,
                                        std::size_t k) const;

  const Bm25Params& params() const { return params_; }
  std::size_t n_docs() const { return doc_len_.size(); }
  double avg_len() const { return avg_len_; }
  std::size_t doc_freq(std::string_view term) const;
  std::size_t doc_len(DocId doc) const;
  const std::map<DocId, std::size_t>& doc_lengths() const { return doc_len_; }
  const std::map<std::string, std::vector<Posting>, std::less<>>& postings() const {
    return postings_;
  }
  const std::string& corpus_hash() const { return corpus_hash_; }

  std::string serialize() const;
  static LexicalIndex deserialize(std::string_view content);

 private:
  double tf_mod(std::size_t tf, std::size_t len) const;
  std::size_t term_frequency(const std::vector<Posting>& list, DocId doc) const;
  void finish();

  Bm25Params params_;
  std::map<std::string, std::vector<Posting>, std::less<>> postings_;
  std::map<DocId, std::size_t> doc_len_;
  double avg_len_ = 0.0;
  std::string corpus_hash_;
};

}  // namespace coderag
