#include "coderag/lexical_index.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include <json.hpp>

#include "coderag/errors.hpp"
#include "coderag/tokenizer.hpp"

namespace coderag {

namespace {

void check_params(const Bm25Params& p) {
  if (!(p.k > 0.0) || !(p.b >= 0.0 && p.b <= 1.0)) {
    throw Error(ErrorCode::Config, "BM25 parameters require k > 0 and 0 <= b <= 1");
  }
}

bool by_score(const LexicalHit& a, const LexicalHit& b) {
  if (a.score != b.score) return a.score > b.score;
  return a.doc < b.doc;
}

}  // namespace

LexicalIndex LexicalIndex::build(const Corpus& corpus, const Bm25Params& params) {
  check_params(params);
  LexicalIndex index;
  index.params_ = params;
  index.corpus_hash_ = corpus.hash();
  for (DocId id = 0; id < corpus.size(); ++id) {
    const CodeUnit& unit = corpus.at(id);
    if (auto problem = validate(unit)) {
      throw Error(ErrorCode::CorpusFormat, "record " + std::to_string(id + 1) + ": " + *problem);
    }
    if (unit.kind != UnitKind::FuncDef) continue;
    const auto tokens = tokenize_code(unit.text);
    std::map<std::string, std::size_t> tf;
    for (const auto& t : tokens) ++tf[t];
    for (const auto& [term, n] : tf) index.postings_[term].push_back(Posting{id, n});
    index.doc_len_[id] = tokens.size();
  }
  index.finish();
  return index;
}

void LexicalIndex::finish() {
  std::size_t total = 0;
  for (const auto& [doc, len] : doc_len_) total += len;
  avg_len_ = doc_len_.empty() ? 0.0 : static_cast<double>(total) / static_cast<double>(doc_len_.size());
}

std::size_t LexicalIndex::doc_freq(std::string_view term) const {
  const auto it = postings_.find(term);
  return it == postings_.end() ? 0 : it->second.size();
}

std::size_t LexicalIndex::doc_len(DocId doc) const {
  const auto it = doc_len_.find(doc);
  return it == doc_len_.end() ? 0 : it->second;
}

double LexicalIndex::idf(std::string_view term) const {
  const double n = static_cast<double>(n_docs());
  const double df = static_cast<double>(doc_freq(term));
  const double value = std::log((n - df + 0.5) / (df + 0.5));
  return params_.raw_idf ? value : std::max(0.0, value);
}

double LexicalIndex::tf_mod(std::size_t tf, std::size_t len) const {
  const double f = static_cast<double>(tf);
  const double ratio = avg_len_ > 0.0 ? static_cast<double>(len) / avg_len_ : 0.0;
  return f * (params_.k + 1.0) / (f + params_.k * (1.0 - params_.b + params_.b * ratio));
}

std::size_t LexicalIndex::term_frequency(const std::vector<Posting>& list, DocId doc) const {
  const auto it = std::lower_bound(list.begin(), list.end(), doc,
                                   [](const Posting& p, DocId d) { return p.doc < d; });
  return it != list.end() && it->doc == doc ? it->tf : 0;
}

double LexicalIndex::score(const std::vector<std::string>& query_tokens, DocId doc) const {
  if (n_docs() == 0) throw Error(ErrorCode::EmptyIndex, "lexical index has no documents");
  const std::size_t len = doc_len(doc);
  double total = 0.0;
  for (const auto& term : query_tokens) {
    const auto it = postings_.find(term);
    if (it == postings_.end()) continue;
    const std::size_t tf = term_frequency(it->second, doc);
    if (tf == 0) continue;
    total += idf(term) * tf_mod(tf, len);
  }
  return total;
}

std::vector<LexicalHit> LexicalIndex::search(std::string_view query, std::size_t k) const {
  return search_tokens(tokenize_code(query), k);
}

std::vector<LexicalHit> LexicalIndex::search_tokens(const std::vector<std::string>& query_tokens,
                                                    std::size_t k) const {
  if (n_docs() == 0) throw Error(ErrorCode::EmptyIndex, "lexical index has no documents");
  if (k == 0) return {};
  std::map<DocId, double> acc;
  for (const auto& term : query_tokens) {
    const auto it = postings_.find(term);
    if (it == postings_.end()) continue;
    const double w = idf(term);
    for (const auto& p : it->second) acc[p.doc] += w * tf_mod(p.tf, doc_len(p.doc));
  }
  std::vector<LexicalHit> hits;
  hits.reserve(acc.size());
  for (const auto& [doc, s] : acc) hits.push_back(LexicalHit{doc, s});
  const std::size_t n = std::min(k, hits.size());
  std::partial_sort(hits.begin(), hits.begin() + static_cast<std::ptrdiff_t>(n), hits.end(), by_score);
  hits.resize(n);
  return hits;
}

std::string LexicalIndex::serialize() const {
  nlohmann::ordered_json doc;
  doc["format"] = "coderag-lexical-v1";
  doc["corpus_hash"] = corpus_hash_;
  doc["params"] = {{"k", params_.k}, {"b", params_.b}, {"raw_idf", params_.raw_idf}};
  nlohmann::ordered_json lens = nlohmann::ordered_json::array();
  for (const auto& [id, len] : doc_len_) lens.push_back({id, len});
  doc["doc_len"] = std::move(lens);
  nlohmann::ordered_json post = nlohmann::ordered_json::object();
  for (const auto& [term, list] : postings_) {
    nlohmann::ordered_json entries = nlohmann::ordered_json::array();
    for (const auto& p : list) entries.push_back({p.doc, p.tf});
    post[term] = std::move(entries);
  }
  doc["postings"] = std::move(post);
  return doc.dump() + "\n";
}

LexicalIndex LexicalIndex::deserialize(std::string_view content) {
  LexicalIndex index;
  try {
    const auto doc = nlohmann::json::parse(content);
    if (doc.at("format") != "coderag-lexical-v1") {
      throw Error(ErrorCode::CorpusFormat, "unknown lexical index format");
    }
    index.corpus_hash_ = doc.at("corpus_hash").get<std::string>();
    const auto& p = doc.at("params");
    index.params_ = Bm25Params{p.at("k").get<double>(), p.at("b").get<double>(),
                               p.at("raw_idf").get<bool>()};
    check_params(index.params_);
    for (const auto& e : doc.at("doc_len")) index.doc_len_[e.at(0).get<DocId>()] = e.at(1).get<std::size_t>();
    for (const auto& [term, entries] : doc.at("postings").items()) {
      auto& list = index.postings_[term];
      for (const auto& e : entries) list.push_back(Posting{e.at(0).get<DocId>(), e.at(1).get<std::size_t>()});
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::CorpusFormat, std::string("lexical index: ") + e.what());
  }
  index.finish();
  return index;
}

}  // namespace coderag
