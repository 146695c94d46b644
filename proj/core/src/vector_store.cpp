#include "coderag/vector_store.hpp"

#include <algorithm>
#include <bit>
#include <cstring>

#include <json.hpp>

#include "coderag/errors.hpp"

namespace coderag {

VectorStore::VectorStore(std::string fingerprint, std::string corpus_hash)
    : fingerprint_(std::move(fingerprint)), corpus_hash_(std::move(corpus_hash)) {}

void VectorStore::add(DocId doc, Embedding e) {
  if (!entries_.empty() && e.dim() != dim()) {
    throw Error(ErrorCode::DimensionMismatch, "vector of dim " + std::to_string(e.dim()) +
                                                  " added to store of dim " + std::to_string(dim()));
  }
  const auto pos = std::lower_bound(entries_.begin(), entries_.end(), doc,
                                    [](const VectorEntry& v, DocId d) { return v.doc < d; });
  if (pos != entries_.end() && pos->doc == doc) {
    pos->embedding = std::move(e);
  } else {
    entries_.insert(pos, VectorEntry{doc, std::move(e)});
  }
}

bool VectorStore::contains(DocId doc) const {
  return std::binary_search(entries_.begin(), entries_.end(), VectorEntry{doc, {}},
                            [](const VectorEntry& a, const VectorEntry& b) { return a.doc < b.doc; });
}

std::vector<SemanticHit> VectorStore::search(const Embedding& query, std::size_t k) const {
  std::vector<SemanticHit> hits;
  hits.reserve(entries_.size());
  for (const auto& e : entries_) hits.push_back(SemanticHit{e.doc, cosine(query, e.embedding)});
  const std::size_t n = std::min(k, hits.size());
  std::partial_sort(hits.begin(), hits.begin() + static_cast<std::ptrdiff_t>(n), hits.end(),
                    [](const SemanticHit& a, const SemanticHit& b) {
                      if (a.score != b.score) return a.score > b.score;
                      return a.doc < b.doc;
                    });
  hits.resize(n);
  return hits;
}

namespace {

constexpr char kMagic[4] = {'C', 'R', 'V', 'S'};
constexpr std::uint32_t kVersion = 1;

template <typename T>
void put(std::string& out, T value) {
  static_assert(sizeof(T) == 4 || sizeof(T) == 8);
  using U = std::conditional_t<sizeof(T) == 4, std::uint32_t, std::uint64_t>;
  const U bits = std::bit_cast<U>(value);
  for (std::size_t i = 0; i < sizeof(U); ++i) out += static_cast<char>((bits >> (8 * i)) & 0xFF);
}

template <typename T>
T get(std::string_view in, std::size_t& pos) {
  using U = std::conditional_t<sizeof(T) == 4, std::uint32_t, std::uint64_t>;
  if (pos + sizeof(U) > in.size()) throw Error(ErrorCode::CorpusFormat, "truncated vector segment");
  U bits = 0;
  for (std::size_t i = 0; i < sizeof(U); ++i) {
    bits |= static_cast<U>(static_cast<unsigned char>(in[pos + i])) << (8 * i);
  }
  pos += sizeof(U);
  return std::bit_cast<T>(bits);
}

}  // namespace

std::string VectorStore::serialize_binary() const {
  std::string out(kMagic, 4);
  put<std::uint32_t>(out, kVersion);
  put<std::uint32_t>(out, static_cast<std::uint32_t>(dim()));
  put<std::uint64_t>(out, entries_.size());
  for (const auto& e : entries_) {
    put<std::uint64_t>(out, e.doc);
    put<double>(out, e.embedding.norm);
    for (double v : e.embedding.values) put<double>(out, v);
  }
  return out;
}

std::string VectorStore::manifest_json() const {
  nlohmann::ordered_json doc;
  doc["format"] = "coderag-vectors-v1";
  doc["fingerprint"] = fingerprint_;
  doc["corpus_hash"] = corpus_hash_;
  doc["dim"] = dim();
  doc["count"] = entries_.size();
  doc["truncated_inputs"] = truncated_inputs;
  return doc.dump(2) + "\n";
}

VectorStore VectorStore::deserialize(std::string_view binary, std::string_view manifest) {
  VectorStore store;
  std::size_t expected_count = 0;
  try {
    const auto doc = nlohmann::json::parse(manifest);
    if (doc.at("format") != "coderag-vectors-v1") throw Error(ErrorCode::CorpusFormat, "unknown vector manifest format");
    store.fingerprint_ = doc.at("fingerprint").get<std::string>();
    store.corpus_hash_ = doc.at("corpus_hash").get<std::string>();
    store.truncated_inputs = doc.at("truncated_inputs").get<std::size_t>();
    expected_count = doc.at("count").get<std::size_t>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::CorpusFormat, std::string("vector manifest: ") + e.what());
  }
  if (binary.size() < 4 || std::memcmp(binary.data(), kMagic, 4) != 0) {
    throw Error(ErrorCode::CorpusFormat, "vector segment has a bad magic number");
  }
  std::size_t pos = 4;
  if (get<std::uint32_t>(binary, pos) != kVersion) throw Error(ErrorCode::CorpusFormat, "unsupported vector segment version");
  const std::size_t dim = get<std::uint32_t>(binary, pos);
  const std::size_t count = get<std::uint64_t>(binary, pos);
  if (count != expected_count) throw Error(ErrorCode::CorpusFormat, "vector count disagrees with manifest");
  for (std::size_t i = 0; i < count; ++i) {
    VectorEntry e;
    e.doc = get<std::uint64_t>(binary, pos);
    e.embedding.norm = get<double>(binary, pos);
    e.embedding.values.resize(dim);
    for (auto& v : e.embedding.values) v = get<double>(binary, pos);
    store.entries_.push_back(std::move(e));
  }
  if (pos != binary.size()) throw Error(ErrorCode::CorpusFormat, "trailing bytes in vector segment");
  return store;
}

SemanticBuild build_semantic_index(const Corpus& corpus, Embedder& embedder, const VectorStore* resume_from,
                                   std::size_t chunk_size) {
  SemanticBuild build;
  build.store = VectorStore(embedder.fingerprint(), corpus.hash());
  const bool reuse = resume_from != nullptr && resume_from->fingerprint() == embedder.fingerprint() &&
                     resume_from->corpus_hash() == corpus.hash();
  if (reuse) {
    for (const auto& e : resume_from->entries()) build.store.add(e.doc, e.embedding);
    build.store.truncated_inputs = resume_from->truncated_inputs;
  }
  std::vector<DocId> pending;
  for (DocId id = 0; id < corpus.size(); ++id) {
    if (corpus.at(id).kind == UnitKind::FuncDef && !build.store.contains(id)) pending.push_back(id);
  }
  if (chunk_size == 0) chunk_size = 1;
  const std::size_t truncated_before = embedder.truncated_inputs();
  for (std::size_t i = 0; i < pending.size(); i += chunk_size) {
    const std::vector<DocId> docs(pending.begin() + static_cast<std::ptrdiff_t>(i),
                                  pending.begin() + static_cast<std::ptrdiff_t>(std::min(pending.size(), i + chunk_size)));
    std::vector<std::string> texts;
    for (DocId d : docs) texts.push_back(corpus.at(d).text);
    try {
      auto vectors = embedder.embed_batch(texts);
      for (std::size_t j = 0; j < docs.size(); ++j) build.store.add(docs[j], std::move(vectors[j]));
    } catch (const Error& e) {
      if (e.code() == ErrorCode::Config) throw;
      build.failures.push_back(EmbedFailure{docs, e.what()});
    }
  }
  build.store.truncated_inputs += embedder.truncated_inputs() - truncated_before;
  return build;
}

std::vector<SemanticHit> search_semantic(std::string_view query, std::size_t k, const VectorStore& store,
                                         Embedder& embedder) {
  if (embedder.fingerprint() != store.fingerprint()) {
    throw Error(ErrorCode::FingerprintMismatch,
                "store built with " + store.fingerprint() + ", queried with " + embedder.fingerprint());
  }
  if (store.empty()) throw Error(ErrorCode::EmptyIndex, "semantic store has no vectors");
  if (k == 0) return {};
  return store.search(embedder.embed(std::string(query)), k);
}

}  // namespace coderag
