#include "coderag/index_store.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "coderag/errors.hpp"

namespace coderag {

namespace fs = std::filesystem;

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot read " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const fs::path& path, std::string_view content) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::Io, "cannot write " + path.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw Error(ErrorCode::Io, "cannot write " + path.string());
  }
  fs::rename(tmp, path);
}

namespace {

nlohmann::ordered_json read_manifest(const fs::path& root) {
  const fs::path p = root / "manifest.json";
  if (!fs::exists(p)) return nlohmann::ordered_json::object();
  try {
    return nlohmann::ordered_json::parse(read_file(p));
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::CorpusFormat, "index manifest: " + std::string(e.what()));
  }
}

void check_fresh(const std::string& segment, const std::string& recorded, const Corpus& corpus) {
  if (recorded != corpus.hash()) {
    throw Error(ErrorCode::StaleIndex, segment + " segment was built from corpus " + recorded +
                                           ", current corpus is " + corpus.hash());
  }
}

fs::path identifier_segment(const fs::path& root, UnitKind kind) {
  return root / "identifier" / (std::string(to_string(kind)) + ".json");
}

}  // namespace

void IndexDir::write_corpus(const Corpus& corpus) const {
  fs::create_directories(root_);
  const auto manifest = read_manifest(root_);
  if (manifest.contains("corpus_hash") && manifest["corpus_hash"] != corpus.hash()) {
    fs::remove_all(root_ / "identifier");
    fs::remove(root_ / "lexical.json");
    fs::remove(root_ / "semantic.bin");
    fs::remove(root_ / "semantic.json");
  }
  write_file(root_ / "corpus.jsonl", corpus.serialize());
  nlohmann::ordered_json fresh;
  fresh["format"] = "coderag-index-v1";
  fresh["corpus_hash"] = corpus.hash();
  fresh["units"] = corpus.size();
  nlohmann::ordered_json segments = nlohmann::ordered_json::object();
  if (manifest.contains("corpus_hash") && manifest["corpus_hash"] == corpus.hash() && manifest.contains("segments")) {
    segments = manifest["segments"];
  }
  fresh["segments"] = segments;
  write_file(root_ / "manifest.json", fresh.dump(2) + "\n");
}

Corpus IndexDir::load_corpus() const {
  if (!fs::exists(root_ / "corpus.jsonl")) {
    throw Error(ErrorCode::EmptyIndex, "no corpus in index directory " + root_.string());
  }
  Corpus corpus = Corpus::load(root_ / "corpus.jsonl");
  const std::string recorded = manifest_corpus_hash();
  if (recorded != corpus.hash()) {
    throw Error(ErrorCode::StaleIndex, "index manifest does not match " + (root_ / "corpus.jsonl").string());
  }
  return corpus;
}

std::string IndexDir::manifest_corpus_hash() const {
  const auto manifest = read_manifest(root_);
  return manifest.value("corpus_hash", std::string());
}

void IndexDir::update_manifest(const std::string& segment, const std::string& corpus_hash) const {
  auto manifest = read_manifest(root_);
  if (manifest.value("corpus_hash", std::string()) != corpus_hash) {
    throw Error(ErrorCode::StaleIndex, segment + " index was built from a different corpus than " + root_.string());
  }
  manifest["segments"][segment] = corpus_hash;
  write_file(root_ / "manifest.json", manifest.dump(2) + "\n");
}

void IndexDir::save(const IdentifierIndex& index, const Corpus& corpus) const {
  for (UnitKind kind : kAllUnitKinds) {
    nlohmann::ordered_json seg = nlohmann::ordered_json::parse(index.serialize_segment(kind));
    seg["corpus_hash"] = corpus.hash();
    write_file(identifier_segment(root_, kind), seg.dump() + "\n");
  }
  update_manifest("identifier", corpus.hash());
}

void IndexDir::save(const LexicalIndex& index) const {
  write_file(root_ / "lexical.json", index.serialize());
  update_manifest("lexical", index.corpus_hash());
}

void IndexDir::save(const VectorStore& store) const {
  write_file(root_ / "semantic.bin", store.serialize_binary());
  write_file(root_ / "semantic.json", store.manifest_json());
  update_manifest("semantic", store.corpus_hash());
}

bool IndexDir::has_identifier() const { return fs::exists(identifier_segment(root_, UnitKind::FuncDef)); }
bool IndexDir::has_lexical() const { return fs::exists(root_ / "lexical.json"); }
bool IndexDir::has_semantic() const {
  return fs::exists(root_ / "semantic.bin") && fs::exists(root_ / "semantic.json");
}

IdentifierIndex IndexDir::load_identifier(const Corpus& corpus) const {
  if (!has_identifier()) throw Error(ErrorCode::EmptyIndex, "identifier index is not built in " + root_.string());
  IdentifierIndex index;
  for (UnitKind kind : kAllUnitKinds) {
    const std::string text = read_file(identifier_segment(root_, kind));
    std::string recorded;
    try {
      recorded = nlohmann::json::parse(text).at("corpus_hash").get<std::string>();
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::CorpusFormat, std::string("identifier segment: ") + e.what());
    }
    check_fresh("identifier", recorded, corpus);
    index.load_segment(kind, text);
  }
  return index;
}

LexicalIndex IndexDir::load_lexical(const Corpus& corpus) const {
  if (!has_lexical()) throw Error(ErrorCode::EmptyIndex, "lexical index is not built in " + root_.string());
  LexicalIndex index = LexicalIndex::deserialize(read_file(root_ / "lexical.json"));
  check_fresh("lexical", index.corpus_hash(), corpus);
  return index;
}

VectorStore IndexDir::load_semantic(const Corpus& corpus) const {
  if (!has_semantic()) throw Error(ErrorCode::EmptyIndex, "semantic index is not built in " + root_.string());
  VectorStore store = VectorStore::deserialize(read_file(root_ / "semantic.bin"), read_file(root_ / "semantic.json"));
  check_fresh("semantic", store.corpus_hash(), corpus);
  return store;
}

std::string IndexDir::manifest() const { return read_manifest(root_).dump(2); }

}  // namespace coderag
