#include "coderag/identifier_index.hpp"

#include <json.hpp>

#include "coderag/errors.hpp"

namespace coderag {

IdentifierIndex IdentifierIndex::build(const Corpus& corpus) {
  IdentifierIndex index;
  for (DocId id = 0; id < corpus.size(); ++id) {
    const CodeUnit& unit = corpus.at(id);
    auto& map = index.maps_[static_cast<std::size_t>(unit.kind)];
    map[unit.identifier].push_back(id);
    if (unit.qualified_name != unit.identifier) map[unit.qualified_name].push_back(id);
  }
  return index;
}

std::vector<DocId> IdentifierIndex::lookup_ids(std::string_view key, UnitKind kind) const {
  const auto& map = maps_[static_cast<std::size_t>(kind)];
  const auto it = map.find(key);
  return it == map.end() ? std::vector<DocId>{} : it->second;
}

std::vector<CodeUnit> IdentifierIndex::lookup(std::string_view key, UnitKind kind,
                                              const Corpus& corpus) const {
  std::vector<CodeUnit> out;
  for (DocId id : lookup_ids(key, kind)) out.push_back(corpus.at(id));
  return out;
}

std::size_t IdentifierIndex::key_count() const {
  std::size_t n = 0;
  for (const auto& m : maps_) n += m.size();
  return n;
}

std::string IdentifierIndex::serialize_segment(UnitKind kind) const {
  nlohmann::ordered_json doc;
  doc["kind"] = std::string(to_string(kind));
  nlohmann::ordered_json keys = nlohmann::ordered_json::object();
  for (const auto& [key, ids] : maps_[static_cast<std::size_t>(kind)]) keys[key] = ids;
  doc["keys"] = std::move(keys);
  return doc.dump() + "\n";
}

void IdentifierIndex::load_segment(UnitKind kind, std::string_view content) {
  auto& map = maps_[static_cast<std::size_t>(kind)];
  map.clear();
  try {
    const auto doc = nlohmann::json::parse(content);
    if (doc.at("kind").get<std::string>() != to_string(kind)) {
      throw Error(ErrorCode::CorpusFormat, "identifier segment kind mismatch");
    }
    for (const auto& [key, ids] : doc.at("keys").items()) {
      auto list = ids.get<std::vector<DocId>>();
      if (list.empty()) throw Error(ErrorCode::CorpusFormat, "empty key list for " + key);
      map.emplace(key, std::move(list));
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::CorpusFormat, std::string("identifier segment: ") + e.what());
  }
}

}  // namespace coderag
