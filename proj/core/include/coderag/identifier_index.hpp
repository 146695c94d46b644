#pragma once

#include <array>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "coderag/corpus.hpp"

namespace coderag {

/// Per-kind stores keyed by both simple and qualified name. Values are
/// doc ids into the corpus the index was built from, in corpus order.
class IdentifierIndex {
 public:
  using KeyMap = std::map<std::string, std::vector<DocId>, std::less<>>;

  IdentifierIndex() = default;

  static IdentifierIndex build(const Corpus& corpus);

  /// All units of `kind` whose identifier or qualified_name equals `key`.
  /// A miss is an empty list.
  std::vector<DocId> lookup_ids(std::string_view key, UnitKind kind) const;
  std::vector<CodeUnit> lookup(std::string_view key, UnitKind kind, const Corpus& corpus) const;

  const KeyMap& keys(UnitKind kind) const { return maps_[static_cast<std::size_t>(kind)]; }
  std::size_t key_count() const;
  bool empty() const { return key_count() == 0; }

  /// One segment per kind: {"kind": ..., "keys": {key: [doc ids]}}.
  std::string serialize_segment(UnitKind kind) const;
  void load_segment(UnitKind kind, std::string_view content);

 private:
  std::array<KeyMap, 4> maps_;
};

}  // namespace coderag
