#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <vector>

#include "coderag/code_unit.hpp"
#include "coderag/include_graph.hpp"
#include "coderag/source_file.hpp"

namespace coderag {

struct ExtractionEvent {
  std::string kind;  // parse_failure, unresolved_include, skipped_generated, invalid_utf8
  std::string path;
  std::string detail;

  auto operator<=>(const ExtractionEvent&) const = default;
};

struct ExtractionStats {
  std::size_t files_seen = 0;
  std::size_t files_skipped_generated = 0;
  std::array<std::size_t, 4> units_emitted{};  // indexed by UnitKind
  std::size_t macro_units = 0;
  std::size_t duplicate_units_dropped = 0;
  std::size_t parse_failures = 0;
  std::size_t unresolved_includes = 0;
  std::size_t replaced_bytes = 0;
  std::vector<ExtractionEvent> events;

  std::size_t emitted(UnitKind kind) const { return units_emitted[static_cast<std::size_t>(kind)]; }
  std::size_t total_emitted() const;
  void count(const CodeUnit& unit);
  void merge(const ExtractionStats& other);
};

/// Fine-grained extraction of one top-level file.
///
/// Proto files yield their message definitions only. C++ source files
/// yield their own classes, function definitions and declarations, plus
/// those of every recursively included header not yet in
/// `graph.processed()`; macros are rewritten as function-like units and
/// all text is normalized. Every header extracted here is added to the
/// processed set, so a header's units are produced once per graph.
///
/// Throws Error(UnsupportedFileType) when `file` is a header or another
/// non-source file. Parse failures are recorded in `stats` and the units
/// recovered before the failure point are returned.
std::vector<CodeUnit> extract_file(const SourceFile& file, IncludeGraph& graph,
                                   const FileResolver& repo, ExtractionStats& stats);

}  // namespace coderag
