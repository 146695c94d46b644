#include "coderag/extract.hpp"

#include "coderag/cpp_extractor.hpp"
#include "coderag/errors.hpp"
#include "coderag/macro.hpp"
#include "coderag/normalize.hpp"
#include "coderag/proto_extractor.hpp"

namespace coderag {

std::size_t ExtractionStats::total_emitted() const {
  std::size_t total = 0;
  for (auto n : units_emitted) total += n;
  return total;
}

void ExtractionStats::count(const CodeUnit& unit) {
  ++units_emitted[static_cast<std::size_t>(unit.kind)];
  if (unit.from_macro) ++macro_units;
}

void ExtractionStats::merge(const ExtractionStats& other) {
  files_seen += other.files_seen;
  files_skipped_generated += other.files_skipped_generated;
  for (std::size_t i = 0; i < units_emitted.size(); ++i) units_emitted[i] += other.units_emitted[i];
  macro_units += other.macro_units;
  duplicate_units_dropped += other.duplicate_units_dropped;
  parse_failures += other.parse_failures;
  unresolved_includes += other.unresolved_includes;
  replaced_bytes += other.replaced_bytes;
  events.insert(events.end(), other.events.begin(), other.events.end());
}

namespace {

void note_file(const SourceFile& file, ExtractionStats& stats) {
  ++stats.files_seen;
  if (file.replaced_bytes > 0) {
    stats.replaced_bytes += file.replaced_bytes;
    stats.events.push_back(
        {"invalid_utf8", file.path, std::to_string(file.replaced_bytes) + " bytes replaced"});
  }
}

CodeUnit to_unit(const CppElement& e, UnitKind kind, const std::string& path,
                 const std::string& project) {
  CodeUnit unit;
  unit.kind = kind;
  unit.identifier = e.identifier;
  unit.qualified_name = e.qualified_name;
  unit.text = e.text;
  unit.origin = Origin{path, e.start_line, e.end_line, project};
  return unit;
}

void collect_cpp(const SourceFile& file, const std::string& project, std::vector<CodeUnit>& units,
                 std::vector<std::pair<RawMacro, std::string>>& macros, ExtractionStats& stats) {
  CppElements elements = extract_cpp_elements(file);
  if (elements.parse_error) {
    ++stats.parse_failures;
    stats.events.push_back({"parse_failure", file.path, *elements.parse_error});
  }
  for (const auto& e : elements.class_defs) units.push_back(to_unit(e, UnitKind::ClassDef, file.path, project));
  for (const auto& e : elements.func_defs) units.push_back(to_unit(e, UnitKind::FuncDef, file.path, project));
  for (const auto& e : elements.func_decs) units.push_back(to_unit(e, UnitKind::FuncDec, file.path, project));
  for (auto& m : elements.macros) macros.emplace_back(std::move(m), file.path);
}

}  // namespace

std::vector<CodeUnit> extract_file(const SourceFile& file, IncludeGraph& graph,
                                   const FileResolver& repo, ExtractionStats& stats) {
  if (file.kind == FileKind::Proto) {
    note_file(file, stats);
    ProtoMessages found = extract_proto_messages(file, repo.project());
    if (found.parse_error) {
      ++stats.parse_failures;
      stats.events.push_back({"parse_failure", file.path, *found.parse_error});
    }
    auto units = normalize_code(std::move(found.messages));
    for (const auto& u : units) stats.count(u);
    return units;
  }
  if (file.kind != FileKind::Cpp) {
    throw Error(ErrorCode::UnsupportedFileType, "Unsupported file type! " + file.path);
  }

  note_file(file, stats);
  std::vector<CodeUnit> units;
  std::vector<std::pair<RawMacro, std::string>> macros;
  collect_cpp(file, repo.project(), units, macros, stats);

  for (const auto& header : get_recursive_dependencies(file, repo, &stats, &graph)) {
    if (!graph.claim(header)) continue;
    if (is_generated_from_proto(header)) {
      ++stats.files_skipped_generated;
      stats.events.push_back({"skipped_generated", header, "generated from proto"});
      continue;
    }
    const auto loaded = repo.load(header);
    if (!loaded) continue;
    note_file(*loaded, stats);
    collect_cpp(*loaded, repo.project(), units, macros, stats);
  }

  for (const auto& [macro, path] : macros) {
    units.push_back(transform_macro(macro, path, repo.project()).unit);
  }

  units = normalize_code(std::move(units));
  for (const auto& u : units) stats.count(u);
  return units;
}

}  // namespace coderag
