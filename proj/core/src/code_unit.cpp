#include "coderag/code_unit.hpp"

#include <json.hpp>

#include "coderag/errors.hpp"
#include "coderag/source_file.hpp"

namespace coderag {

std::string_view to_string(UnitKind kind) {
  switch (kind) {
    case UnitKind::MsgDef: return "msg-def";
    case UnitKind::ClassDef: return "class-def";
    case UnitKind::FuncDec: return "func-dec";
    case UnitKind::FuncDef: return "func-def";
  }
  return "func-def";
}

std::optional<UnitKind> parse_unit_kind(std::string_view text) {
  for (UnitKind kind : kAllUnitKinds) {
    if (to_string(kind) == text) return kind;
  }
  return std::nullopt;
}

std::string to_json_line(const CodeUnit& unit) {
  nlohmann::ordered_json j;
  j["kind"] = to_string(unit.kind);
  j["identifier"] = unit.identifier;
  j["qualified_name"] = unit.qualified_name;
  j["text"] = unit.text;
  j["path"] = unit.origin.path;
  j["start_line"] = unit.origin.start_line;
  j["end_line"] = unit.origin.end_line;
  j["project"] = unit.origin.project;
  j["from_macro"] = unit.from_macro;
  return j.dump();
}

CodeUnit code_unit_from_json_line(std::string_view line, std::size_t line_no) {
  const auto fail = [line_no](const std::string& what) -> Error {
    return Error(ErrorCode::CorpusFormat, "line " + std::to_string(line_no) + ": " + what);
  };
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(line);
  } catch (const nlohmann::json::parse_error& e) {
    throw fail(std::string("invalid JSON: ") + e.what());
  }
  if (!j.is_object()) throw fail("record is not an object");
  static constexpr std::array<std::string_view, 9> kFields = {
      "kind", "identifier", "qualified_name", "text", "path", "start_line",
      "end_line", "project", "from_macro"};
  for (std::string_view field : kFields) {
    if (!j.contains(field)) throw fail("missing field '" + std::string(field) + "'");
  }
  if (j.size() != kFields.size()) throw fail("unexpected extra fields");

  CodeUnit unit;
  try {
    const auto kind = parse_unit_kind(j.at("kind").get<std::string>());
    if (!kind) throw fail("unknown kind '" + j.at("kind").get<std::string>() + "'");
    unit.kind = *kind;
    unit.identifier = j.at("identifier").get<std::string>();
    unit.qualified_name = j.at("qualified_name").get<std::string>();
    unit.text = j.at("text").get<std::string>();
    unit.origin.path = j.at("path").get<std::string>();
    unit.origin.start_line = j.at("start_line").get<int>();
    unit.origin.end_line = j.at("end_line").get<int>();
    unit.origin.project = j.at("project").get<std::string>();
    unit.from_macro = j.at("from_macro").get<bool>();
  } catch (const nlohmann::json::exception& e) {
    throw fail(std::string("bad field type: ") + e.what());
  }
  if (auto problem = validate(unit)) throw fail(*problem);
  return unit;
}

std::optional<std::string> validate(const CodeUnit& unit) {
  if (unit.identifier.empty()) return "empty identifier";
  const std::string_view sep = unit.kind == UnitKind::MsgDef ? "." : "::";
  const auto cut = unit.qualified_name.rfind(sep);
  const std::string_view last = cut == std::string::npos
                                    ? std::string_view(unit.qualified_name)
                                    : std::string_view(unit.qualified_name).substr(cut + sep.size());
  if (last != unit.identifier) return "identifier is not the last segment of qualified_name";
  if (unit.text.empty()) return "empty text";
  std::size_t begin = 0;
  while (begin <= unit.text.size()) {
    auto end = unit.text.find('\n', begin);
    if (end == std::string::npos) end = unit.text.size();
    const std::string_view line(unit.text.data() + begin, end - begin);
    if (!line.empty() && line.find_first_not_of(" \t\r\f\v") == std::string_view::npos) {
      return "whitespace-only line in text";
    }
    begin = end + 1;
  }
  if (unit.kind == UnitKind::MsgDef && classify_path(unit.origin.path) != FileKind::Proto) {
    return "msg-def unit not from a proto file";
  }
  if (unit.from_macro && unit.kind != UnitKind::FuncDef && unit.kind != UnitKind::FuncDec) {
    return "macro unit with non-function kind";
  }
  if (unit.origin.start_line < 1 || unit.origin.end_line < unit.origin.start_line) {
    return "bad line range";
  }
  return std::nullopt;
}

}  // namespace coderag
