#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>

namespace coderag {

/// The four corpus element kinds. Macro-derived units are func-def or
/// func-dec with `from_macro` set.
enum class UnitKind { MsgDef, ClassDef, FuncDec, FuncDef };

inline constexpr std::array<UnitKind, 4> kAllUnitKinds = {UnitKind::MsgDef, UnitKind::ClassDef,
                                                          UnitKind::FuncDec, UnitKind::FuncDef};

std::string_view to_string(UnitKind kind);
std::optional<UnitKind> parse_unit_kind(std::string_view text);

struct Origin {
  std::string path;
  int start_line = 0;
  int end_line = 0;
  std::string project;

  auto operator<=>(const Origin&) const = default;
};

struct CodeUnit {
  UnitKind kind = UnitKind::FuncDef;
  std::string identifier;      // last segment of qualified_name
  std::string qualified_name;  // "ns::Class::f" or "Outer.Inner" for proto
  std::string text;
  Origin origin;
  bool from_macro = false;

  bool operator==(const CodeUnit&) const = default;
};

/// One corpus record line (no trailing newline).
std::string to_json_line(const CodeUnit& unit);

/// Parses one corpus record; throws Error(CorpusFormat) naming `line_no`.
CodeUnit code_unit_from_json_line(std::string_view line, std::size_t line_no);

/// Checks the CodeUnit invariants; returns a description of the first
/// violation, or nullopt when the unit is well-formed.
std::optional<std::string> validate(const CodeUnit& unit);

}  // namespace coderag
