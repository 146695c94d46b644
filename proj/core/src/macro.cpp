#include "coderag/macro.hpp"

#include "coderag/normalize.hpp"

namespace coderag {

TransformedMacro transform_macro(const RawMacro& macro, const std::string& origin_path,
                                 const std::string& project) {
  TransformedMacro out;
  out.params = macro.params;

  std::string signature = macro.name + "(";
  for (std::size_t i = 0; i < macro.params.size(); ++i) {
    if (i > 0) signature += ", ";
    signature += macro.params[i];
  }
  signature += ")";

  const std::string body = normalize_text(macro.body);
  CodeUnit& unit = out.unit;
  unit.identifier = macro.name;
  unit.qualified_name = macro.name;
  unit.from_macro = true;
  if (body.empty()) {
    unit.kind = UnitKind::FuncDec;
    unit.text = signature + ";";
  } else {
    unit.kind = UnitKind::FuncDef;
    unit.text = signature + " {\n" + body + "\n}";
  }
  unit.origin.path = origin_path;
  unit.origin.project = project;
  unit.origin.start_line = macro.start_line > 0 ? macro.start_line : 1;
  unit.origin.end_line = macro.end_line >= unit.origin.start_line ? macro.end_line
                                                                  : unit.origin.start_line;
  return out;
}

}  // namespace coderag
