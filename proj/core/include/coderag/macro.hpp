#pragma once

#include <string>
#include <vector>

#include "coderag/code_unit.hpp"
#include "coderag/cpp_extractor.hpp"

namespace coderag {

struct TransformedMacro {
  CodeUnit unit;
  std::vector<std::string> params;
};

/// Rewrites a `#define` into a function-like unit: the macro name becomes
/// the function name and its parameters the parameter list. A non-empty
/// replacement list becomes the body of a func-def; an empty one yields a
/// func-dec. Object-like macros get an empty parameter list.
///
/// `origin_path`/`project` fill the unit's provenance.
TransformedMacro transform_macro(const RawMacro& macro, const std::string& origin_path,
                                 const std::string& project);

}  // namespace coderag
