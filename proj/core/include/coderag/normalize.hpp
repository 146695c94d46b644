#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "coderag/code_unit.hpp"

namespace coderag {

/// Removes comments, trims trailing whitespace, drops lines that held only
/// comments, collapses runs of blank lines to a single empty line, and
/// strips leading/trailing blank lines. Idempotent.
std::string normalize_text(std::string_view text);

/// Normalizes the text of every unit. Units whose text becomes empty are
/// dropped.
std::vector<CodeUnit> normalize_code(std::vector<CodeUnit> units);

}  // namespace coderag
