#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace coderag {

/// Case-preserving C++ lexemes with comments dropped; the token stream
/// the similarity metrics compare.
std::vector<std::string> code_tokens(std::string_view text);

/// Prompt-size token count: one per C++ lexeme, except that comments,
/// literals and identifiers holding prose count one per ASCII word, per
/// non-ASCII code point and per other visible character.
std::size_t count_code_tokens(std::string_view text);

}  // namespace coderag
