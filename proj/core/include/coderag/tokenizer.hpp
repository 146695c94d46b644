#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace coderag {

/// Retrieval-term tokenizer: splits on non-alphanumeric bytes, then on
/// underscores and lower-to-upper case transitions, and lowercases.
/// "getUserName(id)" -> {get, user, name, id}.
std::vector<std::string> tokenize_code(std::string_view text);

}  // namespace coderag
