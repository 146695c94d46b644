#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace coderag {

/// Token-level Levenshtein distance (unit-cost insert, delete, substitute).
std::size_t levenshtein(const std::vector<std::string>& a, const std::vector<std::string>& b);

/// 1 - levenshtein / max(|a|, |b|); 1.0 when both are empty.
double edit_similarity_tokens(const std::vector<std::string>& candidate, const std::vector<std::string>& reference);

/// edit_similarity_tokens over code_tokens of both texts.
double edit_similarity(std::string_view candidate, std::string_view reference);

}  // namespace coderag
