#include "coderag/edit_similarity.hpp"

#include <algorithm>

#include "coderag/code_tokens.hpp"

namespace coderag {

std::size_t levenshtein(const std::vector<std::string>& a, const std::vector<std::string>& b) {
  std::vector<std::size_t> row(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) row[j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    std::size_t diag = row[0];
    row[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const std::size_t up = row[j];
      row[j] = std::min({up + 1, row[j - 1] + 1, diag + (a[i - 1] == b[j - 1] ? 0 : 1)});
      diag = up;
    }
  }
  return row[b.size()];
}

double edit_similarity_tokens(const std::vector<std::string>& candidate, const std::vector<std::string>& reference) {
  const std::size_t longest = std::max(candidate.size(), reference.size());
  if (longest == 0) return 1.0;
  return 1.0 - static_cast<double>(levenshtein(candidate, reference)) / static_cast<double>(longest);
}

double edit_similarity(std::string_view candidate, std::string_view reference) {
  return edit_similarity_tokens(code_tokens(candidate), code_tokens(reference));
}

}  // namespace coderag
