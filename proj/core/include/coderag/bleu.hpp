#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

namespace coderag {

using Tokens = std::vector<std::string>;

struct NgramDetail {
  std::vector<double> precisions;  // p_1 .. p_max_n after smoothing
  double brevity_penalty = 0.0;
  double score = 0.0;
  bool degenerate = false;  // empty reference with a non-empty candidate
};

/// Modified n-gram precision for n = 1..max_n, combined by geometric mean
/// and scaled by the brevity penalty exp(1 - r/c) when c <= r. A zero
/// match count for n >= 2 is smoothed to 1/(d+1), d being the number of
/// candidate n-grams; no unigram match gives 0.
NgramDetail ngram_match_detail(const Tokens& candidate, const Tokens& reference, std::size_t max_n = 4);
double ngram_match(const Tokens& candidate, const Tokens& reference, std::size_t max_n = 4);

using KeywordPredicate = std::function<bool(std::string_view)>;

/// C++ reserved words.
bool is_weighted_keyword(std::string_view token);

/// As ngram_match with each n-gram counted `mu` times when it contains a
/// keyword. Lengths in the brevity penalty are weighted unigram totals,
/// so mu = 1 reproduces ngram_match.
NgramDetail weighted_ngram_match_detail(const Tokens& candidate, const Tokens& reference,
                                        const KeywordPredicate& is_keyword = is_weighted_keyword,
                                        double mu = 4.0, std::size_t max_n = 4);
double weighted_ngram_match(const Tokens& candidate, const Tokens& reference,
                            const KeywordPredicate& is_keyword = is_weighted_keyword, double mu = 4.0,
                            std::size_t max_n = 4);

}  // namespace coderag
