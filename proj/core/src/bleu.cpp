#include "coderag/bleu.hpp"

#include <cmath>
#include <map>

#include "coderag/lexer.hpp"

namespace coderag {

bool is_weighted_keyword(std::string_view token) { return lex::is_cpp_keyword(token); }

namespace {

using Counts = std::map<std::vector<std::string>, std::size_t>;

Counts ngrams(const Tokens& tokens, std::size_t n) {
  Counts out;
  for (std::size_t i = 0; i + n <= tokens.size(); ++i) {
    ++out[Tokens(tokens.begin() + static_cast<std::ptrdiff_t>(i), tokens.begin() + static_cast<std::ptrdiff_t>(i + n))];
  }
  return out;
}

NgramDetail combine(const Tokens& candidate, const Tokens& reference, std::size_t max_n,
                    const std::function<double(const Tokens&)>& weight) {
  NgramDetail d;
  if (candidate.empty() && reference.empty()) {
    d.precisions.assign(max_n, 1.0);
    d.brevity_penalty = 1.0;
    d.score = 1.0;
    return d;
  }
  if (candidate.empty()) return d;
  if (reference.empty()) {
    d.degenerate = true;
    return d;
  }
  double log_sum = 0.0;
  bool zero = false;
  for (std::size_t n = 1; n <= max_n; ++n) {
    const Counts cand = ngrams(candidate, n);
    const Counts ref = ngrams(reference, n);
    double matched = 0.0, total = 0.0;
    for (const auto& [g, c] : cand) {
      const double w = weight(g);
      total += w * static_cast<double>(c);
      const auto it = ref.find(g);
      if (it != ref.end()) matched += w * static_cast<double>(std::min(c, it->second));
    }
    double p;
    if (matched > 0.0) {
      p = matched / total;
    } else if (n == 1) {
      p = 0.0;
      zero = true;
    } else {
      p = 1.0 / (total + 1.0);
    }
    d.precisions.push_back(p);
    if (p > 0.0) log_sum += std::log(p);
  }
  double c = 0.0, r = 0.0;
  for (const auto& t : candidate) c += weight(Tokens{t});
  for (const auto& t : reference) r += weight(Tokens{t});
  d.brevity_penalty = c > r ? 1.0 : std::exp(1.0 - r / c);
  d.score = zero ? 0.0 : d.brevity_penalty * std::exp(log_sum / static_cast<double>(max_n));
  if (d.score > 1.0) d.score = 1.0;
  return d;
}

}  // namespace

NgramDetail ngram_match_detail(const Tokens& candidate, const Tokens& reference, std::size_t max_n) {
  return combine(candidate, reference, max_n, [](const Tokens&) { return 1.0; });
}

double ngram_match(const Tokens& candidate, const Tokens& reference, std::size_t max_n) {
  return ngram_match_detail(candidate, reference, max_n).score;
}

NgramDetail weighted_ngram_match_detail(const Tokens& candidate, const Tokens& reference,
                                        const KeywordPredicate& is_keyword, double mu, std::size_t max_n) {
  return combine(candidate, reference, max_n, [&](const Tokens& g) {
    for (const auto& t : g) {
      if (is_keyword(t)) return mu;
    }
    return 1.0;
  });
}

double weighted_ngram_match(const Tokens& candidate, const Tokens& reference, const KeywordPredicate& is_keyword,
                            double mu, std::size_t max_n) {
  return weighted_ngram_match_detail(candidate, reference, is_keyword, mu, max_n).score;
}

}  // namespace coderag
