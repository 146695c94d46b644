#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace coderag {

struct CodeBleuWeights {
  double alpha = 0.25;  // n-gram match
  double beta = 0.25;   // weighted n-gram match
  double gamma = 0.25;  // syntax match
  double delta = 0.25;  // dataflow match

  /// Description of the problem, or nullopt when all weights are >= 0
  /// and sum to 1 within 1e-9.
  std::optional<std::string> check() const;
};

struct CodeBleuOptions {
  double keyword_weight = 4.0;
  std::size_t max_n = 4;
};

struct EvalComponents {
  double ngram = 0.0;
  double weighted_ngram = 0.0;
  double ast = 0.0;
  double dataflow = 0.0;
};

struct EvalScores {
  double codebleu = 0.0;
  double es = 0.0;
  EvalComponents components;
  std::vector<std::string> flags;  // degenerate-denominator conventions applied
};

double combine(const EvalComponents& c, const CodeBleuWeights& w);

/// Scores candidate against reference. Throws Error(Config) for invalid
/// weights.
EvalScores codebleu(std::string_view candidate, std::string_view reference, const CodeBleuWeights& weights = {},
                    const CodeBleuOptions& options = {});

/// codebleu plus token-level edit similarity.
EvalScores evaluate(std::string_view candidate, std::string_view reference, const CodeBleuWeights& weights = {},
                    const CodeBleuOptions& options = {});

}  // namespace coderag
