#include "coderag/codebleu.hpp"

#include <algorithm>
#include <cmath>

#include "coderag/bleu.hpp"
#include "coderag/code_tokens.hpp"
#include "coderag/dataflow.hpp"
#include "coderag/edit_similarity.hpp"
#include "coderag/errors.hpp"
#include "coderag/syntax_tree.hpp"

namespace coderag {

std::optional<std::string> CodeBleuWeights::check() const {
  for (double w : {alpha, beta, gamma, delta}) {
    if (!(w >= 0.0) || !std::isfinite(w)) return "CodeBLEU weights must be non-negative";
  }
  if (std::abs(alpha + beta + gamma + delta - 1.0) > 1e-9) return "CodeBLEU weights must sum to 1";
  return std::nullopt;
}

double combine(const EvalComponents& c, const CodeBleuWeights& w) {
  const double v = w.alpha * c.ngram + w.beta * c.weighted_ngram + w.gamma * c.ast + w.delta * c.dataflow;
  return std::clamp(v, 0.0, 1.0);
}

EvalScores codebleu(std::string_view candidate, std::string_view reference, const CodeBleuWeights& weights,
                    const CodeBleuOptions& options) {
  if (auto problem = weights.check()) throw Error(ErrorCode::Config, *problem);
  const Tokens cand = code_tokens(candidate);
  const Tokens ref = code_tokens(reference);
  EvalScores s;
  const NgramDetail ngram = ngram_match_detail(cand, ref, options.max_n);
  const NgramDetail weighted =
      weighted_ngram_match_detail(cand, ref, is_weighted_keyword, options.keyword_weight, options.max_n);
  const AstDetail ast = ast_similarity_detail(candidate, reference);
  const DataflowDetail flow = dataflow_similarity_detail(candidate, reference);
  s.components = EvalComponents{ngram.score, weighted.score, ast.score, flow.score};
  if (ngram.degenerate) s.flags.emplace_back("empty-reference");
  if (ast.flagged) s.flags.emplace_back("reference-without-syntax");
  if (flow.flagged) s.flags.emplace_back("reference-without-dataflow");
  s.codebleu = combine(s.components, weights);
  return s;
}

EvalScores evaluate(std::string_view candidate, std::string_view reference, const CodeBleuWeights& weights,
                    const CodeBleuOptions& options) {
  EvalScores s = codebleu(candidate, reference, weights, options);
  s.es = edit_similarity(candidate, reference);
  return s;
}

}  // namespace coderag
