#include "coderag/token_budget.hpp"

#include "coderag/code_tokens.hpp"
#include "coderag/errors.hpp"

namespace coderag {

std::size_t CodeTokenCounter::count(std::string_view text) const { return count_code_tokens(text); }

std::size_t CharHeuristicCounter::count(std::string_view text) const { return (text.size() + 3) / 4; }

std::shared_ptr<const TokenCounter> make_token_counter(std::string_view name) {
  if (name == "code") return std::make_shared<CodeTokenCounter>();
  if (name == "chars4") return std::make_shared<CharHeuristicCounter>();
  throw Error(ErrorCode::Config, "unknown token counter '" + std::string(name) + "'");
}

const TokenCounter& default_token_counter() {
  static const CodeTokenCounter counter;
  return counter;
}

BudgetCheck enforce_token_budget(std::string_view text, std::size_t budget, const TokenCounter& counter) {
  if (budget == 0) throw Error(ErrorCode::Config, "token budget must be at least 1");
  BudgetCheck check;
  check.token_count = counter.count(text);
  check.pass = check.token_count <= budget;
  return check;
}

}  // namespace coderag
