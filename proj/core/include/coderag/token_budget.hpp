#pragma once

#include <cstddef>
#include <memory>
#include <string>
#include <string_view>

namespace coderag {

class TokenCounter {
 public:
  virtual ~TokenCounter() = default;
  virtual std::size_t count(std::string_view text) const = 0;
  virtual std::string name() const = 0;
};

/// Default counter: count_code_tokens.
class CodeTokenCounter : public TokenCounter {
 public:
  std::size_t count(std::string_view text) const override;
  std::string name() const override { return "code"; }
};

/// ceil(bytes / 4), a rough stand-in for byte-pair tokenizers.
class CharHeuristicCounter : public TokenCounter {
 public:
  std::size_t count(std::string_view text) const override;
  std::string name() const override { return "chars4"; }
};

/// Throws Error(Config) for an unknown name ("code" or "chars4").
std::shared_ptr<const TokenCounter> make_token_counter(std::string_view name);
const TokenCounter& default_token_counter();

struct BudgetCheck {
  std::size_t token_count = 0;
  bool pass = false;
};

/// Throws Error(Config) when budget is 0.
BudgetCheck enforce_token_budget(std::string_view text, std::size_t budget,
                                 const TokenCounter& counter = default_token_counter());

}  // namespace coderag
