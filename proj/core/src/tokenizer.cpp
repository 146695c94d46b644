#include "coderag/tokenizer.hpp"

namespace coderag {

namespace {

bool is_ascii_alnum(char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9');
}
bool is_lower(char c) { return c >= 'a' && c <= 'z'; }
bool is_upper(char c) { return c >= 'A' && c <= 'Z'; }
char to_lower(char c) { return is_upper(c) ? static_cast<char>(c - 'A' + 'a') : c; }

}  // namespace

std::vector<std::string> tokenize_code(std::string_view text) {
  std::vector<std::string> out;
  std::string current;
  auto flush = [&] {
    if (!current.empty()) out.push_back(std::move(current));
    current.clear();
  };
  char prev = '\0';
  for (char c : text) {
    if (!is_ascii_alnum(c)) {
      flush();
    } else {
      if (is_upper(c) && is_lower(prev)) flush();
      current += to_lower(c);
    }
    prev = c;
  }
  flush();
  return out;
}

}  // namespace coderag
