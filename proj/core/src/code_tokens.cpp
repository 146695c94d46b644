#include "coderag/code_tokens.hpp"

#include "coderag/lexer.hpp"
#include "coderag/utf8.hpp"

namespace coderag {

std::vector<std::string> code_tokens(std::string_view text) {
  lex::LexOptions opts;
  opts.keep_comments = false;
  opts.directives_as_units = false;
  std::vector<std::string> out;
  for (const auto& tok : lex::lex(text, opts)) out.emplace_back(tok.text);
  return out;
}

namespace {

bool is_word_byte(unsigned char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_' || c == '$';
}

std::size_t count_pieces(std::string_view s) {
  std::size_t n = 0;
  std::size_t i = 0;
  while (i < s.size()) {
    const auto c = static_cast<unsigned char>(s[i]);
    if (is_word_byte(c)) {
      while (i < s.size() && is_word_byte(static_cast<unsigned char>(s[i]))) ++i;
      ++n;
    } else if (c >= 0x80) {
      i += utf8_sequence_length(c);
      ++n;
    } else {
      if (c > ' ' && c != 0x7F) ++n;
      ++i;
    }
  }
  return n;
}

}  // namespace

std::size_t count_code_tokens(std::string_view text) {
  lex::LexOptions opts;
  opts.keep_comments = true;
  opts.directives_as_units = false;
  std::size_t n = 0;
  for (const auto& tok : lex::lex(text, opts)) {
    switch (tok.kind) {
      case lex::TokenKind::Number:
      case lex::TokenKind::Punct: ++n; break;
      default: n += count_pieces(tok.text); break;
    }
  }
  return n;
}

}  // namespace coderag
