#pragma once

#include <cstddef>
#include <string_view>
#include <vector>

namespace coderag::lex {

enum class TokenKind {
  Identifier,  // includes keywords
  Number,
  String,      // "..." and raw strings, with any encoding prefix
  Char,
  Punct,
  Comment,     // // and /* */
  Directive,   // a whole preprocessor logical line, continuations included
};

/// A lexeme. `text` views into the lexed source, which must outlive the token.
struct Token {
  TokenKind kind;
  std::string_view text;
  std::size_t offset;  // byte offset of the first character
  int line;            // 1-based line of the first character
  int end_line;        // 1-based line of the last character
  bool starts_line;    // first non-whitespace token on its line

  std::size_t end_offset() const { return offset + text.size(); }
  bool is(std::string_view punct) const { return kind == TokenKind::Punct && text == punct; }
  bool is_identifier(std::string_view name) const {
    return kind == TokenKind::Identifier && text == name;
  }
};

struct LexOptions {
  bool keep_comments = true;
  // When false, a `#` line is lexed as ordinary tokens instead of one
  // Directive token.
  bool directives_as_units = true;
};

/// Error-tolerant C++ lexer. Never throws; unterminated literals and
/// comments end at end of line / end of input.
std::vector<Token> lex(std::string_view source, const LexOptions& options = {});

bool is_cpp_keyword(std::string_view word);

/// Keywords that name fundamental types or act as type specifiers.
bool is_type_keyword(std::string_view word);

}  // namespace coderag::lex
