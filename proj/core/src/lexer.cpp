#include "coderag/lexer.hpp"

#include <algorithm>
#include <array>
#include <string>
#include <unordered_set>

namespace coderag::lex {

namespace {

bool is_ident_start(unsigned char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_' || c == '$' || c >= 0x80;
}

bool is_ident_char(unsigned char c) { return is_ident_start(c) || (c >= '0' && c <= '9'); }

bool is_digit(unsigned char c) { return c >= '0' && c <= '9'; }

// Longest first within each length class.
constexpr std::array<std::string_view, 46> kPuncts = {
    "<=>", "<<=", ">>=", "->*", "...", "::", "->", "++", "--", "<<", ">>", "<=", ">=", "==", "!=",
    "&&",  "||",  "+=",  "-=",  "*=",  "/=", "%=", "&=", "|=", "^=", ".*", "##", "{",  "}",  "[",
    "]",   "(",   ")",   ";",   ":",   ",",  ".",  "+",  "-",  "*",  "/",  "%",  "<",  ">",  "=",
    "!"};
constexpr std::array<std::string_view, 6> kSingleExtra = {"&", "|", "^", "~", "?", "#"};

class Scanner {
 public:
  Scanner(std::string_view src, const LexOptions& opts) : src_(src), opts_(opts) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    bool line_start = true;
    while (pos_ < src_.size()) {
      const auto c = static_cast<unsigned char>(src_[pos_]);
      if (c == '\n') {
        ++line_;
        ++pos_;
        line_start = true;
        continue;
      }
      if (c == ' ' || c == '\t' || c == '\r' || c == '\f' || c == '\v') {
        ++pos_;
        continue;
      }
      if (c == '\\' && pos_ + 1 < src_.size() &&
          (src_[pos_ + 1] == '\n' || (src_[pos_ + 1] == '\r' && pos_ + 2 < src_.size() &&
                                      src_[pos_ + 2] == '\n'))) {
        // Stray line splice outside a directive.
        pos_ += src_[pos_ + 1] == '\n' ? 2 : 3;
        ++line_;
        continue;
      }
      const std::size_t start = pos_;
      const int start_line = line_;
      TokenKind kind = TokenKind::Punct;
      if (c == '#' && line_start && opts_.directives_as_units) {
        scan_directive();
        kind = TokenKind::Directive;
      } else if (c == '/' && peek(1) == '/') {
        scan_line_comment();
        kind = TokenKind::Comment;
      } else if (c == '/' && peek(1) == '*') {
        scan_block_comment();
        kind = TokenKind::Comment;
      } else if (is_digit(c) || (c == '.' && is_digit(static_cast<unsigned char>(peek(1))))) {
        scan_number();
        kind = TokenKind::Number;
      } else if (is_ident_start(c)) {
        kind = scan_identifier_or_prefixed_literal();
      } else if (c == '"') {
        scan_quoted('"');
        kind = TokenKind::String;
      } else if (c == '\'') {
        scan_quoted('\'');
        kind = TokenKind::Char;
      } else {
        scan_punct();
      }
      if (kind == TokenKind::Comment && !opts_.keep_comments) {
        continue;
      }
      out.push_back(Token{kind, src_.substr(start, pos_ - start), start, start_line, line_,
                          line_start});
      if (kind != TokenKind::Comment) line_start = false;
      if (kind == TokenKind::Directive) line_start = false;
    }
    return out;
  }

 private:
  char peek(std::size_t ahead) const {
    return pos_ + ahead < src_.size() ? src_[pos_ + ahead] : '\0';
  }

  void advance_over(char c) {
    if (c == '\n') ++line_;
    ++pos_;
  }

  void scan_line_comment() {
    while (pos_ < src_.size()) {
      const char c = src_[pos_];
      if (c == '\n') {
        // A backslash immediately before the newline splices the next line.
        std::size_t back = pos_;
        while (back > 0 && src_[back - 1] == '\r') --back;
        if (back > 0 && src_[back - 1] == '\\') {
          advance_over(c);
          continue;
        }
        return;
      }
      ++pos_;
    }
  }

  void scan_block_comment() {
    pos_ += 2;
    while (pos_ < src_.size()) {
      if (src_[pos_] == '*' && peek(1) == '/') {
        pos_ += 2;
        return;
      }
      advance_over(src_[pos_]);
    }
  }

  void scan_directive() {
    while (pos_ < src_.size()) {
      const char c = src_[pos_];
      if (c == '\n') {
        std::size_t back = pos_;
        while (back > 0 && src_[back - 1] == '\r') --back;
        if (back > 0 && src_[back - 1] == '\\') {
          advance_over(c);
          continue;
        }
        break;
      }
      if (c == '/' && peek(1) == '*') {
        scan_block_comment();
        continue;
      }
      if (c == '/' && peek(1) == '/') {
        scan_line_comment();
        break;
      }
      if (c == '"' || c == '\'') {
        scan_quoted(c);
        continue;
      }
      ++pos_;
    }
    // Trailing whitespace (e.g. '\r') is not part of the directive.
    while (pos_ > 0 && (src_[pos_ - 1] == '\r' || src_[pos_ - 1] == ' ' || src_[pos_ - 1] == '\t') &&
           src_[pos_ - 1] != '\n') {
      --pos_;
    }
  }

  void scan_number() {
    const bool hex = src_[pos_] == '0' && (peek(1) == 'x' || peek(1) == 'X');
    ++pos_;
    while (pos_ < src_.size()) {
      const auto c = static_cast<unsigned char>(src_[pos_]);
      if (is_ident_char(c) || c == '.') {
        ++pos_;
        continue;
      }
      if (c == '\'' && pos_ + 1 < src_.size() && is_ident_char(static_cast<unsigned char>(peek(1)))) {
        pos_ += 1;  // digit separator
        continue;
      }
      if ((c == '+' || c == '-') && pos_ > 0) {
        const char prev = src_[pos_ - 1];
        const bool exponent =
            hex ? (prev == 'p' || prev == 'P') : (prev == 'e' || prev == 'E');
        if (exponent) {
          ++pos_;
          continue;
        }
      }
      break;
    }
  }

  TokenKind scan_identifier_or_prefixed_literal() {
    const std::size_t start = pos_;
    while (pos_ < src_.size() && is_ident_char(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    const std::string_view word = src_.substr(start, pos_ - start);
    if (pos_ < src_.size()) {
      const char next = src_[pos_];
      if (next == '"' && (word == "R" || word == "u8R" || word == "uR" || word == "UR" ||
                          word == "LR")) {
        scan_raw_string();
        return TokenKind::String;
      }
      if ((next == '"' || next == '\'') &&
          (word == "u8" || word == "u" || word == "U" || word == "L")) {
        scan_quoted(next);
        return next == '"' ? TokenKind::String : TokenKind::Char;
      }
    }
    return TokenKind::Identifier;
  }

  void scan_raw_string() {
    // At the opening quote of R"delim( ... )delim".
    ++pos_;
    const std::size_t delim_start = pos_;
    while (pos_ < src_.size() && src_[pos_] != '(' && src_[pos_] != '\n' && pos_ - delim_start < 16) {
      ++pos_;
    }
    if (pos_ >= src_.size() || src_[pos_] != '(') return;
    const std::string closing =
        ")" + std::string(src_.substr(delim_start, pos_ - delim_start)) + "\"";
    ++pos_;
    const std::size_t end = src_.find(closing, pos_);
    const std::size_t stop = end == std::string_view::npos ? src_.size() : end + closing.size();
    while (pos_ < stop) advance_over(src_[pos_]);
  }

  void scan_quoted(char quote) {
    ++pos_;
    while (pos_ < src_.size()) {
      const char c = src_[pos_];
      if (c == '\\') {
        if (pos_ + 1 < src_.size()) advance_over(src_[pos_ + 1]), ++pos_;
        else ++pos_;
        continue;
      }
      if (c == '\n') return;  // unterminated
      ++pos_;
      if (c == quote) return;
    }
  }

  void scan_punct() {
    const std::string_view rest = src_.substr(pos_);
    for (std::string_view p : kPuncts) {
      if (rest.substr(0, p.size()) == p) {
        pos_ += p.size();
        return;
      }
    }
    for (std::string_view p : kSingleExtra) {
      if (rest.substr(0, 1) == p) {
        pos_ += 1;
        return;
      }
    }
    // Anything else (stray backslash, '@', '`') becomes a one-byte token.
    ++pos_;
  }

  std::string_view src_;
  const LexOptions& opts_;
  std::size_t pos_ = 0;
  int line_ = 1;
};

}  // namespace

std::vector<Token> lex(std::string_view source, const LexOptions& options) {
  return Scanner(source, options).run();
}

bool is_cpp_keyword(std::string_view word) {
  static const std::unordered_set<std::string_view> kKeywords = {
      "alignas",   "alignof",      "and",          "and_eq",     "asm",          "auto",
      "bitand",    "bitor",        "bool",         "break",      "case",         "catch",
      "char",      "char8_t",      "char16_t",     "char32_t",   "class",        "compl",
      "concept",   "const",        "consteval",    "constexpr",  "constinit",    "const_cast",
      "continue",  "co_await",     "co_return",    "co_yield",   "decltype",     "default",
      "delete",    "do",           "double",       "dynamic_cast", "else",       "enum",
      "explicit",  "export",       "extern",       "false",      "float",        "for",
      "friend",    "goto",         "if",           "inline",     "int",          "long",
      "mutable",   "namespace",    "new",          "noexcept",   "not",          "not_eq",
      "nullptr",   "operator",     "or",           "or_eq",      "private",      "protected",
      "public",    "register",     "reinterpret_cast", "requires", "return",     "short",
      "signed",    "sizeof",       "static",       "static_assert", "static_cast", "struct",
      "switch",    "template",     "this",         "thread_local", "throw",      "true",
      "try",       "typedef",      "typeid",       "typename",   "union",        "unsigned",
      "using",     "virtual",      "void",         "volatile",   "wchar_t",      "while",
      "xor",       "xor_eq",       "override",     "final"};
  return kKeywords.contains(word);
}

bool is_type_keyword(std::string_view word) {
  static const std::unordered_set<std::string_view> kTypes = {
      "auto",     "bool",     "char",   "char8_t", "char16_t", "char32_t", "double",
      "float",    "int",      "long",   "short",   "signed",   "unsigned", "void",
      "wchar_t",  "const",    "volatile", "static", "inline",  "constexpr", "consteval",
      "constinit", "extern",  "mutable", "register", "thread_local", "virtual", "explicit",
      "typename", "struct",   "class",  "enum",    "union"};
  return kTypes.contains(word);
}

}  // namespace coderag::lex
