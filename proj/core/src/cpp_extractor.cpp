#include "coderag/cpp_extractor.hpp"

#include <algorithm>
#include <unordered_set>

#include "coderag/errors.hpp"
#include "coderag/lexer.hpp"

namespace coderag {

namespace {

using lex::Token;
using lex::TokenKind;

constexpr std::size_t kNone = static_cast<std::size_t>(-1);

std::string join(const std::vector<std::string>& parts, std::string_view sep) {
  std::string out;
  for (const auto& p : parts) {
    if (p.empty()) continue;
    if (!out.empty()) out += sep;
    out += p;
  }
  return out;
}

bool is_all_caps_macro_name(std::string_view s) {
  if (s.size() < 2) return false;
  bool has_letter = false;
  for (char c : s) {
    if (c >= 'A' && c <= 'Z') {
      has_letter = true;
    } else if (!(c == '_' || (c >= '0' && c <= '9'))) {
      return false;
    }
  }
  return has_letter;
}

// Identifiers whose parenthesized argument is never a parameter list.
bool is_non_declarator_word(std::string_view s) {
  static const std::unordered_set<std::string_view> kWords = {
      "__attribute__", "__declspec", "alignas", "alignof", "decltype", "sizeof",
      "noexcept",      "throw",      "static_assert", "typeid", "requires", "__pragma",
      "_Pragma",       "asm",        "__asm__",  "if",      "for",      "while",
      "switch",        "return",     "catch"};
  return kWords.contains(s) || (lex::is_cpp_keyword(s) && s != "operator");
}

class StructureParser {
 public:
  StructureParser(const SourceFile& file, std::vector<Token> tokens)
      : src_(file.text), toks_(std::move(tokens)) {}

  CppElements run() {
    std::vector<std::string> scope;
    parse_scope(scope, /*class_name=*/nullptr, /*nested=*/false);
    for (const auto& t : toks_) {
      if (t.kind != TokenKind::Directive) continue;
      if (failed_ && t.offset >= fail_offset_) break;
      if (auto macro = parse_define(t.text)) {
        macro->begin = t.offset;
        macro->start_line = t.line;
        macro->end_line = t.end_line;
        out_.macros.push_back(std::move(*macro));
      }
    }
    return std::move(out_);
  }

 private:
  // ---- token access -------------------------------------------------------

  std::size_t size() const { return toks_.size(); }
  bool valid(std::size_t k) const { return k < toks_.size(); }
  bool is(std::size_t k, std::string_view punct) const { return valid(k) && toks_[k].is(punct); }
  bool is_word(std::size_t k, std::string_view word) const {
    return valid(k) && toks_[k].is_identifier(word);
  }
  bool is_ident(std::size_t k) const {
    return valid(k) && toks_[k].kind == TokenKind::Identifier;
  }

  void fail(std::string message, std::size_t at_token) {
    if (failed_) return;
    failed_ = true;
    fail_offset_ = valid(at_token) ? toks_[at_token].offset : src_.size();
    out_.parse_error = std::move(message);
  }

  // Index of the token matching the opener at `k`, or kNone.
  std::size_t match(std::size_t k, std::string_view open, std::string_view close) const {
    int depth = 0;
    for (std::size_t j = k; j < size(); ++j) {
      if (toks_[j].is(open)) ++depth;
      else if (toks_[j].is(close) && --depth == 0) return j;
    }
    return kNone;
  }

  // Skips a template argument list starting at `<`; returns the index after
  // the closing `>`.
  std::size_t skip_angles(std::size_t k) const {
    int angle = 0;
    int paren = 0;
    for (std::size_t j = k; j < size(); ++j) {
      const Token& t = toks_[j];
      if (t.is("(") || t.is("[")) ++paren;
      else if (t.is(")") || t.is("]")) --paren;
      if (paren > 0) continue;
      if (t.is("<")) {
        ++angle;
      } else if (t.is(">")) {
        if (--angle <= 0) return j + 1;
      } else if (t.is(">>")) {
        angle -= 2;
        if (angle <= 0) return j + 1;
      } else if (t.is("{") || t.is(";")) {
        return j;  // malformed; do not run past a body or statement end
      }
    }
    return size();
  }

  // Walks back from a `>` to its `<`; returns the index of the `<` or kNone.
  std::size_t match_angles_backward(std::size_t k) const {
    int depth = 0;
    for (std::size_t j = k + 1; j-- > 0;) {
      const Token& t = toks_[j];
      if (t.is(">")) ++depth;
      else if (t.is(">>")) depth += 2;
      else if (t.is("<") && --depth == 0) return j;
      else if (t.is(";") || t.is("{") || t.is("}")) return kNone;
    }
    return kNone;
  }

  // Skips a statement up to and including its `;`, balancing braces. Stops
  // before an unmatched `}`.
  void skip_statement() {
    int brace = 0;
    while (i_ < size()) {
      const Token& t = toks_[i_];
      if (t.is("{")) {
        ++brace;
      } else if (t.is("}")) {
        if (brace == 0) return;
        --brace;
      } else if (t.is(";") && brace == 0) {
        ++i_;
        return;
      }
      ++i_;
    }
    if (brace > 0) fail("unterminated '{'", size());
  }

  // ---- scopes ---------------------------------------------------------------

  void parse_scope(std::vector<std::string>& scope, const std::string* class_name, bool nested) {
    while (i_ < size() && !failed_) {
      const Token& t = toks_[i_];
      if (t.kind == TokenKind::Directive || t.is(";")) {
        ++i_;
        continue;
      }
      if (t.is("}")) {
        if (nested) return;
        fail("unbalanced '}'", i_);
        return;
      }
      if (class_name != nullptr &&
          (t.is_identifier("public") || t.is_identifier("private") ||
           t.is_identifier("protected")) &&
          is(i_ + 1, ":")) {
        i_ += 2;
        continue;
      }
      if (t.is_identifier("inline") && is_word(i_ + 1, "namespace")) {
        ++i_;
        continue;
      }
      if (t.is_identifier("namespace")) {
        parse_namespace(scope);
        continue;
      }
      if (t.is_identifier("extern") && valid(i_ + 1) && toks_[i_ + 1].kind == TokenKind::String &&
          is(i_ + 2, "{")) {
        const std::size_t open = i_ + 2;
        i_ += 3;
        parse_scope(scope, nullptr, true);
        if (!close_scope(open)) return;
        continue;
      }
      if (skip_macro_invocation()) continue;
      parse_declaration(scope, class_name);
    }
    if (nested && !failed_) fail("unexpected end of input inside a block", size());
  }

  bool close_scope(std::size_t open_index) {
    if (failed_) return false;
    if (!is(i_, "}")) {
      fail("unterminated '{'", open_index);
      return false;
    }
    ++i_;
    return true;
  }

  void parse_namespace(std::vector<std::string>& scope) {
    std::size_t j = i_ + 1;
    std::vector<std::string> names;
    while (valid(j) && !is(j, "{") && !is(j, "=") && !is(j, ";")) {
      if (is_ident(j) && toks_[j].text != "inline") names.emplace_back(toks_[j].text);
      ++j;
    }
    if (!is(j, "{")) {
      skip_statement();  // alias or malformed
      return;
    }
    const std::size_t open = j;
    i_ = j + 1;
    const std::size_t depth = scope.size();
    scope.insert(scope.end(), names.begin(), names.end());
    parse_scope(scope, nullptr, true);
    scope.resize(depth);
    close_scope(open);
  }

  // A macro used as a statement without a trailing semicolon, e.g.
  // `DEFINE_FLAG(x)` or `Q_OBJECT` on a line of its own.
  bool skip_macro_invocation() {
    if (!is_ident(i_) || lex::is_cpp_keyword(toks_[i_].text)) return false;
    if (is(i_ + 1, "(")) {
      const std::size_t close = match(i_ + 1, "(", ")");
      if (close == kNone || !valid(close + 1)) return false;
      const Token& next = toks_[close + 1];
      if (!next.starts_line) return false;
      static const std::unordered_set<std::string_view> kTails = {
          "{", ";", ":", "->", "const", "noexcept", "override", "final", "=", "throw", "try",
          "requires", "volatile", "&", "&&", ","};
      if (kTails.contains(next.text)) return false;
      i_ = close + 1;
      return true;
    }
    if (is_all_caps_macro_name(toks_[i_].text) && valid(i_ + 1) && toks_[i_ + 1].starts_line &&
        !is(i_ + 1, "(") && !is(i_ + 1, "::") && !is(i_ + 1, "<") && !is(i_ + 1, ";") &&
        !is(i_ + 1, "{") && !is(i_ + 1, "=")) {
      ++i_;
      return true;
    }
    return false;
  }

  // ---- declarations ---------------------------------------------------------

  void parse_declaration(std::vector<std::string>& scope, const std::string* class_name) {
    const std::size_t start = i_;
    std::size_t k = i_;
    bool is_typedef = false;
    while (valid(k)) {
      if (is_word(k, "template") && is(k + 1, "<")) {
        k = skip_angles(k + 1);
      } else if (is(k, "[") && is(k + 1, "[")) {
        const std::size_t close = match(k, "[", "]");
        if (close == kNone) break;
        k = close + 1;
      } else if (is_word(k, "friend") || is_word(k, "export") || is_word(k, "template")) {
        ++k;
      } else if (is_word(k, "typedef")) {
        is_typedef = true;
        ++k;
      } else {
        break;
      }
    }
    if (is_word(k, "using") || is_word(k, "static_assert") || is_word(k, "enum") ||
        is_word(k, "concept")) {
      skip_statement();
      return;
    }
    if (is_word(k, "class") || is_word(k, "struct") || is_word(k, "union")) {
      if (try_parse_class(start, k, scope)) return;
    }
    if (is_typedef) {
      skip_statement();
      return;
    }
    parse_generic(start, scope, class_name);
  }

  // Returns false when the tokens are not a class head (e.g. an elaborated
  // return type like `struct tm* now();`), leaving the cursor untouched.
  bool try_parse_class(std::size_t start, std::size_t keyword, std::vector<std::string>& scope) {
    int angle = 0;
    std::size_t colon = kNone;
    std::size_t open = kNone;
    for (std::size_t j = keyword + 1; j < size(); ++j) {
      const Token& t = toks_[j];
      if (t.kind == TokenKind::Directive) continue;
      if (t.is("(")) {
        if (angle == 0 && !(j > 0 && is_ident(j - 1) &&
                            (toks_[j - 1].text == "alignas" || toks_[j - 1].text == "__attribute__" ||
                             toks_[j - 1].text == "__declspec"))) {
          return false;
        }
        const std::size_t close = match(j, "(", ")");
        if (close == kNone) return false;
        j = close;
        continue;
      }
      if (t.is("<")) ++angle;
      else if (t.is(">")) --angle;
      else if (t.is(">>")) angle -= 2;
      if (angle > 0) continue;
      if (t.is(":") && colon == kNone) {
        colon = j;
      } else if (t.is("{")) {
        open = j;
        break;
      } else if (t.is(";")) {
        skip_statement();  // forward declaration or elaborated variable
        return true;
      } else if (t.is("=") || t.is("}")) {
        return false;
      }
    }
    if (open == kNone) return false;

    const std::vector<std::string> name = class_head_name(keyword + 1, colon == kNone ? open : colon);
    const std::size_t depth = scope.size();
    scope.insert(scope.end(), name.begin(), name.end());
    const std::string short_name = name.empty() ? std::string() : name.back();
    i_ = open + 1;
    parse_scope(scope, &short_name, true);
    const std::string qualified = join(scope, "::");
    scope.resize(depth);
    if (!close_scope(open)) return true;
    // Trailing declarators: `} instance;`
    std::size_t end_tok = i_ - 1;
    if (is(i_, ";")) {
      end_tok = i_;
      ++i_;
    } else if (!is(i_, "}")) {
      const std::size_t before = i_;
      skip_statement();
      if (i_ > before && is(i_ - 1, ";")) end_tok = i_ - 1;
    }
    if (!name.empty()) emit(out_.class_defs, name.back(), qualified, start, end_tok);
    return true;
  }

  std::vector<std::string> class_head_name(std::size_t begin, std::size_t end) const {
    // Last `A::B::C` chain before the base clause, skipping template
    // arguments, `final`, and attribute groups.
    std::size_t k = end;
    while (k > begin) {
      const std::size_t prev = k - 1;
      if (is_word(prev, "final") || is_word(prev, "sealed")) {
        k = prev;
        continue;
      }
      if (is(prev, ">") || is(prev, ">>")) {
        const std::size_t lt = match_angles_backward(prev);
        if (lt == kNone || lt < begin) return {};
        k = lt;
        continue;
      }
      break;
    }
    std::vector<std::string> parts;
    while (k > begin && is_ident(k - 1) && !lex::is_cpp_keyword(toks_[k - 1].text)) {
      parts.insert(parts.begin(), std::string(toks_[k - 1].text));
      k -= 1;
      if (k > begin + 1 && is(k - 1, "::")) {
        k -= 1;
        if (is(k - 1, ">")) {
          const std::size_t lt = match_angles_backward(k - 1);
          if (lt == kNone || lt <= begin) break;
          k = lt;
        }
        continue;
      }
      break;
    }
    return parts;
  }

  struct Declarator {
    std::vector<std::string> name;  // qualified parts
    std::size_t name_begin = kNone;
    std::size_t param_open = kNone;
    std::size_t param_close = kNone;
  };

  // Reads the declarator name that ends right before `param_open`.
  std::vector<std::string> declarator_name(std::size_t param_open, std::size_t lower,
                                           std::size_t& name_begin) const {
    std::size_t k = param_open;
    std::vector<std::string> parts;
    // operator forms
    for (std::size_t j = param_open; j > lower && j + 4 > param_open; --j) {
      if (is_word(j - 1, "operator")) {
        std::string op = "operator";
        for (std::size_t m = j; m < param_open; ++m) {
          if (is_ident(m) && is_ident(m - 1)) op += ' ';
          op += toks_[m].text;
        }
        parts.push_back(op);
        k = j - 1;
        break;
      }
    }
    if (parts.empty()) {
      if (k > lower && (is(k - 1, ">") || is(k - 1, ">>"))) {
        const std::size_t lt = match_angles_backward(k - 1);
        if (lt == kNone || lt <= lower) return {};
        k = lt;
      }
      if (!(k > lower && is_ident(k - 1))) return {};
      std::string last(toks_[k - 1].text);
      k -= 1;
      if (k > lower && is(k - 1, "~")) {
        last = "~" + last;
        k -= 1;
      }
      parts.push_back(std::move(last));
    }
    while (k > lower + 1 && is(k - 1, "::")) {
      std::size_t q = k - 2;
      if (is(q, ">") || is(q, ">>")) {
        const std::size_t lt = match_angles_backward(q);
        if (lt == kNone || lt <= lower) break;
        q = lt - 1;
      }
      if (!is_ident(q) || lex::is_cpp_keyword(toks_[q].text)) break;
      parts.insert(parts.begin(), std::string(toks_[q].text));
      k = q;
    }
    if (k > lower && is(k - 1, "::")) k -= 1;  // global qualifier
    name_begin = k;
    return parts;
  }

  bool starts_declarator_paren(std::size_t j, std::size_t lower) const {
    if (j == 0 || j <= lower) return false;
    std::size_t prev = j - 1;
    if (is(prev, ">") || is(prev, ">>")) {
      const std::size_t lt = match_angles_backward(prev);
      if (lt == kNone || lt <= lower) return false;
      prev = lt - 1;
    }
    if (!is_ident(prev)) return false;
    return !is_non_declarator_word(toks_[prev].text);
  }

  static bool is_param_like(const std::vector<const Token*>& param) {
    if (param.empty()) return false;
    const Token& first = *param.front();
    if (first.kind == TokenKind::Number || first.kind == TokenKind::String ||
        first.kind == TokenKind::Char) {
      return false;
    }
    int identifiers = 0;
    for (const Token* t : param) {
      if (t->kind == TokenKind::Identifier) {
        if (lex::is_type_keyword(t->text)) return true;
        ++identifiers;
      } else if (t->is("*") || t->is("&") || t->is("&&") || t->is("::") || t->is("<") ||
                 t->is("...") || t->is("=") || t->is("[")) {
        return true;
      } else if (t->kind != TokenKind::Punct) {
        return false;
      }
    }
    if (identifiers >= 2) return true;
    if (identifiers == 1 && param.size() == 1) {
      const std::string_view name = first.text;
      return (name.front() >= 'A' && name.front() <= 'Z') ||
             (name.size() > 2 && name.substr(name.size() - 2) == "_t");
    }
    return false;
  }

  bool looks_like_parameter_list(std::size_t open, std::size_t close) const {
    if (close == open + 1) return true;
    if (close == open + 2 && is_word(open + 1, "void")) return true;
    std::vector<const Token*> current;
    int depth = 0;
    for (std::size_t j = open + 1; j < close; ++j) {
      const Token& t = toks_[j];
      if (t.is("(") || t.is("[") || t.is("{") || t.is("<")) ++depth;
      if (t.is(")") || t.is("]") || t.is("}") || t.is(">")) --depth;
      if (t.is(",") && depth == 0) {
        if (!is_param_like(current)) return false;
        current.clear();
        continue;
      }
      current.push_back(&t);
    }
    return is_param_like(current);
  }

  void parse_generic(std::size_t start, std::vector<std::string>& scope,
                     const std::string* class_name) {
    int paren = 0;
    int bracket = 0;
    int angle = 0;
    bool seen_eq = false;
    bool after_params_eq = false;
    bool ctor_init = false;
    Declarator decl;

    std::size_t j = i_;
    for (; j < size(); ++j) {
      const Token& t = toks_[j];
      if (t.kind == TokenKind::Directive) continue;

      if (paren == 0 && bracket == 0 && angle == 0 && !seen_eq && decl.param_open == kNone) {
        if (t.is_identifier("operator")) {
          std::size_t open = j + 1;
          if (is(open, "(") && is(open + 1, ")")) open += 2;
          while (valid(open) && !is(open, "(") && !is(open, ";") && !is(open, "{")) ++open;
          if (is(open, "(")) {
            const std::size_t close = match(open, "(", ")");
            if (close == kNone) break;
            decl.param_open = open;
            decl.param_close = close;
            j = close;
            continue;
          }
        }
        if (t.is("(") && starts_declarator_paren(j, start)) {
          const std::size_t close = match(j, "(", ")");
          if (close == kNone) break;
          decl.param_open = j;
          decl.param_close = close;
          j = close;
          continue;
        }
      }

      if (t.is("(")) {
        ++paren;
        continue;
      }
      if (t.is(")")) {
        --paren;
        continue;
      }
      if (t.is("[")) {
        ++bracket;
        continue;
      }
      if (t.is("]")) {
        --bracket;
        continue;
      }
      if (paren > 0 || bracket > 0) continue;

      if (t.is("<") && !seen_eq && j > 0 && (is_ident(j - 1) || is(j - 1, "::"))) {
        ++angle;
        continue;
      }
      if (angle > 0) {
        if (t.is(">")) --angle;
        else if (t.is(">>")) angle = std::max(0, angle - 2);
        else if (t.is(";") || t.is("{") || t.is("}")) angle = 0;  // was a comparison
        if (angle > 0) continue;
        if (t.is(">") || t.is(">>")) continue;
      }

      if (t.is("=")) {
        if (decl.param_close == kNone) seen_eq = true;
        else after_params_eq = true;
        continue;
      }
      if (t.is(":") && decl.param_close != kNone && !seen_eq) {
        ctor_init = true;
        continue;
      }
      if (t.is("{")) {
        const bool function_body = decl.param_close != kNone && !seen_eq && !after_params_eq &&
                                   !(ctor_init && j > 0 && (is_ident(j - 1) || is(j - 1, ">")));
        const std::size_t close = match(j, "{", "}");
        if (close == kNone) {
          fail("unterminated '{'", j);
          i_ = size();
          return;
        }
        if (!function_body) {
          j = close;
          continue;
        }
        std::size_t end_tok = close;
        if (is_word(j - 1, "try")) {
          while (is_word(end_tok + 1, "catch") && is(end_tok + 2, "(")) {
            const std::size_t rp = match(end_tok + 2, "(", ")");
            if (rp == kNone || !is(rp + 1, "{")) break;
            const std::size_t rb = match(rp + 1, "{", "}");
            if (rb == kNone) break;
            end_tok = rb;
          }
        }
        emit_function(out_.func_defs, decl, start, end_tok, scope);
        i_ = end_tok + 1;
        return;
      }
      if (t.is(";")) {
        if (decl.param_close != kNone && !seen_eq && is_function_declaration(decl, start, class_name)) {
          emit_function(out_.func_decs, decl, start, j, scope);
        }
        i_ = j + 1;
        return;
      }
      if (t.is("}")) {
        i_ = j;  // statement ran into the end of the scope
        return;
      }
    }
    if (paren > 0) fail("unterminated '('", start);
    i_ = size();
  }

  bool is_function_declaration(Declarator& decl, std::size_t start,
                               const std::string* class_name) const {
    if (!looks_like_parameter_list(decl.param_open, decl.param_close)) return false;
    std::size_t name_begin = kNone;
    const auto name = declarator_name(decl.param_open, start, name_begin);
    if (name.empty()) return false;
    bool has_return_type = false;
    for (std::size_t k = start; k < name_begin; ++k) {
      if (toks_[k].kind == TokenKind::Identifier || toks_[k].is("*") || toks_[k].is("&")) {
        has_return_type = true;
        break;
      }
    }
    if (has_return_type) return true;
    // Constructors and destructors carry no return type.
    if (class_name != nullptr && (name.back() == *class_name || name.back().starts_with("~"))) {
      return true;
    }
    return name.size() >= 2 && (name.back() == name[name.size() - 2] ||
                                name.back() == "~" + name[name.size() - 2]);
  }

  void emit_function(std::vector<CppElement>& sink, const Declarator& decl, std::size_t start,
                     std::size_t end_tok, const std::vector<std::string>& scope) {
    std::size_t name_begin = kNone;
    const auto name = declarator_name(decl.param_open, start, name_begin);
    if (name.empty()) return;
    std::vector<std::string> full = scope;
    full.insert(full.end(), name.begin(), name.end());
    emit(sink, name.back(), join(full, "::"), start, end_tok);
  }

  void emit(std::vector<CppElement>& sink, const std::string& identifier,
            const std::string& qualified, std::size_t first_tok, std::size_t last_tok) {
    CppElement e;
    e.identifier = identifier;
    e.qualified_name = qualified.empty() ? identifier : qualified;
    e.begin = toks_[first_tok].offset;
    e.end = toks_[last_tok].end_offset();
    e.text = src_.substr(e.begin, e.end - e.begin);
    e.start_line = toks_[first_tok].line;
    e.end_line = toks_[last_tok].end_line;
    sink.push_back(std::move(e));
  }

  const std::string& src_;
  std::vector<Token> toks_;
  std::size_t i_ = 0;
  CppElements out_;
  bool failed_ = false;
  std::size_t fail_offset_ = 0;
};

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n\f\v");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n\f\v");
  return s.substr(b, e - b + 1);
}

}  // namespace

std::optional<RawMacro> parse_define(std::string_view directive) {
  // Join line splices first so offsets below work on one logical line.
  std::string logical;
  logical.reserve(directive.size());
  for (std::size_t i = 0; i < directive.size(); ++i) {
    if (directive[i] == '\\') {
      std::size_t j = i + 1;
      while (j < directive.size() && directive[j] == '\r') ++j;
      if (j < directive.size() && directive[j] == '\n') {
        logical.push_back('\n');
        i = j;
        continue;
      }
    }
    logical.push_back(directive[i]);
  }
  std::string_view rest = logical;
  rest = trim(rest);
  if (rest.empty() || rest.front() != '#') return std::nullopt;
  rest.remove_prefix(1);
  rest = rest.substr(std::min(rest.size(), rest.find_first_not_of(" \t")));
  if (!rest.starts_with("define")) return std::nullopt;
  rest.remove_prefix(6);
  if (rest.empty() || (rest.front() != ' ' && rest.front() != '\t')) return std::nullopt;
  rest = rest.substr(std::min(rest.size(), rest.find_first_not_of(" \t")));

  std::size_t n = 0;
  while (n < rest.size()) {
    const auto c = static_cast<unsigned char>(rest[n]);
    const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_' || c >= 0x80 ||
                    (n > 0 && c >= '0' && c <= '9');
    if (!ok) break;
    ++n;
  }
  if (n == 0) return std::nullopt;

  RawMacro macro;
  macro.text = std::string(trim(directive));
  macro.name = std::string(rest.substr(0, n));
  rest.remove_prefix(n);
  if (!rest.empty() && rest.front() == '(') {
    macro.function_like = true;
    const auto close = rest.find(')');
    const std::string_view params =
        rest.substr(1, close == std::string_view::npos ? std::string_view::npos : close - 1);
    std::size_t begin = 0;
    while (begin <= params.size()) {
      auto comma = params.find(',', begin);
      if (comma == std::string_view::npos) comma = params.size();
      const std::string_view p = trim(params.substr(begin, comma - begin));
      if (!p.empty()) macro.params.emplace_back(p);
      begin = comma + 1;
    }
    rest = close == std::string_view::npos ? std::string_view() : rest.substr(close + 1);
  }
  macro.body = std::string(trim(rest));
  return macro;
}

CppElements extract_cpp_elements(const SourceFile& file) {
  if (file.kind != FileKind::Cpp && file.kind != FileKind::Header) {
    throw Error(ErrorCode::UnsupportedFileType,
                "Unsupported file type! " + file.path + " is " + std::string(to_string(file.kind)));
  }
  lex::LexOptions opts;
  opts.keep_comments = false;
  StructureParser parser(file, lex::lex(file.text, opts));
  return parser.run();
}

}  // namespace coderag
