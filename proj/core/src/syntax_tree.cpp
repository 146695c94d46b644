#include "coderag/syntax_tree.hpp"

#include <algorithm>
#include <array>
#include <optional>

#include "coderag/lexer.hpp"

namespace coderag {

std::string SyntaxNode::canonical() const {
  if (children.empty()) return label;
  std::string out = "(" + label;
  for (const auto& c : children) {
    out += ' ';
    out += c.canonical();
  }
  out += ')';
  return out;
}

std::size_t SyntaxNode::size() const {
  std::size_t n = 1;
  for (const auto& c : children) n += c.size();
  return n;
}

namespace {

using lex::Token;
using lex::TokenKind;

SyntaxNode leaf(std::string label) { return SyntaxNode{std::move(label), {}}; }
SyntaxNode node(std::string label, std::vector<SyntaxNode> children) {
  return SyntaxNode{std::move(label), std::move(children)};
}

constexpr std::size_t kMaxDepth = 400;

bool is_specifier(std::string_view w) {
  static constexpr std::array<std::string_view, 16> kSpecs = {
      "const",  "static",   "inline",   "virtual",  "extern",  "mutable",  "constexpr", "volatile",
      "register", "thread_local", "explicit", "friend", "consteval", "constinit", "typename", "struct"};
  return std::find(kSpecs.begin(), kSpecs.end(), w) != kSpecs.end();
}

class Parser {
 public:
  explicit Parser(std::vector<Token> toks) : toks_(std::move(toks)) {}

  ParsedFragment run() {
    ParsedFragment out;
    out.root.label = "unit";
    while (!at_end()) {
      if (peek().is("}") || peek().is(")") || peek().is("]")) {
        error_skip(out.root.children);
        continue;
      }
      const std::size_t before = pos_;
      out.root.children.push_back(statement());
      if (pos_ == before) error_skip(out.root.children);
    }
    out.errors = errors_;
    return out;
  }

 private:
  // ---- token helpers ----
  bool at_end() const { return pos_ >= toks_.size(); }
  const Token& peek(std::size_t ahead = 0) const {
    static const Token kEnd{TokenKind::Punct, "", 0, 0, 0, false};
    return pos_ + ahead < toks_.size() ? toks_[pos_ + ahead] : kEnd;
  }
  bool is_kw(std::string_view w, std::size_t ahead = 0) const { return peek(ahead).is_identifier(w); }
  bool is_p(std::string_view p, std::size_t ahead = 0) const { return peek(ahead).is(p); }
  bool is_name(std::size_t ahead = 0) const {
    const Token& t = peek(ahead);
    return t.kind == TokenKind::Identifier && !lex::is_cpp_keyword(t.text);
  }
  bool accept(std::string_view p) {
    if (is_p(p)) {
      ++pos_;
      return true;
    }
    return false;
  }
  bool accept_kw(std::string_view w) {
    if (is_kw(w)) {
      ++pos_;
      return true;
    }
    return false;
  }
  void expect(std::string_view p) {
    if (!accept(p)) ++errors_;
  }
  void error_skip(std::vector<SyntaxNode>& into) {
    ++errors_;
    ++pos_;
    into.push_back(leaf("ERROR"));
  }

  struct DepthGuard {
    Parser& p;
    explicit DepthGuard(Parser& parser) : p(parser) { ++p.depth_; }
    ~DepthGuard() { --p.depth_; }
    bool too_deep() const { return p.depth_ > kMaxDepth; }
  };

  // Skips a balanced (), [], {} or <> group starting at the current token.
  void skip_group() {
    const std::string_view open = peek().text;
    const std::string_view close = open == "(" ? ")" : open == "[" ? "]" : open == "{" ? "}" : ">";
    int depth = 0;
    while (!at_end()) {
      if (is_p(open)) ++depth;
      else if (is_p(close)) {
        if (--depth == 0) {
          ++pos_;
          return;
        }
      } else if (open == "<" && is_p(">>")) {
        depth -= 2;
        if (depth <= 0) {
          ++pos_;
          return;
        }
      } else if (open == "<" && (is_p(";") || is_p("{") || is_p("}"))) {
        return;
      }
      ++pos_;
    }
  }

  // ---- statements ----
  SyntaxNode statement() {
    DepthGuard guard(*this);
    if (guard.too_deep()) {
      ++errors_;
      ++pos_;
      return leaf("ERROR");
    }
    const Token& t = peek();
    if (t.is("{")) return compound();
    if (t.is(";")) {
      ++pos_;
      return leaf("empty");
    }
    if (t.kind == TokenKind::Identifier) {
      const std::string_view w = t.text;
      if (w == "return" || w == "co_return" || w == "throw") {
        ++pos_;
        std::vector<SyntaxNode> kids;
        if (!is_p(";") && !at_end()) kids.push_back(expression());
        expect(";");
        return node(std::string(w), std::move(kids));
      }
      if (w == "if") return if_statement();
      if (w == "while") {
        ++pos_;
        SyntaxNode cond = paren_condition();
        return node("while", {std::move(cond), statement_or_empty()});
      }
      if (w == "do") {
        ++pos_;
        SyntaxNode body = statement_or_empty();
        std::vector<SyntaxNode> kids{std::move(body)};
        if (accept_kw("while")) kids.push_back(paren_condition());
        expect(";");
        return node("do", std::move(kids));
      }
      if (w == "for") return for_statement();
      if (w == "switch") {
        ++pos_;
        SyntaxNode cond = paren_condition();
        return node("switch", {std::move(cond), statement_or_empty()});
      }
      if (w == "case") {
        ++pos_;
        SyntaxNode value = expression(true);
        expect(":");
        return node("case", {std::move(value)});
      }
      if (w == "default" && is_p(":", 1)) {
        pos_ += 2;
        return leaf("default");
      }
      if (w == "break" || w == "continue") {
        ++pos_;
        expect(";");
        return leaf(std::string(w));
      }
      if (w == "goto") {
        pos_ += 1;
        if (is_name()) ++pos_;
        expect(";");
        return node("goto", {leaf("id")});
      }
      if (w == "try") {
        ++pos_;
        std::vector<SyntaxNode> kids{compound_or_error()};
        while (accept_kw("catch")) {
          if (is_p("(")) skip_group();
          kids.push_back(node("catch", {compound_or_error()}));
        }
        return node("try", std::move(kids));
      }
      if ((w == "public" || w == "private" || w == "protected") && is_p(":", 1)) {
        pos_ += 2;
        return leaf("access");
      }
      if (w == "namespace") return namespace_block();
      if (w == "template") {
        ++pos_;
        if (is_p("<")) skip_group();
        return node("template", {statement()});
      }
      if (w == "using" || w == "typedef" || w == "static_assert") {
        ++pos_;
        while (!at_end() && !is_p(";") && !is_p("}")) {
          if (is_p("(") || is_p("{") || is_p("[")) skip_group();
          else ++pos_;
        }
        accept(";");
        return leaf(std::string(w));
      }
      if ((w == "class" || w == "struct" || w == "union" || w == "enum") && class_ahead()) return class_def();
      if (is_name() && is_p(":", 1) && !is_p("::", 1)) {
        pos_ += 2;
        return node("label", {leaf("id")});
      }
    }
    const std::size_t save = pos_;
    const std::size_t save_errors = errors_;
    if (auto decl = declaration()) return std::move(*decl);
    pos_ = save;
    errors_ = save_errors;
    SyntaxNode e = expression();
    expect(";");
    return node("expr_stmt", {std::move(e)});
  }

  SyntaxNode statement_or_empty() {
    if (at_end() || is_p("}")) {
      ++errors_;
      return leaf("ERROR");
    }
    return statement();
  }

  SyntaxNode compound() {
    expect("{");
    SyntaxNode block = leaf("block");
    while (!at_end() && !is_p("}")) {
      if (is_p(")") || is_p("]")) {
        error_skip(block.children);
        continue;
      }
      const std::size_t before = pos_;
      block.children.push_back(statement());
      if (pos_ == before) error_skip(block.children);
    }
    expect("}");
    return block;
  }

  SyntaxNode compound_or_error() {
    if (is_p("{")) return compound();
    ++errors_;
    return leaf("ERROR");
  }

  SyntaxNode paren_condition() {
    if (!accept("(")) {
      ++errors_;
      return leaf("ERROR");
    }
    SyntaxNode cond = condition();
    expect(")");
    return cond;
  }

  // Conditions may declare a variable: `if (auto* p = get())`.
  SyntaxNode condition() {
    const std::size_t save = pos_;
    const std::size_t save_errors = errors_;
    if (auto type = type_specifier()) {
      if (is_name() && (is_p("=", 1) || is_p("{", 1) || is_p(":", 1))) {
        ++pos_;
        std::vector<SyntaxNode> kids{std::move(*type), leaf("id")};
        if (accept("=")) kids.push_back(expression(true));
        else if (is_p("{")) kids.push_back(braced_init());
        return node("decl", std::move(kids));
      }
    }
    pos_ = save;
    errors_ = save_errors;
    return expression();
  }

  SyntaxNode if_statement() {
    ++pos_;
    accept_kw("constexpr");
    SyntaxNode cond = paren_condition();
    std::vector<SyntaxNode> kids{std::move(cond), statement_or_empty()};
    if (accept_kw("else")) kids.push_back(node("else", {statement_or_empty()}));
    return node("if", std::move(kids));
  }

  SyntaxNode for_statement() {
    ++pos_;
    if (!accept("(")) {
      ++errors_;
      return leaf("ERROR");
    }
    // Range-for: a ':' at paren depth 0 before the first ';'.
    std::size_t scan = pos_;
    int depth = 0;
    bool range = false;
    for (; scan < toks_.size(); ++scan) {
      const Token& t = toks_[scan];
      if (t.is("(") || t.is("[") || t.is("{")) ++depth;
      else if (t.is(")") || t.is("]") || t.is("}")) {
        if (depth == 0) break;
        --depth;
      } else if (depth == 0 && t.is(";")) break;
      else if (depth == 0 && t.is(":")) {
        range = true;
        break;
      }
    }
    if (range) {
      std::vector<SyntaxNode> kids;
      if (auto type = type_specifier()) kids.push_back(std::move(*type));
      while (is_p("&") || is_p("&&") || is_p("*")) ++pos_;
      if (accept("[")) {
        while (!at_end() && !is_p("]")) ++pos_;
        accept("]");
      } else if (is_name()) {
        ++pos_;
      }
      kids.push_back(leaf("id"));
      expect(":");
      kids.push_back(expression());
      expect(")");
      kids.push_back(statement_or_empty());
      return node("for_range", std::move(kids));
    }
    std::vector<SyntaxNode> kids;
    if (accept(";")) {
      kids.push_back(leaf("empty"));
    } else {
      kids.push_back(statement());
    }
    kids.push_back(is_p(";") ? leaf("empty") : condition());
    expect(";");
    kids.push_back(is_p(")") ? leaf("empty") : expression());
    expect(")");
    kids.push_back(statement_or_empty());
    return node("for", std::move(kids));
  }

  SyntaxNode namespace_block() {
    ++pos_;
    while (is_name() || is_p("::")) ++pos_;
    if (accept("=")) {
      while (!at_end() && !is_p(";")) ++pos_;
      accept(";");
      return leaf("namespace_alias");
    }
    if (!is_p("{")) {
      ++errors_;
      return leaf("ERROR");
    }
    SyntaxNode body = compound();
    body.label = "namespace";
    return body;
  }

  bool class_ahead() const {
    for (std::size_t i = pos_ + 1; i < toks_.size(); ++i) {
      const Token& t = toks_[i];
      if (t.is("{")) return true;
      if (t.is(";") || t.is("(") || t.is("=") || t.is(")") || t.is("}")) return false;
    }
    return false;
  }

  SyntaxNode class_def() {
    const std::string kind(peek().text);
    ++pos_;
    accept_kw("class");
    accept_kw("struct");
    std::vector<SyntaxNode> kids;
    while (!at_end() && !is_p("{")) {
      if (is_p("<")) skip_group();
      else if (is_p(":") && kind != "enum") {
        ++pos_;
        SyntaxNode bases = leaf("bases");
        while (!at_end() && !is_p("{")) {
          if (is_name()) bases.children.push_back(leaf("id"));
          if (is_p("<")) skip_group();
          else ++pos_;
        }
        kids.push_back(std::move(bases));
      } else {
        ++pos_;
      }
    }
    if (kind == "enum") {
      SyntaxNode body = leaf("enumerators");
      accept("{");
      while (!at_end() && !is_p("}")) {
        if (is_name()) {
          ++pos_;
          if (accept("=")) body.children.push_back(node("enumerator", {expression(true)}));
          else body.children.push_back(leaf("enumerator"));
        }
        if (!accept(",") && !is_p("}")) {
          ++errors_;
          ++pos_;
        }
      }
      expect("}");
      kids.push_back(std::move(body));
    } else {
      SyntaxNode body = compound();
      body.label = "members";
      kids.push_back(std::move(body));
    }
    while (!at_end() && !is_p(";") && !is_p("}")) {
      if (is_name()) kids.push_back(leaf("id"));
      ++pos_;
    }
    accept(";");
    return node(kind, std::move(kids));
  }

  // ---- declarations ----
  std::optional<SyntaxNode> type_specifier() {
    std::vector<SyntaxNode> parts;
    bool have_type = false;
    while (!at_end()) {
      const Token& t = peek();
      if (t.kind != TokenKind::Identifier) break;
      if (is_specifier(t.text)) {
        if (t.text == "const" || t.text == "volatile") parts.push_back(leaf(std::string(t.text)));
        ++pos_;
        continue;
      }
      if (lex::is_type_keyword(t.text)) {
        parts.push_back(leaf("kw:" + std::string(t.text)));
        have_type = true;
        ++pos_;
        continue;
      }
      if (t.text == "decltype" && is_p("(", 1)) {
        ++pos_;
        skip_group();
        parts.push_back(leaf("decltype"));
        have_type = true;
        continue;
      }
      if (!have_type && !lex::is_cpp_keyword(t.text)) {
        // (::)? name (<...>)? (:: name (<...>)?)*
        ++pos_;
        std::size_t args = 0;
        while (true) {
          if (is_p("<")) {
            const std::size_t save = pos_;
            skip_group();
            if (toks_[pos_ - 1].is(">") || toks_[pos_ - 1].is(">>")) {
              ++args;
            } else {
              pos_ = save;
              return std::nullopt;
            }
          }
          if (is_p("::") && is_name(1)) {
            pos_ += 2;
            continue;
          }
          break;
        }
        SyntaxNode name = leaf("id");
        if (args > 0) name = node("template_id", {leaf("id")});
        parts.push_back(std::move(name));
        have_type = true;
        continue;
      }
      break;
    }
    if (!have_type) return std::nullopt;
    while (is_kw("const") || is_kw("volatile")) {
      parts.push_back(leaf(std::string(peek().text)));
      ++pos_;
    }
    return node("type", std::move(parts));
  }

  std::optional<SyntaxNode> declaration() {
    if (is_p("::")) ++pos_;
    auto type = type_specifier();
    std::vector<SyntaxNode> kids;
    const bool dtor = !type && is_p("~") && is_name(1);
    if (!type && !dtor) return std::nullopt;
    if (type) kids.push_back(std::move(*type));
    std::vector<SyntaxNode> declarators;
    while (true) {
      SyntaxNode decl = leaf("declarator");
      while (is_p("*") || is_p("&") || is_p("&&") || is_kw("const")) {
        decl.children.push_back(leaf(is_p("*") ? "ptr" : is_kw("const") ? "const" : "ref"));
        ++pos_;
      }
      accept("~");
      if (is_kw("operator")) {
        ++pos_;
        while (!at_end() && !is_p("(")) ++pos_;
        if (is_p("(") && is_p(")", 1) && is_p("(", 2)) pos_ += 2;
        decl.children.push_back(leaf("operator"));
      } else if (is_name()) {
        ++pos_;
        while (is_p("::") && (is_name(1) || is_p("~", 1))) {
          pos_ += 2;
          if (toks_[pos_ - 1].is("~")) ++pos_;
        }
        decl.children.push_back(leaf("id"));
      } else if (is_p("(") && kids.size() == 1 && kids[0].children.size() == 1 && kids[0].children[0].label == "id") {
        // `Name(args)` with no declarator is a constructor or a call.
        return std::nullopt;
      } else {
        return std::nullopt;
      }
      if (is_p("(")) {
        SyntaxNode params = parameter_list();
        if (!params.label.empty() && params.label == "NOTPARAMS") {
          // `Type name(expr, ...)`: direct initialization.
          decl.children.push_back(node("init", std::move(params.children)));
        } else {
          decl.children.push_back(std::move(params));
          while (!at_end()) {
            if (is_kw("const") || is_kw("override") || is_kw("final") || is_kw("volatile") || is_p("&") ||
                is_p("&&")) {
              ++pos_;
            } else if (is_kw("noexcept") || is_kw("throw")) {
              ++pos_;
              if (is_p("(")) skip_group();
            } else if (is_p("->")) {
              ++pos_;
              if (auto ret = type_specifier()) decl.children.push_back(node("trailing", {std::move(*ret)}));
              while (is_p("*") || is_p("&")) ++pos_;
            } else {
              break;
            }
          }
          if (is_p("=") && (is_p("0", 1) || is_kw("default", 1) || is_kw("delete", 1))) {
            pos_ += 2;
            expect(";");
            kids.push_back(std::move(decl));
            return node("func_decl", std::move(kids));
          }
          if (is_p(":") || is_p("{") || is_kw("try")) {
            accept_kw("try");
            if (accept(":")) {
              SyntaxNode inits = leaf("ctor_init");
              while (!at_end() && !is_p("{")) {
                if (is_name()) {
                  ++pos_;
                  if (is_p("(") || is_p("{")) {
                    inits.children.push_back(node("member_init", argument_group()));
                  }
                } else {
                  ++pos_;
                }
                accept(",");
              }
              decl.children.push_back(std::move(inits));
            }
            if (!is_p("{")) return std::nullopt;
            kids.push_back(std::move(decl));
            kids.push_back(compound());
            while (accept_kw("catch")) {
              if (is_p("(")) skip_group();
              kids.push_back(node("catch", {compound_or_error()}));
            }
            return node("func_def", std::move(kids));
          }
          if (is_p(";")) {
            ++pos_;
            kids.push_back(std::move(decl));
            return node("func_decl", std::move(kids));
          }
          return std::nullopt;
        }
      }
      while (is_p("[")) {
        ++pos_;
        if (!is_p("]")) decl.children.push_back(node("array", {expression()}));
        else decl.children.push_back(leaf("array"));
        expect("]");
      }
      if (is_p(":") && !is_p("::")) {  // bit-field
        ++pos_;
        decl.children.push_back(node("bits", {expression(true)}));
      }
      if (accept("=")) {
        decl.children.push_back(node("init", {is_p("{") ? braced_init() : expression(true)}));
      } else if (is_p("{")) {
        decl.children.push_back(node("init", {braced_init()}));
      }
      declarators.push_back(std::move(decl));
      if (accept(",")) continue;
      break;
    }
    if (!accept(";")) return std::nullopt;
    for (auto& d : declarators) kids.push_back(std::move(d));
    return node("decl", std::move(kids));
  }

  // Parameter list, or arguments labeled NOTPARAMS when the parenthesized
  // group does not look like parameters.
  SyntaxNode parameter_list() {
    const std::size_t open = pos_;
    ++pos_;
    SyntaxNode params = leaf("params");
    if (accept(")")) return params;
    while (!at_end()) {
      if (is_p("...")) {
        ++pos_;
        params.children.push_back(leaf("variadic"));
      } else {
        const std::size_t save = pos_;
        auto type = type_specifier();
        const bool param_like = type && (is_p(",") || is_p(")") || is_p("*") || is_p("&") || is_p("&&") ||
                                          is_name() || is_p("=") || is_p("[") || is_p("..."));
        if (!param_like) {
          pos_ = open;
          SyntaxNode args = node("NOTPARAMS", argument_group());
          return args;
        }
        (void)save;
        std::vector<SyntaxNode> p{std::move(*type)};
        while (is_p("*") || is_p("&") || is_p("&&") || is_kw("const") || is_p("...")) {
          p.push_back(leaf(is_p("*") ? "ptr" : is_kw("const") ? "const" : is_p("...") ? "pack" : "ref"));
          ++pos_;
        }
        if (is_name()) {
          ++pos_;
          p.push_back(leaf("id"));
        }
        while (is_p("[")) {
          skip_group();
          p.push_back(leaf("array"));
        }
        if (accept("=")) p.push_back(node("default", {expression(true)}));
        params.children.push_back(node("param", std::move(p)));
      }
      if (accept(",")) continue;
      if (accept(")")) return params;
      pos_ = open;
      return node("NOTPARAMS", argument_group());
    }
    return params;
  }

  // ( args ) or { args }, returning the argument expressions.
  std::vector<SyntaxNode> argument_group() {
    const std::string_view close = is_p("{") ? "}" : ")";
    ++pos_;
    std::vector<SyntaxNode> args;
    while (!at_end() && !is_p(close)) {
      if (is_p(";") || is_p("}") || is_p(")")) break;
      const std::size_t before = pos_;
      args.push_back(is_p("{") ? braced_init() : expression(true));
      if (pos_ == before) {
        ++errors_;
        ++pos_;
      }
      if (!accept(",")) break;
    }
    expect(close);
    return args;
  }

  SyntaxNode braced_init() { return node("init_list", argument_group()); }

  // ---- expressions ----
  // `no_comma` parses an assignment-expression (no top-level comma).
  SyntaxNode expression(bool no_comma = false) {
    DepthGuard guard(*this);
    if (guard.too_deep()) {
      ++errors_;
      if (!at_end()) ++pos_;
      return leaf("ERROR");
    }
    SyntaxNode lhs = assignment();
    if (no_comma) return lhs;
    while (is_p(",")) {
      ++pos_;
      lhs = node("binop:,", {std::move(lhs), assignment()});
    }
    return lhs;
  }

  SyntaxNode assignment() {
    SyntaxNode lhs = conditional();
    static constexpr std::array<std::string_view, 11> kAssign = {"=",  "+=", "-=", "*=",  "/=", "%=",
                                                                 "&=", "|=", "^=", "<<=", ">>="};
    for (auto op : kAssign) {
      if (is_p(op)) {
        ++pos_;
        SyntaxNode rhs = is_p("{") ? braced_init() : assignment();
        return node("assign:" + std::string(op), {std::move(lhs), std::move(rhs)});
      }
    }
    return lhs;
  }

  SyntaxNode conditional() {
    SyntaxNode cond = binary(0);
    if (accept("?")) {
      SyntaxNode a = expression();
      expect(":");
      SyntaxNode b = assignment();
      return node("cond", {std::move(cond), std::move(a), std::move(b)});
    }
    return cond;
  }

  static int precedence(const Token& t) {
    if (t.kind != TokenKind::Punct && !(t.kind == TokenKind::Identifier && (t.text == "and" || t.text == "or")))
      return -1;
    const std::string_view s = t.text;
    if (s == "||" || s == "or") return 0;
    if (s == "&&" || s == "and") return 1;
    if (s == "|") return 2;
    if (s == "^") return 3;
    if (s == "&") return 4;
    if (s == "==" || s == "!=") return 5;
    if (s == "<" || s == ">" || s == "<=" || s == ">=") return 6;
    if (s == "<=>") return 7;
    if (s == "<<" || s == ">>") return 8;
    if (s == "+" || s == "-") return 9;
    if (s == "*" || s == "/" || s == "%") return 10;
    if (s == ".*" || s == "->*") return 11;
    return -1;
  }

  SyntaxNode binary(int min_prec) {
    SyntaxNode lhs = unary();
    while (true) {
      const int prec = precedence(peek());
      if (prec < min_prec) return lhs;
      const std::string op(peek().text);
      ++pos_;
      SyntaxNode rhs = binary(prec + 1);
      lhs = node("binop:" + op, {std::move(lhs), std::move(rhs)});
    }
  }

  SyntaxNode unary() {
    DepthGuard guard(*this);
    if (guard.too_deep()) {
      ++errors_;
      if (!at_end()) ++pos_;
      return leaf("ERROR");
    }
    static constexpr std::array<std::string_view, 8> kPrefix = {"!", "~", "-", "+", "++", "--", "*", "&"};
    for (auto op : kPrefix) {
      if (is_p(op)) {
        ++pos_;
        return node("unop:" + std::string(op), {unary()});
      }
    }
    if (is_kw("not")) {
      ++pos_;
      return node("unop:!", {unary()});
    }
    if (is_kw("sizeof") || is_kw("alignof")) {
      const std::string kw(peek().text);
      ++pos_;
      accept("...");
      if (is_p("(")) {
        const std::size_t save = pos_;
        ++pos_;
        if (auto type = type_specifier()) {
          while (is_p("*") || is_p("&")) ++pos_;
          if (accept(")")) return node(kw, {std::move(*type)});
        }
        pos_ = save;
      }
      return node(kw, {unary()});
    }
    if (is_kw("new")) {
      ++pos_;
      std::vector<SyntaxNode> kids;
      if (auto type = type_specifier()) kids.push_back(std::move(*type));
      while (is_p("*")) ++pos_;
      while (is_p("[")) {
        ++pos_;
        kids.push_back(node("array", {expression()}));
        expect("]");
      }
      if (is_p("(") || is_p("{")) kids.push_back(node("args", argument_group()));
      return node("new", std::move(kids));
    }
    if (is_kw("delete")) {
      ++pos_;
      if (is_p("[") && is_p("]", 1)) pos_ += 2;
      return node("delete", {unary()});
    }
    if (is_kw("co_await")) {
      ++pos_;
      return node("co_await", {unary()});
    }
    // C-style cast: `(type) expr`
    if (is_p("(")) {
      const std::size_t save = pos_;
      ++pos_;
      if (auto type = type_specifier()) {
        while (is_p("*") || is_p("&")) ++pos_;
        const bool builtin = !type->children.empty() && type->children[0].label.starts_with("kw:");
        if (accept(")") && (builtin || is_name() || is_p("(") || peek().kind == TokenKind::Number)) {
          if (!at_end() && !is_p(";") && !is_p(")") && precedence(peek()) < 0) {
            return node("cast", {std::move(*type), unary()});
          }
        }
      }
      pos_ = save;
    }
    return postfix(primary());
  }

  SyntaxNode postfix(SyntaxNode base) {
    while (!at_end()) {
      if (is_p("(")) {
        std::vector<SyntaxNode> kids{std::move(base)};
        for (auto& a : argument_group()) kids.push_back(std::move(a));
        base = node("call", std::move(kids));
      } else if (is_p("[")) {
        ++pos_;
        SyntaxNode idx = is_p("]") ? leaf("empty") : expression();
        expect("]");
        base = node("index", {std::move(base), std::move(idx)});
      } else if (is_p(".") || is_p("->")) {
        const std::string op(peek().text);
        ++pos_;
        accept_kw("template");
        accept("~");
        if (is_name() || peek().kind == TokenKind::Identifier) ++pos_;
        else ++errors_;
        base = node("member:" + op, {std::move(base), leaf("id")});
      } else if (is_p("++") || is_p("--")) {
        base = node("postfix:" + std::string(peek().text), {std::move(base)});
        ++pos_;
      } else if (is_p("{") && (base.label == "id" || base.label == "type")) {
        base = node("construct", {std::move(base), braced_init()});
      } else {
        break;
      }
    }
    return base;
  }

  SyntaxNode primary() {
    const Token& t = peek();
    if (at_end()) {
      ++errors_;
      return leaf("ERROR");
    }
    switch (t.kind) {
      case TokenKind::Number: {
        ++pos_;
        const std::string_view s = t.text;
        const bool hex = s.size() > 1 && s[0] == '0' && (s[1] == 'x' || s[1] == 'X');
        const bool flt = !hex && (s.find_first_of(".eE") != std::string_view::npos);
        return leaf(flt ? "lit:float" : "lit:int");
      }
      case TokenKind::String:
        ++pos_;
        while (peek().kind == TokenKind::String) ++pos_;
        return leaf("lit:string");
      case TokenKind::Char:
        ++pos_;
        return leaf("lit:char");
      default: break;
    }
    if (t.kind == TokenKind::Identifier) {
      const std::string_view w = t.text;
      if (w == "true" || w == "false") {
        ++pos_;
        return leaf("lit:bool");
      }
      if (w == "nullptr" || w == "NULL") {
        ++pos_;
        return leaf("lit:null");
      }
      if (w == "this") {
        ++pos_;
        return leaf("this");
      }
      if (w == "static_cast" || w == "dynamic_cast" || w == "reinterpret_cast" || w == "const_cast") {
        ++pos_;
        std::vector<SyntaxNode> kids;
        if (accept("<")) {
          if (auto type = type_specifier()) kids.push_back(std::move(*type));
          while (!at_end() && !is_p(">") && !is_p(";")) ++pos_;
          expect(">");
        }
        if (accept("(")) {
          kids.push_back(expression());
          expect(")");
        }
        return node("cast:" + std::string(w), std::move(kids));
      }
      if (lex::is_type_keyword(w)) {
        auto type = type_specifier();
        return type ? std::move(*type) : leaf("ERROR");
      }
      if (!lex::is_cpp_keyword(w)) {
        ++pos_;
        while (is_p("::") && (is_name(1) || peek(1).kind == TokenKind::Identifier)) pos_ += 2;
        return leaf("id");
      }
    }
    if (t.is("::") && is_name(1)) {
      ++pos_;
      return primary();
    }
    if (t.is("(")) {
      ++pos_;
      SyntaxNode inner = is_p(")") ? leaf("empty") : expression();
      expect(")");
      return node("paren", {std::move(inner)});
    }
    if (t.is("{")) return braced_init();
    if (t.is("[")) return lambda();
    if (t.is(";") || t.is(")") || t.is("}") || t.is("]") || t.is(",") || t.is(":")) {
      ++errors_;
      return leaf("ERROR");
    }
    ++errors_;
    ++pos_;
    return leaf("ERROR");
  }

  SyntaxNode lambda() {
    skip_group();  // capture list
    std::vector<SyntaxNode> kids;
    if (is_p("(")) {
      SyntaxNode params = parameter_list();
      if (params.label == "params") kids.push_back(std::move(params));
    }
    while (!at_end() && !is_p("{") && !is_p(";")) {
      if (is_p("(")) skip_group();
      else ++pos_;
    }
    if (is_p("{")) kids.push_back(compound());
    return node("lambda", std::move(kids));
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  std::size_t errors_ = 0;
  std::size_t depth_ = 0;
};

void collect(const SyntaxNode& n, std::map<std::string, std::size_t>& out, bool is_root) {
  if (!n.children.empty() && !is_root) ++out[n.canonical()];
  for (const auto& c : n.children) collect(c, out, false);
}

std::size_t total(const std::map<std::string, std::size_t>& m) {
  std::size_t n = 0;
  for (const auto& [k, v] : m) n += v;
  return n;
}

}  // namespace

ParsedFragment parse_fragment(std::string_view code) {
  lex::LexOptions opts;
  opts.keep_comments = false;
  std::vector<Token> toks;
  for (const auto& t : lex::lex(code, opts)) {
    if (t.kind != TokenKind::Directive) toks.push_back(t);
  }
  return Parser(std::move(toks)).run();
}

std::map<std::string, std::size_t> subtree_multiset(const SyntaxNode& root) {
  std::map<std::string, std::size_t> out;
  collect(root, out, true);
  return out;
}

AstDetail ast_similarity_detail(std::string_view candidate, std::string_view reference) {
  AstDetail d;
  const auto ref = subtree_multiset(parse_fragment(reference).root);
  d.reference_subtrees = total(ref);
  if (d.reference_subtrees == 0) {
    d.flagged = true;
    const auto cand = subtree_multiset(parse_fragment(candidate).root);
    d.score = (cand.empty() && candidate == reference) ? 1.0 : 0.0;
    return d;
  }
  const auto cand = subtree_multiset(parse_fragment(candidate).root);
  for (const auto& [shape, count] : ref) {
    const auto it = cand.find(shape);
    if (it != cand.end()) d.matched += std::min(count, it->second);
  }
  d.score = static_cast<double>(d.matched) / static_cast<double>(d.reference_subtrees);
  return d;
}

double ast_similarity(std::string_view candidate, std::string_view reference) {
  return ast_similarity_detail(candidate, reference).score;
}

}  // namespace coderag
