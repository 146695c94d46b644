#include "coderag/dataflow.hpp"

#include <array>
#include <vector>

#include "coderag/lexer.hpp"

namespace coderag {

namespace {

using lex::Token;
using lex::TokenKind;

constexpr std::array<std::string_view, 11> kAssignOps = {"=",  "+=", "-=", "*=",  "/=", "%=",
                                                         "&=", "|=", "^=", "<<=", ">>="};

bool is_assign(const Token& t) {
  for (auto op : kAssignOps) {
    if (t.is(op)) return true;
  }
  return false;
}

bool is_name(const Token& t) { return t.kind == TokenKind::Identifier && !lex::is_cpp_keyword(t.text); }

class Flow {
 public:
  explicit Flow(std::vector<Token> toks) : toks_(std::move(toks)) {}

  std::map<std::string, std::size_t> run() {
    int depth = 0;
    for (std::size_t i = 0; i < toks_.size(); ++i) {
      const Token& t = toks_[i];
      if (t.is("{")) ++depth;
      if (t.is("}")) --depth;
      if (!is_variable(i)) continue;
      const std::string name(t.text);
      const Token* next = at(i + 1);
      const bool declared = declares(i);
      if (declared && next && next->is("(")) {
        if (depth <= 0) continue;  // function declarator
        const std::string v = define(name);
        add_sources(v, i + 2, ")");
        continue;
      }
      if (declared || (next && is_assign(*next))) {
        const bool compound = next && is_assign(*next) && !next->is("=");
        const bool known_before = vars_.contains(name);
        const std::string v = define(name);
        if (compound && known_before) edge(v, "computedFrom", v);
        if (next && is_assign(*next)) add_sources(v, i + 2, "");
        else if (next && next->is("{")) add_sources(v, i + 2, "}");
        continue;
      }
      const Token* prev = i > 0 ? &toks_[i - 1] : nullptr;
      const bool incdec = (next && (next->is("++") || next->is("--"))) || (prev && (prev->is("++") || prev->is("--")));
      const auto known = vars_.find(name);
      if (known == vars_.end()) continue;
      edge(known->second, "comesFrom", known->second);
      if (incdec) edge(known->second, "computedFrom", known->second);
    }
    return edges_;
  }

 private:
  const Token* at(std::size_t i) const { return i < toks_.size() ? &toks_[i] : nullptr; }

  // A name that is not a function, member, scope, or type in a declaration.
  bool is_variable(std::size_t i) const {
    const Token& t = toks_[i];
    if (!is_name(t)) return false;
    const Token* prev = i > 0 ? &toks_[i - 1] : nullptr;
    const Token* next = at(i + 1);
    if (prev && (prev->is(".") || prev->is("->") || prev->is("::"))) return false;
    if (next && next->is("::")) return false;
    if (next && next->is("(") && !declares(i)) return false;
    if (next && is_name(*next)) return false;  // type of a declaration
    if (next && (next->is("*") || next->is("&") || next->is("&&"))) {
      const Token* after = at(i + 2);
      if (after && is_name(*after) && (!prev || !is_name(*prev))) {
        // `T* p` / `T& r`: treat the leading name as a type when the
        // statement starts here.
        if (!prev || prev->is(";") || prev->is("{") || prev->is("}") || prev->is("(") || prev->is(",")) return false;
      }
    }
    if (next && next->is("<") ) {
      // `vector<int> v`: a template type.
      int depth = 0;
      for (std::size_t j = i + 1; j < toks_.size(); ++j) {
        if (toks_[j].is("<")) ++depth;
        else if (toks_[j].is(">")) {
          if (--depth == 0) return !(j + 1 < toks_.size() && is_name(toks_[j + 1]));
        } else if (toks_[j].is(";") || toks_[j].is("{") || toks_[j].is("}")) break;
      }
    }
    return true;
  }

  // The name at `i` is introduced by a declaration: preceded by a type.
  bool declares(std::size_t i) const {
    std::size_t j = i;
    while (j > 0) {
      const Token& p = toks_[j - 1];
      if (p.is("*") || p.is("&") || p.is("&&") || p.is_identifier("const")) {
        --j;
        continue;
      }
      break;
    }
    if (j == 0) return false;
    const Token& p = toks_[j - 1];
    if (p.kind == TokenKind::Identifier) {
      if (lex::is_type_keyword(p.text)) return true;
      if (!is_name(p)) return false;
      // `a * b`: only a declaration when the name before is not itself
      // an operand, i.e. it starts a statement or parameter.
      if (j < i) {
        const Token* before = j >= 2 ? &toks_[j - 2] : nullptr;
        return !before || before->is(";") || before->is("{") || before->is("}") || before->is("(") ||
               before->is(",") || before->is("::") || before->is("<") || before->is(">") || before->is(":") ||
               before->is_identifier("const") || lex::is_type_keyword(before->text);
      }
      return true;
    }
    return p.is(">");
  }

  std::string define(const std::string& name) {
    auto it = vars_.find(name);
    if (it == vars_.end()) it = vars_.emplace(name, "v" + std::to_string(vars_.size())).first;
    return it->second;
  }

  // Reads defined names from `start` to the statement end (`;` or `,` at
  // depth 0) or to the closing `close` token.
  void add_sources(const std::string& target, std::size_t start, std::string_view close) {
    int depth = 0;
    for (std::size_t j = start; j < toks_.size(); ++j) {
      const Token& t = toks_[j];
      if (t.is("(") || t.is("[") || t.is("{")) ++depth;
      else if (t.is(")") || t.is("]") || t.is("}")) {
        if (depth == 0) return;
        --depth;
      } else if (depth == 0 && close.empty() && (t.is(";") || t.is(","))) {
        return;
      } else if (t.is(";")) {
        return;
      }
      if (!is_name(t)) continue;
      const Token* prev = j > 0 ? &toks_[j - 1] : nullptr;
      const Token* next = at(j + 1);
      if (prev && (prev->is(".") || prev->is("->") || prev->is("::"))) continue;
      if (next && (next->is("(") || next->is("::"))) continue;
      const auto known = vars_.find(std::string(t.text));
      if (known != vars_.end()) edge(target, "computedFrom", known->second);
    }
  }

  void edge(const std::string& a, std::string_view rel, const std::string& b) {
    ++edges_[a + " " + std::string(rel) + " " + b];
  }

  std::vector<Token> toks_;
  std::map<std::string, std::string> vars_;
  std::map<std::string, std::size_t> edges_;
};

std::size_t total(const std::map<std::string, std::size_t>& m) {
  std::size_t n = 0;
  for (const auto& [k, v] : m) n += v;
  return n;
}

}  // namespace

std::map<std::string, std::size_t> dataflow_edges(std::string_view code) {
  lex::LexOptions opts;
  opts.keep_comments = false;
  std::vector<Token> toks;
  for (const auto& t : lex::lex(code, opts)) {
    if (t.kind != TokenKind::Directive) toks.push_back(t);
  }
  return Flow(std::move(toks)).run();
}

DataflowDetail dataflow_similarity_detail(std::string_view candidate, std::string_view reference) {
  DataflowDetail d;
  const auto ref = dataflow_edges(reference);
  const auto cand = dataflow_edges(candidate);
  d.reference_edges = total(ref);
  if (d.reference_edges == 0) {
    d.flagged = true;
    d.score = cand.empty() ? 1.0 : 0.0;
    return d;
  }
  for (const auto& [e, count] : ref) {
    const auto it = cand.find(e);
    if (it != cand.end()) d.matched += std::min(count, it->second);
  }
  d.score = static_cast<double>(d.matched) / static_cast<double>(d.reference_edges);
  return d;
}

double dataflow_similarity(std::string_view candidate, std::string_view reference) {
  return dataflow_similarity_detail(candidate, reference).score;
}

}  // namespace coderag
