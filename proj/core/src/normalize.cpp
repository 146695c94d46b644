#include "coderag/normalize.hpp"

#include "coderag/lexer.hpp"

namespace coderag {

namespace {

struct Line {
  std::string text;
  bool touched_by_comment = false;
};

bool is_word_char(char c) {
  const auto u = static_cast<unsigned char>(c);
  return (u >= 'a' && u <= 'z') || (u >= 'A' && u <= 'Z') || (u >= '0' && u <= '9') || u == '_' ||
         u >= 0x80;
}

void append_source(std::vector<Line>& lines, std::string_view chunk) {
  for (char c : chunk) {
    if (c == '\n') {
      lines.emplace_back();
    } else {
      lines.back().text.push_back(c);
    }
  }
}

}  // namespace

std::string normalize_text(std::string_view text) {
  lex::LexOptions opts;
  opts.directives_as_units = false;
  const auto tokens = lex::lex(text, opts);

  std::vector<Line> lines(1);
  std::size_t cursor = 0;
  for (const auto& tok : tokens) {
    if (tok.kind != lex::TokenKind::Comment) continue;
    append_source(lines, text.substr(cursor, tok.offset - cursor));
    lines.back().touched_by_comment = true;
    for (char c : tok.text) {
      if (c == '\n') {
        lines.emplace_back();
        lines.back().touched_by_comment = true;
      }
    }
    cursor = tok.end_offset();
    // Keep adjacent words apart: a/**/b must not become ab.
    const std::string& current = lines.back().text;
    if (!current.empty() && is_word_char(current.back()) && cursor < text.size() &&
        is_word_char(text[cursor])) {
      lines.back().text.push_back(' ');
    }
  }
  append_source(lines, text.substr(cursor));

  std::string out;
  bool pending_blank = false;
  bool emitted_any = false;
  for (auto& line : lines) {
    std::string& s = line.text;
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r' ||
                          s.back() == '\f' || s.back() == '\v')) {
      s.pop_back();
    }
    const bool blank = s.find_first_not_of(" \t\r\f\v") == std::string::npos;
    if (blank) {
      if (!line.touched_by_comment && emitted_any) pending_blank = true;
      continue;
    }
    if (emitted_any) {
      out.push_back('\n');
      if (pending_blank) out.push_back('\n');
    }
    pending_blank = false;
    out += s;
    emitted_any = true;
  }
  return out;
}

std::vector<CodeUnit> normalize_code(std::vector<CodeUnit> units) {
  std::vector<CodeUnit> out;
  out.reserve(units.size());
  for (auto& unit : units) {
    unit.text = normalize_text(unit.text);
    if (!unit.text.empty()) out.push_back(std::move(unit));
  }
  return out;
}

}  // namespace coderag
