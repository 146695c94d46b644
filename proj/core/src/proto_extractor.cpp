#include "coderag/proto_extractor.hpp"

#include <algorithm>
#include <tuple>

#include "coderag/errors.hpp"
#include "coderag/lexer.hpp"

namespace coderag {

namespace {

struct Frame {
  bool is_message = false;
  std::string name;
  std::size_t begin = 0;  // offset of the `message` keyword
  int start_line = 0;
};

std::string qualified(const std::vector<Frame>& stack) {
  std::string out;
  for (const auto& f : stack) {
    if (!f.is_message) continue;
    if (!out.empty()) out += '.';
    out += f.name;
  }
  return out;
}

}  // namespace

ProtoMessages extract_proto_messages(const SourceFile& file, const std::string& project) {
  if (file.kind != FileKind::Proto) {
    throw Error(ErrorCode::UnsupportedFileType,
                "Unsupported file type! " + file.path + " is not a proto file");
  }
  lex::LexOptions opts;
  opts.keep_comments = false;
  opts.directives_as_units = false;
  const auto toks = lex::lex(file.text, opts);

  ProtoMessages out;
  std::vector<Frame> stack;
  for (std::size_t i = 0; i < toks.size(); ++i) {
    const auto& t = toks[i];
    if (t.is_identifier("message") && i + 2 < toks.size() &&
        toks[i + 1].kind == lex::TokenKind::Identifier && toks[i + 2].is("{")) {
      stack.push_back(Frame{true, std::string(toks[i + 1].text), t.offset, t.line});
      i += 2;
      continue;
    }
    if (t.is("{")) {
      stack.push_back(Frame{false, {}, t.offset, t.line});
      continue;
    }
    if (t.is("}")) {
      if (stack.empty()) {
        out.parse_error = "unbalanced '}' at line " + std::to_string(t.line);
        break;
      }
      if (stack.back().is_message) {
        const Frame& f = stack.back();
        CodeUnit unit;
        unit.kind = UnitKind::MsgDef;
        unit.identifier = f.name;
        unit.qualified_name = qualified(stack);
        unit.text = file.text.substr(f.begin, t.end_offset() - f.begin);
        unit.origin = Origin{file.path, f.start_line, t.end_line, project};
        out.messages.push_back(std::move(unit));
      }
      stack.pop_back();
    }
  }
  if (!out.parse_error && !stack.empty()) {
    out.parse_error = "unbalanced '{' opened at line " + std::to_string(stack.back().start_line);
  }
  std::stable_sort(out.messages.begin(), out.messages.end(), [](const auto& a, const auto& b) {
    return std::tie(a.origin.start_line, a.qualified_name) <
           std::tie(b.origin.start_line, b.qualified_name);
  });
  return out;
}

}  // namespace coderag
