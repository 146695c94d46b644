#include "coderag/prompt.hpp"

#include <algorithm>

#include "coderag/errors.hpp"
#include "coderag/index_store.hpp"
#include "coderag/utf8.hpp"

namespace coderag {

std::string_view to_string(TemplateId id) {
  switch (id) {
    case TemplateId::MsgDef: return "msg-def";
    case TemplateId::ClassDef: return "class-def";
    case TemplateId::FuncDec: return "func-dec";
    case TemplateId::FuncDef: return "func-def";
    case TemplateId::Similar: return "similar";
  }
  return "?";
}

std::optional<TemplateId> parse_template_id(std::string_view text) {
  for (TemplateId id : {TemplateId::MsgDef, TemplateId::ClassDef, TemplateId::FuncDec, TemplateId::FuncDef,
                        TemplateId::Similar}) {
    if (to_string(id) == text) return id;
  }
  return std::nullopt;
}

std::string_view to_string(Language lang) { return lang == Language::Zh ? "zh" : "en"; }

TemplateId template_for(UnitKind kind) {
  switch (kind) {
    case UnitKind::MsgDef: return TemplateId::MsgDef;
    case UnitKind::ClassDef: return TemplateId::ClassDef;
    case UnitKind::FuncDec: return TemplateId::FuncDec;
    case UnitKind::FuncDef: return TemplateId::FuncDef;
  }
  return TemplateId::FuncDef;
}

Language parse_language(std::string_view text) {
  if (text == "zh") return Language::Zh;
  if (text == "en") return Language::En;
  throw Error(ErrorCode::Config, "unknown template language '" + std::string(text) + "'");
}

namespace {

struct Wording {
  const char* intro;
  const char* outro;
};

Wording wording(TemplateId id, Language lang) {
  const bool zh = lang == Language::Zh;
  switch (id) {
    case TemplateId::MsgDef:
      return zh ? Wording{"以下是当前代码用到的 protobuf 消息定义。", "请参考以上定义，补全当前代码。"}
                : Wording{"The protobuf message definitions below are used by the current code.",
                          "Complete the current code using the definitions above."};
    case TemplateId::ClassDef:
      return zh ? Wording{"以下是当前代码用到的类定义。", "请参考以上定义，补全当前代码。"}
                : Wording{"The class definitions below are used by the current code.",
                          "Complete the current code using the definitions above."};
    case TemplateId::FuncDec:
      return zh ? Wording{"以下是当前代码用到的函数声明。", "请参考以上声明，补全当前代码。"}
                : Wording{"The function declarations below are used by the current code.",
                          "Complete the current code using the declarations above."};
    case TemplateId::FuncDef:
      return zh ? Wording{"以下是当前代码用到的函数定义。", "请参考以上定义，补全当前代码。"}
                : Wording{"The function definitions below are used by the current code.",
                          "Complete the current code using the definitions above."};
    case TemplateId::Similar:
      return zh ? Wording{"以下是与当前代码相似的代码片段。", "请参考以上相似代码片段，补全当前代码。"}
                : Wording{"The code snippets below are similar to the current code.",
                          "Complete the current code, following the similar code snippets above."};
  }
  return {"", ""};
}

std::string placeholder(const std::string& name) { return "{" + name + "}"; }

std::size_t count_occurrences(std::string_view hay, std::string_view needle) {
  std::size_t n = 0;
  for (auto pos = hay.find(needle); pos != std::string_view::npos; pos = hay.find(needle, pos + needle.size())) ++n;
  return n;
}

std::vector<std::string_view> split_lines(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t begin = 0;
  while (begin <= text.size()) {
    auto end = text.find('\n', begin);
    if (end == std::string_view::npos) end = text.size();
    lines.push_back(text.substr(begin, end - begin));
    begin = end + 1;
  }
  return lines;
}

std::string substitute(const std::string& body, const std::string& key, std::string_view value) {
  std::string out = body;
  const std::string ph = placeholder(key);
  const auto pos = out.find(ph);
  if (pos != std::string::npos) out.replace(pos, ph.size(), value);
  return out;
}

std::string render_items(const std::vector<PromptItem>& items, std::size_t count) {
  std::string out;
  for (std::size_t i = 0; i < count; ++i) {
    if (!out.empty()) out += '\n';
    out += item_open_marker(i + 1);
    if (!items[i].label.empty()) out += " " + items[i].label;
    out += '\n';
    out += items[i].text;
    if (!items[i].text.empty() && items[i].text.back() != '\n') out += '\n';
    out += item_close_marker(i + 1);
  }
  return out;
}

const TokenCounter& counter_of(const PromptOptions& options) {
  return options.counter ? *options.counter : default_token_counter();
}

// Keeps the end of `code` (nearest the completion point), cutting whole
// leading lines first and leading characters of the first kept line last.
template <typename Render>
std::optional<std::string> fit_context(std::string_view code, std::size_t budget, const TokenCounter& counter,
                                       const Render& render) {
  std::vector<std::size_t> starts{0};
  for (std::size_t i = 0; i < code.size(); ++i) {
    if (code[i] == '\n' && i + 1 < code.size()) starts.push_back(i + 1);
  }
  for (std::size_t s : starts) {
    std::string text = render(code.substr(s));
    if (counter.count(text) <= budget) return text;
  }
  std::string_view last = code.substr(starts.back());
  for (std::size_t i = 0; i < last.size();) {
    i += utf8_sequence_length(static_cast<unsigned char>(last[i]));
    std::string text = render(last.substr(std::min(i, last.size())));
    if (counter.count(text) <= budget) return text;
  }
  return std::nullopt;
}

PromptBundle assemble(const PromptTemplate& tmpl, const std::string& section_key,
                      const std::vector<PromptItem>& items, std::string_view current_code,
                      const PromptOptions& options) {
  if (auto problem = tmpl.check()) throw Error(ErrorCode::TemplateMismatch, *problem);
  if (options.budget == 0) throw Error(ErrorCode::Config, "token budget must be at least 1");
  if (items.empty()) return build_base_prompt(current_code, tmpl.language, options);

  const TokenCounter& counter = counter_of(options);
  PromptBundle bundle;
  bundle.template_id = tmpl.id;
  bundle.language = tmpl.language;
  bundle.budget = options.budget;
  auto render = [&](std::size_t n, std::string_view code) {
    return substitute(substitute(tmpl.body, section_key, render_items(items, n)), "current_code", code);
  };
  for (std::size_t n = items.size(); n >= 1; --n) {
    std::string text = render(n, current_code);
    const std::size_t tokens = counter.count(text);
    if (tokens <= options.budget) {
      bundle.text = std::move(text);
      bundle.token_count = tokens;
      for (std::size_t i = 0; i < n; ++i) bundle.included.push_back(items[i].doc);
      bundle.dropped = items.size() - n;
      bundle.truncated = bundle.dropped > 0;
      return bundle;
    }
  }
  PromptBundle base = build_base_prompt(current_code, tmpl.language, options);
  base.dropped = items.size();
  base.truncated = true;
  return base;
}

}  // namespace

PromptTemplate PromptTemplate::builtin(TemplateId id, Language language) {
  const Wording w = wording(id, language);
  const std::string section = id == TemplateId::Similar ? "{snippets}" : "{knowledge}";
  PromptTemplate t;
  t.id = id;
  t.language = language;
  t.body = std::string("// ") + w.intro + "\n" + section + "\n// " + w.outro + "\n{current_code}";
  return t;
}

PromptTemplate PromptTemplate::from_file(TemplateId id, Language language, const std::filesystem::path& path) {
  PromptTemplate t;
  t.id = id;
  t.language = language;
  t.body = read_file(path);
  while (!t.body.empty() && (t.body.back() == '\n' || t.body.back() == '\r')) t.body.pop_back();
  if (auto problem = t.check()) {
    throw Error(ErrorCode::TemplateMismatch, path.string() + ": " + *problem);
  }
  return t;
}

std::vector<std::string> PromptTemplate::required_placeholders() const {
  return {id == TemplateId::Similar ? "snippets" : "knowledge", "current_code"};
}

std::optional<std::string> PromptTemplate::check() const {
  const auto required = required_placeholders();
  for (const auto& name : required) {
    const auto n = count_occurrences(body, placeholder(name));
    if (n != 1) {
      return std::string(to_string(id)) + " template needs {" + name + "} exactly once, found " + std::to_string(n);
    }
  }
  const std::string other = id == TemplateId::Similar ? "{knowledge}" : "{snippets}";
  if (body.find(other) != std::string::npos) {
    return std::string(to_string(id)) + " template must not use " + other;
  }
  for (auto line : split_lines(body)) {
    while (!line.empty() && (line.back() == '\r' || line.back() == ' ' || line.back() == '\t')) line.remove_suffix(1);
    if (line.empty()) continue;
    const bool is_placeholder = std::any_of(required.begin(), required.end(),
                                            [&](const std::string& n) { return line == placeholder(n); });
    if (!is_placeholder && !line.starts_with("//")) {
      return "instruction line is not a // comment: " + std::string(line);
    }
  }
  return std::nullopt;
}

std::string render_base_prompt(std::string_view current_code, Language language) {
  const char* line = language == Language::Zh ? "// 请补全以下代码。\n" : "// Complete the following code.\n";
  return std::string(line) + std::string(current_code);
}

PromptItem prompt_item(DocId doc, const CodeUnit& unit) {
  return PromptItem{doc, std::string(to_string(unit.kind)) + " " + unit.qualified_name, unit.text};
}

std::string item_open_marker(std::size_t n) { return "// [#" + std::to_string(n) + "]"; }
std::string item_close_marker(std::size_t n) { return "// [/#" + std::to_string(n) + "]"; }

std::optional<std::string> find_prompt_item(std::string_view prompt, std::size_t n) {
  const std::string open = item_open_marker(n);
  const std::string close = "\n" + item_close_marker(n);
  std::size_t pos = 0;
  while (true) {
    pos = prompt.find(open, pos);
    if (pos == std::string_view::npos) return std::nullopt;
    const bool line_start = pos == 0 || prompt[pos - 1] == '\n';
    const std::size_t after = pos + open.size();
    const bool marker_end = after == prompt.size() || prompt[after] == ' ' || prompt[after] == '\n';
    if (line_start && marker_end) break;
    pos = after;
  }
  const auto body = prompt.find('\n', pos);
  if (body == std::string_view::npos) return std::nullopt;
  const auto end = prompt.find(close, body);
  if (end == std::string_view::npos) return std::nullopt;
  if (end < body + 1) return std::string();
  return std::string(prompt.substr(body + 1, end - body - 1));
}

PromptBundle build_base_prompt(std::string_view current_code, Language language, const PromptOptions& options) {
  if (options.budget == 0) throw Error(ErrorCode::Config, "token budget must be at least 1");
  const TokenCounter& counter = counter_of(options);
  PromptBundle bundle;
  bundle.template_id = TemplateId::Similar;
  bundle.language = language;
  bundle.budget = options.budget;
  bundle.base = true;
  bundle.text = render_base_prompt(current_code, language);
  bundle.token_count = counter.count(bundle.text);
  if (bundle.token_count <= options.budget) return bundle;
  auto fitted = fit_context(current_code, options.budget, counter,
                            [&](std::string_view code) { return render_base_prompt(code, language); });
  if (!fitted) {
    throw Error(ErrorCode::Config, "token budget " + std::to_string(options.budget) +
                                       " cannot hold the prompt instructions");
  }
  bundle.text = std::move(*fitted);
  bundle.token_count = counter.count(bundle.text);
  bundle.context_truncated = true;
  return bundle;
}

PromptBundle build_identifier_prompt(UnitKind kind, const std::vector<PromptItem>& knowledge,
                                     std::string_view current_code, const PromptTemplate& tmpl,
                                     const PromptOptions& options) {
  if (tmpl.id != template_for(kind)) {
    throw Error(ErrorCode::TemplateMismatch, std::string(to_string(tmpl.id)) + " template used for " +
                                                 std::string(to_string(kind)) + " knowledge");
  }
  PromptBundle b = assemble(tmpl, "knowledge", knowledge, current_code, options);
  if (b.base) b.template_id = tmpl.id;
  return b;
}

PromptBundle build_similarity_prompt(const std::vector<ScoredSnippet>& snippets, const Corpus& corpus,
                                     std::string_view current_code, const PromptTemplate& tmpl,
                                     const PromptOptions& options) {
  if (tmpl.id != TemplateId::Similar) {
    throw Error(ErrorCode::TemplateMismatch, std::string(to_string(tmpl.id)) + " template used for snippets");
  }
  std::vector<ScoredSnippet> ranked = snippets;
  std::stable_sort(ranked.begin(), ranked.end(),
                   [](const ScoredSnippet& a, const ScoredSnippet& b) { return a.rank < b.rank; });
  std::vector<PromptItem> items;
  for (const auto& s : ranked) {
    if (items.size() >= options.max_snippets) break;
    items.push_back(prompt_item(s.doc, corpus.at(s.doc)));
  }
  PromptBundle b = assemble(tmpl, "snippets", items, current_code, options);
  b.dropped += ranked.size() - items.size();
  b.truncated = b.dropped > 0;
  return b;
}

}  // namespace coderag
