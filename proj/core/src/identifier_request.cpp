#include "coderag/identifier_request.hpp"

#include <cctype>

#include <json.hpp>

#include "coderag/completion.hpp"
#include "coderag/errors.hpp"
#include "coderag/lexer.hpp"

namespace coderag {

std::string identifier_request_prompt(std::string_view current_code) {
  std::string out =
      "// List the identifiers used but not defined in the code below whose definitions are needed to\n"
      "// complete it. Answer with one JSON object only:\n"
      "// {\"messages\": [protobuf message names], \"functions\": [function names], \"classes\": [class names]}\n";
  out += current_code;
  return out;
}

namespace {

void make_disjoint(IdentifierRequest& r) {
  for (const auto& m : r.messages) {
    r.classes.erase(m);
    r.functions.erase(m);
  }
  for (const auto& c : r.classes) r.functions.erase(c);
}

bool valid_name(const std::string& s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == ':' || c == '.')) return false;
  }
  return true;
}

}  // namespace

bool parse_identifier_reply(std::string_view reply, IdentifierRequest& out) {
  std::string text = extract_code(reply);
  const auto open = text.find('{');
  const auto close = text.rfind('}');
  if (open == std::string::npos || close == std::string::npos || close < open) return false;
  try {
    const auto doc = nlohmann::json::parse(text.substr(open, close - open + 1));
    if (!doc.is_object()) return false;
    IdentifierRequest r;
    for (const auto& [key, target] : {std::pair{"messages", &r.messages}, std::pair{"functions", &r.functions},
                                      std::pair{"classes", &r.classes}}) {
      if (!doc.contains(key)) return false;
      const auto& list = doc.at(key);
      if (!list.is_array()) return false;
      for (const auto& item : list) {
        if (!item.is_string()) return false;
        std::string name = item.get<std::string>();
        if (!valid_name(name)) return false;
        target->insert(std::move(name));
      }
    }
    make_disjoint(r);
    out = std::move(r);
    return true;
  } catch (const nlohmann::json::exception&) {
    return false;
  }
}

namespace {

bool all_caps(std::string_view s) {
  bool has_letter = false;
  for (char c : s) {
    if (std::islower(static_cast<unsigned char>(c))) return false;
    if (std::isupper(static_cast<unsigned char>(c))) has_letter = true;
  }
  return has_letter && s.size() > 1;
}

bool is_name(const lex::Token& t) { return t.kind == lex::TokenKind::Identifier && !lex::is_cpp_keyword(t.text); }

}  // namespace

IdentifierRequest static_identifier_request(std::string_view current_code, const IdentifierIndex* index) {
  lex::LexOptions opts;
  opts.keep_comments = false;
  std::vector<lex::Token> toks;
  for (const auto& t : lex::lex(current_code, opts)) {
    if (t.kind != lex::TokenKind::Directive) toks.push_back(t);
  }
  const auto n = toks.size();
  auto at = [&](std::size_t i) -> const lex::Token* { return i < n ? &toks[i] : nullptr; };

  std::set<std::string> defined;
  std::set<std::string> calls;
  std::set<std::string> types;

  for (std::size_t i = 0; i < n; ++i) {
    const auto& t = toks[i];
    if (!is_name(t)) continue;
    const std::string name(t.text);
    const lex::Token* prev = i > 0 ? &toks[i - 1] : nullptr;
    const lex::Token* next = at(i + 1);
    if (prev && (prev->is_identifier("class") || prev->is_identifier("struct") || prev->is_identifier("enum") ||
                 prev->is_identifier("union") || prev->is_identifier("namespace") || prev->is_identifier("using") ||
                 prev->is_identifier("typedef"))) {
      defined.insert(name);
      continue;
    }
    const bool member = prev && (prev->is(".") || prev->is("->"));
    if (next && next->is("(")) {
      // A name directly after a type-like token declares a function;
      // otherwise it is a call.
      const bool declarator = prev && (is_name(*prev) || lex::is_type_keyword(prev->text) || prev->is("*") ||
                                       prev->is("&") || prev->is(">") || prev->is("~"));
      if (declarator) {
        defined.insert(name);
        if (prev && is_name(*prev) && std::isupper(static_cast<unsigned char>(prev->text[0]))) {
          types.emplace(prev->text);
        }
      } else if (!member) {
        calls.insert(name);
      }
      continue;
    }
    if (member) continue;
    // `Type name`, `Type& name`, `Type* name`, `Type<...>`, `Type::`
    const bool capital = std::isupper(static_cast<unsigned char>(name[0])) && !all_caps(name);
    if (!capital) continue;
    const lex::Token* after = next;
    if (after && (after->is("&") || after->is("*") || after->is("&&"))) after = at(i + 2);
    const bool declares = after && is_name(*after);
    const bool scoped_or_template = next && (next->is("::") || next->is("<"));
    const bool in_template_args = prev && (prev->is("<") || prev->is(",")) && next && (next->is(">") || next->is(","));
    if (declares || scoped_or_template || in_template_args) types.insert(name);
  }

  // Parameters and locals introduced by `Type name` are not requests.
  for (std::size_t i = 0; i + 1 < n; ++i) {
    if ((is_name(toks[i]) || lex::is_type_keyword(toks[i].text)) && is_name(toks[i + 1])) {
      const lex::Token* after = at(i + 2);
      if (after && !after->is("(")) defined.emplace(toks[i + 1].text);
    }
  }

  IdentifierRequest r;
  r.fallback = true;
  for (const auto& c : calls) {
    if (!defined.contains(c) && !types.contains(c)) r.functions.insert(c);
  }
  for (const auto& t : types) {
    if (defined.contains(t)) continue;
    const bool is_message = index != nullptr && !index->lookup_ids(t, UnitKind::MsgDef).empty();
    (is_message ? r.messages : r.classes).insert(t);
  }
  make_disjoint(r);
  return r;
}

IdentifierRequest need_to_lookup(std::string_view current_code, ChatClient* client, const IdentifierIndex* index) {
  std::vector<std::string> warnings;
  if (client != nullptr) {
    ChatRequest request;
    request.content = identifier_request_prompt(current_code);
    request.request_id = "need-to-lookup";
    for (int attempt = 0; attempt < 2; ++attempt) {
      try {
        IdentifierRequest r;
        if (parse_identifier_reply(client->chat(request).content, r)) return r;
        warnings.push_back("malformed identifier reply (attempt " + std::to_string(attempt + 1) + ")");
      } catch (const Error& e) {
        warnings.push_back(std::string("identifier model unavailable: ") + e.what());
        break;
      }
    }
  } else {
    warnings.push_back("no identifier model configured");
  }
  IdentifierRequest r = static_identifier_request(current_code, index);
  r.warnings = std::move(warnings);
  return r;
}

}  // namespace coderag
