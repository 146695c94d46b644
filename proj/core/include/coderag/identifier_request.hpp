#pragma once

#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "coderag/chat_client.hpp"
#include "coderag/identifier_index.hpp"

namespace coderag {

/// Names the current code needs definitions for. An identifier appears
/// in at most one set.
struct IdentifierRequest {
  std::set<std::string> messages;
  std::set<std::string> functions;
  std::set<std::string> classes;
  bool fallback = false;          // produced by the static heuristic
  std::vector<std::string> warnings;

  bool empty() const { return messages.empty() && functions.empty() && classes.empty(); }
};

/// Prompt asking a model for {"messages": [], "functions": [], "classes": []}.
std::string identifier_request_prompt(std::string_view current_code);

/// Parses a model reply (bare or fenced JSON). Returns false when the
/// structure is invalid.
bool parse_identifier_reply(std::string_view reply, IdentifierRequest& out);

/// Lexical heuristic: called-but-undefined names are functions; unresolved
/// capitalized type names are classes, or messages when `index` holds a
/// msg-def of that name.
IdentifierRequest static_identifier_request(std::string_view current_code, const IdentifierIndex* index = nullptr);

/// Asks `client` (if any), retrying once on a malformed reply, and falls
/// back to the static heuristic on a second failure or an unavailable
/// model. Never throws for model failures.
IdentifierRequest need_to_lookup(std::string_view current_code, ChatClient* client,
                                 const IdentifierIndex* index = nullptr);

}  // namespace coderag
