#pragma once

#include <optional>
#include <string>
#include <vector>

#include "coderag/code_unit.hpp"
#include "coderag/source_file.hpp"

namespace coderag {

struct ProtoMessages {
  std::vector<CodeUnit> messages;  // outer before inner, in source order
  std::optional<std::string> parse_error;
};

/// Extracts every `message` block, nested ones included with dot-joined
/// qualified names ("Outer.Inner"). The outer block's text contains its
/// nested blocks. Unbalanced braces stop extraction and set parse_error;
/// messages completed before that point are kept.
///
/// Throws Error(UnsupportedFileType) for non-proto files.
ProtoMessages extract_proto_messages(const SourceFile& file, const std::string& project = {});

}  // namespace coderag
