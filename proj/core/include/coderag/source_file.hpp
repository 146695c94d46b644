#pragma once

#include <cstddef>
#include <string>
#include <string_view>

namespace coderag {

enum class FileKind { Cpp, Header, Proto, Other };

std::string_view to_string(FileKind kind);

/// Extension-only classification: .cpp/.cc/.cxx -> Cpp, .h/.hpp/.hh ->
/// Header, .proto -> Proto, anything else -> Other.
FileKind classify_path(std::string_view path);

/// True for protoc outputs (`*.pb.cc`, `*.pb.h`).
bool is_generated_from_proto(std::string_view path);

struct SourceFile {
  std::string path;  // repo-relative, '/'-separated
  FileKind kind = FileKind::Other;
  std::string text;  // valid UTF-8
  std::size_t replaced_bytes = 0;

  /// Builds a SourceFile from raw bytes, classifying by extension and
  /// decoding lossily.
  static SourceFile from_bytes(std::string path, std::string_view bytes);
};

}  // namespace coderag
