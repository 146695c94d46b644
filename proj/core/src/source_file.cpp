#include "coderag/source_file.hpp"

#include "coderag/utf8.hpp"

namespace coderag {

std::string_view to_string(FileKind kind) {
  switch (kind) {
    case FileKind::Cpp: return "cpp";
    case FileKind::Header: return "header";
    case FileKind::Proto: return "proto";
    case FileKind::Other: return "other";
  }
  return "other";
}

namespace {

bool ends_with(std::string_view s, std::string_view suffix) {
  return s.size() >= suffix.size() && s.substr(s.size() - suffix.size()) == suffix;
}

}  // namespace

FileKind classify_path(std::string_view path) {
  const auto slash = path.find_last_of('/');
  const std::string_view name = slash == std::string_view::npos ? path : path.substr(slash + 1);
  const auto dot = name.find_last_of('.');
  if (dot == std::string_view::npos) return FileKind::Other;
  const std::string_view ext = name.substr(dot);
  if (ext == ".cpp" || ext == ".cc" || ext == ".cxx") return FileKind::Cpp;
  if (ext == ".h" || ext == ".hpp" || ext == ".hh") return FileKind::Header;
  if (ext == ".proto") return FileKind::Proto;
  return FileKind::Other;
}

bool is_generated_from_proto(std::string_view path) {
  return ends_with(path, ".pb.cc") || ends_with(path, ".pb.h");
}

SourceFile SourceFile::from_bytes(std::string path, std::string_view bytes) {
  auto decoded = decode_utf8_lossy(bytes);
  SourceFile file;
  file.kind = classify_path(path);
  file.path = std::move(path);
  file.text = std::move(decoded.text);
  file.replaced_bytes = decoded.replaced_bytes;
  return file;
}

}  // namespace coderag
