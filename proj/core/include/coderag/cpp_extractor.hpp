#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "coderag/source_file.hpp"

namespace coderag {

/// A class or function node found in a C++ file, with its byte span.
struct CppElement {
  std::string identifier;
  std::string qualified_name;
  std::string text;  // raw source slice, not yet normalized
  std::size_t begin = 0;
  std::size_t end = 0;
  int start_line = 0;
  int end_line = 0;
};

/// A `#define` as written.
struct RawMacro {
  std::string name;
  bool function_like = false;
  std::vector<std::string> params;  // "..." kept verbatim for variadics
  std::string body;                 // replacement list, splices joined with '\n'
  std::string text;                 // the full directive
  std::size_t begin = 0;
  int start_line = 0;
  int end_line = 0;
};

struct CppElements {
  std::vector<CppElement> class_defs;
  std::vector<CppElement> func_defs;
  std::vector<CppElement> func_decs;
  std::vector<RawMacro> macros;
  // Set when the structure could not be recovered past some point; the
  // element lists hold everything found before it.
  std::optional<std::string> parse_error;
};

/// Structural parse of a C++ source or header: namespaces, classes,
/// function definitions and declarations, and macros. Member functions
/// defined inside a class body are reported both within the class text
/// and as standalone definitions. Conditional-compilation branches are
/// all taken as written.
///
/// Throws Error(UnsupportedFileType) for proto/other files.
CppElements extract_cpp_elements(const SourceFile& file);

/// Parses a single `#define` directive. Returns nullopt for anything else.
std::optional<RawMacro> parse_define(std::string_view directive);

}  // namespace coderag
