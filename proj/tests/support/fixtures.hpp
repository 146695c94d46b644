#pragma once

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <string>
#include <vector>

#include "coderag/corpus.hpp"

namespace testing_support {

inline std::filesystem::path source_dir() { return CODERAG_SOURCE_DIR; }
inline std::filesystem::path fixture_dir() { return CODERAG_FIXTURE_DIR; }

inline std::vector<std::string> read_lines(const std::filesystem::path& path) {
  std::ifstream in(path);
  std::vector<std::string> out;
  for (std::string line; std::getline(in, line);) {
    if (!line.empty()) out.push_back(line);
  }
  return out;
}

/// Sorted "kind qualified_name" lines of a corpus.
inline std::vector<std::string> manifest_of(const coderag::Corpus& corpus) {
  std::vector<std::string> out;
  for (const auto& u : corpus.units()) out.push_back(std::string(to_string(u.kind)) + " " + u.qualified_name);
  std::sort(out.begin(), out.end());
  return out;
}

inline coderag::CodeUnit make_unit(coderag::UnitKind kind, const std::string& qualified_name, const std::string& text,
                                   const std::string& path = "src/a.cpp", int line = 1) {
  coderag::CodeUnit u;
  u.kind = kind;
  u.qualified_name = qualified_name;
  const auto cut = qualified_name.find_last_of(":.");
  u.identifier = cut == std::string::npos ? qualified_name : qualified_name.substr(cut + 1);
  u.text = text;
  u.origin = coderag::Origin{path, line, line, "proj"};
  return u;
}

/// Corpus of the synthetic benchmark repos under data/repos.
inline coderag::Corpus synthetic_corpus() {
  std::vector<coderag::ProjectRoot> roots;
  std::vector<std::filesystem::path> dirs;
  for (const auto& e : std::filesystem::directory_iterator(source_dir() / "data" / "repos")) {
    if (e.is_directory()) dirs.push_back(e.path());
  }
  std::sort(dirs.begin(), dirs.end());
  for (const auto& d : dirs) roots.push_back(coderag::ProjectRoot{d, "", {}});
  return coderag::build_corpus(roots).corpus;
}

}  // namespace testing_support
