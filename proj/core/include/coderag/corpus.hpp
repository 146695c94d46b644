#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "coderag/code_unit.hpp"
#include "coderag/extract.hpp"
#include "coderag/include_graph.hpp"

namespace coderag {

/// Position of a unit in the corpus file (0-based record index).
using DocId = std::size_t;

/// An immutable, ordered collection of CodeUnits plus the hash of its
/// serialized form.
class Corpus {
 public:
  Corpus() : Corpus(std::vector<CodeUnit>{}) {}
  explicit Corpus(std::vector<CodeUnit> units);

  /// Parses corpus records; throws Error(CorpusFormat) with the 1-based
  /// line number of the first malformed record.
  static Corpus parse(std::string_view content);
  static Corpus load(const std::filesystem::path& path);

  const std::vector<CodeUnit>& units() const { return units_; }
  const CodeUnit& at(DocId id) const { return units_.at(id); }
  std::size_t size() const { return units_.size(); }
  bool empty() const { return units_.empty(); }
  const std::string& hash() const { return hash_; }

  /// Line-delimited records, one per unit, each terminated by '\n'.
  std::string serialize() const;
  void save(const std::filesystem::path& path) const;

 private:
  std::vector<CodeUnit> units_;
  std::string hash_;
};

struct ProjectRoot {
  std::filesystem::path root;
  std::string name;  // defaults to the root directory's name
  std::vector<std::string> include_dirs;
};

struct CorpusBuildOptions {
  // Additional fnmatch-style patterns (matched against repo-relative
  // paths) treated like protoc output and skipped.
  std::vector<std::string> extra_generated_patterns;
  unsigned threads = 0;  // 0 = hardware concurrency
};

struct CorpusBuild {
  Corpus corpus;
  ExtractionStats stats;
};

struct RepoInput {
  const FileResolver* repo = nullptr;
  std::vector<std::string> files;  // repo-relative paths to consider
};

/// Runs extraction over every C++ source and proto file of each repo,
/// skips generated files, sorts by (project, path, start_line), and drops
/// units whose (kind, text) was already seen.
CorpusBuild build_corpus(const std::vector<RepoInput>& repos, const CorpusBuildOptions& options = {});

/// Filesystem variant. Throws Error(Io) if a root cannot be read.
CorpusBuild build_corpus(const std::vector<ProjectRoot>& roots,
                         const CorpusBuildOptions& options = {});

/// Stats as a record stream: one summary record then one record per event.
std::string serialize_stats(const ExtractionStats& stats);

/// Sidecar location for a corpus file: `x.jsonl` -> `x.stats.jsonl`.
std::filesystem::path stats_sidecar_path(const std::filesystem::path& corpus_path);

}  // namespace coderag
