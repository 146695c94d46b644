#pragma once

#include <filesystem>
#include <map>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "coderag/source_file.hpp"

namespace coderag {

struct ExtractionStats;

/// Resolves quoted includes to repo files and loads them.
class FileResolver {
 public:
  virtual ~FileResolver() = default;

  /// Repo-relative path for `#include "spec"` written in `from_path`, or
  /// nullopt when no such file exists in the repo.
  virtual std::optional<std::string> resolve_include(std::string_view spec,
                                                     std::string_view from_path) const = 0;
  virtual std::optional<SourceFile> load(std::string_view path) const = 0;
  virtual const std::string& project() const = 0;
};

/// Lexical path cleanup: collapses "." and "..", '/'-separated.
std::string normalize_repo_path(std::string_view path);

/// In-memory repository, keyed by repo-relative path.
class InMemoryRepo final : public FileResolver {
 public:
  explicit InMemoryRepo(std::string project, std::map<std::string, std::string> files = {},
                        std::vector<std::string> include_dirs = {});

  void add(std::string path, std::string text);
  const std::map<std::string, std::string>& files() const { return files_; }

  std::optional<std::string> resolve_include(std::string_view spec,
                                             std::string_view from_path) const override;
  std::optional<SourceFile> load(std::string_view path) const override;
  const std::string& project() const override { return project_; }

 private:
  std::string project_;
  std::map<std::string, std::string> files_;
  std::vector<std::string> include_dirs_;
};

/// Repository rooted at a directory on disk.
class FilesystemRepo final : public FileResolver {
 public:
  FilesystemRepo(std::filesystem::path root, std::string project,
                 std::vector<std::string> include_dirs = {});

  const std::filesystem::path& root() const { return root_; }

  /// All regular files under the root, repo-relative, sorted.
  std::vector<std::string> list_files() const;

  std::optional<std::string> resolve_include(std::string_view spec,
                                             std::string_view from_path) const override;
  std::optional<SourceFile> load(std::string_view path) const override;
  const std::string& project() const override { return project_; }

 private:
  bool exists(const std::string& rel) const;

  std::filesystem::path root_;
  std::string project_;
  std::vector<std::string> include_dirs_;
};

/// Include relations discovered during extraction plus the set of headers
/// already extracted. Grow-only and safe to share between threads.
class IncludeGraph {
 public:
  IncludeGraph() = default;
  IncludeGraph(const IncludeGraph&) = delete;
  IncludeGraph& operator=(const IncludeGraph&) = delete;

  void add_edge(const std::string& from, const std::string& to);

  /// Marks `header` processed. Returns true only for the first caller.
  bool claim(const std::string& header);
  bool is_processed(const std::string& header) const;

  std::set<std::string> nodes() const;
  std::set<std::pair<std::string, std::string>> edges() const;
  std::set<std::string> processed() const;

 private:
  mutable std::mutex mu_;
  std::set<std::string> nodes_;
  std::set<std::pair<std::string, std::string>> edges_;
  std::set<std::string> processed_;
};

/// Quoted in-repo includes of a file, in directive order. System includes
/// (`<...>`) are not returned.
std::vector<std::string> quoted_includes(const SourceFile& file);

/// Depth-first, pre-order expansion of the quoted includes reachable from
/// `file`. Deterministic; each header appears once even under cycles.
/// Unresolvable includes are counted in `stats` (when given) and skipped.
/// Files generated by protoc are listed but not expanded further.
std::vector<std::string> get_recursive_dependencies(const SourceFile& file,
                                                    const FileResolver& repo,
                                                    ExtractionStats* stats = nullptr,
                                                    IncludeGraph* graph = nullptr);

}  // namespace coderag
