#include "coderag/include_graph.hpp"

#include <algorithm>
#include <fstream>
#include <functional>
#include <sstream>
#include <unordered_set>

#include "coderag/extract.hpp"
#include "coderag/lexer.hpp"

namespace coderag {

namespace fs = std::filesystem;

std::string normalize_repo_path(std::string_view path) {
  std::vector<std::string> parts;
  std::size_t begin = 0;
  while (begin <= path.size()) {
    auto slash = path.find_first_of("/\\", begin);
    if (slash == std::string_view::npos) slash = path.size();
    const std::string_view part = path.substr(begin, slash - begin);
    if (part == "..") {
      if (!parts.empty() && parts.back() != "..") parts.pop_back();
      else parts.emplace_back("..");
    } else if (!part.empty() && part != ".") {
      parts.emplace_back(part);
    }
    begin = slash + 1;
  }
  std::string out;
  for (const auto& p : parts) {
    if (!out.empty()) out += '/';
    out += p;
  }
  return out;
}

namespace {

std::string parent_dir(std::string_view path) {
  const auto slash = path.find_last_of('/');
  return slash == std::string_view::npos ? std::string() : std::string(path.substr(0, slash));
}

std::vector<std::string> candidate_paths(std::string_view spec, std::string_view from_path,
                                         const std::vector<std::string>& include_dirs) {
  std::vector<std::string> out;
  const std::string dir = parent_dir(from_path);
  out.push_back(normalize_repo_path(dir.empty() ? std::string(spec) : dir + "/" + std::string(spec)));
  out.push_back(normalize_repo_path(spec));
  for (const auto& inc : include_dirs) {
    out.push_back(normalize_repo_path(inc + "/" + std::string(spec)));
  }
  return out;
}

bool escapes_root(const std::string& rel) { return rel.empty() || rel.starts_with(".."); }

}  // namespace

// ---- InMemoryRepo ------------------------------------------------------------

InMemoryRepo::InMemoryRepo(std::string project, std::map<std::string, std::string> files,
                           std::vector<std::string> include_dirs)
    : project_(std::move(project)), include_dirs_(std::move(include_dirs)) {
  for (auto& [path, text] : files) files_.emplace(normalize_repo_path(path), std::move(text));
}

void InMemoryRepo::add(std::string path, std::string text) {
  files_[normalize_repo_path(path)] = std::move(text);
}

std::optional<std::string> InMemoryRepo::resolve_include(std::string_view spec,
                                                         std::string_view from_path) const {
  for (const auto& candidate : candidate_paths(spec, from_path, include_dirs_)) {
    if (!escapes_root(candidate) && files_.contains(candidate)) return candidate;
  }
  return std::nullopt;
}

std::optional<SourceFile> InMemoryRepo::load(std::string_view path) const {
  const auto it = files_.find(std::string(path));
  if (it == files_.end()) return std::nullopt;
  return SourceFile::from_bytes(it->first, it->second);
}

// ---- FilesystemRepo ----------------------------------------------------------

FilesystemRepo::FilesystemRepo(fs::path root, std::string project,
                               std::vector<std::string> include_dirs)
    : root_(std::move(root)), project_(std::move(project)), include_dirs_(std::move(include_dirs)) {}

std::vector<std::string> FilesystemRepo::list_files() const {
  std::vector<std::string> out;
  for (auto it = fs::recursive_directory_iterator(root_, fs::directory_options::skip_permission_denied);
       it != fs::recursive_directory_iterator(); ++it) {
    if (it->is_regular_file()) {
      out.push_back(normalize_repo_path(fs::relative(it->path(), root_).generic_string()));
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

bool FilesystemRepo::exists(const std::string& rel) const {
  std::error_code ec;
  return fs::is_regular_file(root_ / rel, ec);
}

std::optional<std::string> FilesystemRepo::resolve_include(std::string_view spec,
                                                           std::string_view from_path) const {
  for (const auto& candidate : candidate_paths(spec, from_path, include_dirs_)) {
    if (!escapes_root(candidate) && exists(candidate)) return candidate;
  }
  return std::nullopt;
}

std::optional<SourceFile> FilesystemRepo::load(std::string_view path) const {
  std::ifstream in(root_ / std::string(path), std::ios::binary);
  if (!in) return std::nullopt;
  std::ostringstream buf;
  buf << in.rdbuf();
  return SourceFile::from_bytes(std::string(path), buf.str());
}

// ---- IncludeGraph ------------------------------------------------------------

void IncludeGraph::add_edge(const std::string& from, const std::string& to) {
  std::lock_guard lock(mu_);
  nodes_.insert(to);
  if (classify_path(from) == FileKind::Header) nodes_.insert(from);
  edges_.emplace(from, to);
}

bool IncludeGraph::claim(const std::string& header) {
  std::lock_guard lock(mu_);
  nodes_.insert(header);
  return processed_.insert(header).second;
}

bool IncludeGraph::is_processed(const std::string& header) const {
  std::lock_guard lock(mu_);
  return processed_.contains(header);
}

std::set<std::string> IncludeGraph::nodes() const {
  std::lock_guard lock(mu_);
  return nodes_;
}

std::set<std::pair<std::string, std::string>> IncludeGraph::edges() const {
  std::lock_guard lock(mu_);
  return edges_;
}

std::set<std::string> IncludeGraph::processed() const {
  std::lock_guard lock(mu_);
  return processed_;
}

// ---- dependency discovery ----------------------------------------------------

std::vector<std::string> quoted_includes(const SourceFile& file) {
  std::vector<std::string> out;
  lex::LexOptions opts;
  opts.keep_comments = false;
  for (const auto& tok : lex::lex(file.text, opts)) {
    if (tok.kind != lex::TokenKind::Directive) continue;
    std::string_view d = tok.text.substr(1);
    d.remove_prefix(std::min(d.size(), d.find_first_not_of(" \t")));
    if (!d.starts_with("include")) continue;
    d.remove_prefix(7);
    d.remove_prefix(std::min(d.size(), d.find_first_not_of(" \t")));
    if (d.empty() || d.front() != '"') continue;
    const auto close = d.find('"', 1);
    if (close == std::string_view::npos || close == 1) continue;
    out.emplace_back(d.substr(1, close - 1));
  }
  return out;
}

std::vector<std::string> get_recursive_dependencies(const SourceFile& file, const FileResolver& repo,
                                                    ExtractionStats* stats, IncludeGraph* graph) {
  std::vector<std::string> out;
  std::unordered_set<std::string> visited{file.path};

  std::function<void(const SourceFile&)> visit = [&](const SourceFile& current) {
    for (const auto& spec : quoted_includes(current)) {
      const auto resolved = repo.resolve_include(spec, current.path);
      if (!resolved) {
        if (stats != nullptr) {
          ++stats->unresolved_includes;
          stats->events.push_back({"unresolved_include", current.path, spec});
        }
        continue;
      }
      if (graph != nullptr) graph->add_edge(current.path, *resolved);
      if (!visited.insert(*resolved).second) continue;
      const FileKind kind = classify_path(*resolved);
      if (kind != FileKind::Header && kind != FileKind::Cpp) continue;
      out.push_back(*resolved);
      if (is_generated_from_proto(*resolved)) continue;
      if (auto loaded = repo.load(*resolved)) visit(*loaded);
    }
  };
  visit(file);
  return out;
}

}  // namespace coderag
