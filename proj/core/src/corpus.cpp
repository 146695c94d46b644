#include "coderag/corpus.hpp"

#include <fnmatch.h>

#include <algorithm>
#include <atomic>
#include <fstream>
#include <functional>
#include <memory>
#include <set>
#include <sstream>
#include <thread>
#include <tuple>

#include <json.hpp>

#include "coderag/errors.hpp"
#include "coderag/hash.hpp"

namespace coderag {

namespace fs = std::filesystem;

Corpus::Corpus(std::vector<CodeUnit> units) : units_(std::move(units)) {
  hash_ = content_hash(serialize());
}

Corpus Corpus::parse(std::string_view content) {
  std::vector<CodeUnit> units;
  std::size_t line_no = 0;
  std::size_t begin = 0;
  while (begin < content.size()) {
    auto end = content.find('\n', begin);
    if (end == std::string_view::npos) end = content.size();
    ++line_no;
    std::string_view line = content.substr(begin, end - begin);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (!line.empty()) units.push_back(code_unit_from_json_line(line, line_no));
    begin = end + 1;
  }
  return Corpus(std::move(units));
}

Corpus Corpus::load(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot read corpus " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse(buf.str());
}

std::string Corpus::serialize() const {
  std::string out;
  for (const auto& unit : units_) {
    out += to_json_line(unit);
    out += '\n';
  }
  return out;
}

void Corpus::save(const fs::path& path) const {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::Io, "cannot write corpus " + path.string());
  out << serialize();
}

namespace {

bool matches_any(const std::string& path, const std::vector<std::string>& patterns) {
  return std::any_of(patterns.begin(), patterns.end(), [&](const std::string& p) {
    return fnmatch(p.c_str(), path.c_str(), 0) == 0;
  });
}

struct FileJob {
  const FileResolver* repo;
  IncludeGraph* graph;
  std::string path;
};

void run_parallel(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& fn) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(count, 1)));
  if (threads <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (unsigned t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) fn(i);
    });
  }
  for (auto& th : pool) th.join();
}

}  // namespace

CorpusBuild build_corpus(const std::vector<RepoInput>& repos, const CorpusBuildOptions& options) {
  CorpusBuild result;
  std::vector<std::unique_ptr<IncludeGraph>> graphs;
  std::vector<FileJob> jobs;
  for (const auto& input : repos) {
    graphs.push_back(std::make_unique<IncludeGraph>());
    std::vector<std::string> files = input.files;
    std::sort(files.begin(), files.end());
    for (const auto& path : files) {
      const FileKind kind = classify_path(path);
      if (kind != FileKind::Cpp && kind != FileKind::Proto) continue;
      if (is_generated_from_proto(path) || matches_any(path, options.extra_generated_patterns)) {
        ++result.stats.files_seen;
        ++result.stats.files_skipped_generated;
        result.stats.events.push_back({"skipped_generated", path, "generated file"});
        continue;
      }
      jobs.push_back(FileJob{input.repo, graphs.back().get(), path});
    }
  }

  std::vector<std::vector<CodeUnit>> per_file(jobs.size());
  std::vector<ExtractionStats> per_stats(jobs.size());
  run_parallel(jobs.size(), options.threads, [&](std::size_t i) {
    const FileJob& job = jobs[i];
    auto file = job.repo->load(job.path);
    if (!file) {
      ++per_stats[i].parse_failures;
      per_stats[i].events.push_back({"parse_failure", job.path, "unreadable file"});
      return;
    }
    try {
      per_file[i] = extract_file(*file, *job.graph, *job.repo, per_stats[i]);
    } catch (const Error& e) {
      ++per_stats[i].parse_failures;
      per_stats[i].events.push_back({"parse_failure", job.path, e.what()});
    }
  });

  std::vector<CodeUnit> all;
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    result.stats.merge(per_stats[i]);
    std::move(per_file[i].begin(), per_file[i].end(), std::back_inserter(all));
  }
  std::sort(all.begin(), all.end(), [](const CodeUnit& a, const CodeUnit& b) {
    return std::forward_as_tuple(a.origin.project, a.origin.path, a.origin.start_line,
                                 b.origin.end_line, a.kind, a.qualified_name, a.text) <
           std::forward_as_tuple(b.origin.project, b.origin.path, b.origin.start_line,
                                 a.origin.end_line, b.kind, b.qualified_name, b.text);
  });
  std::set<std::pair<UnitKind, std::string>> seen;
  std::vector<CodeUnit> kept;
  kept.reserve(all.size());
  for (auto& unit : all) {
    if (!seen.emplace(unit.kind, unit.text).second) {
      ++result.stats.duplicate_units_dropped;
      continue;
    }
    kept.push_back(std::move(unit));
  }
  std::sort(result.stats.events.begin(), result.stats.events.end());
  result.corpus = Corpus(std::move(kept));
  return result;
}

CorpusBuild build_corpus(const std::vector<ProjectRoot>& roots, const CorpusBuildOptions& options) {
  std::vector<std::unique_ptr<FilesystemRepo>> repos;
  std::vector<RepoInput> inputs;
  for (const auto& root : roots) {
    std::error_code ec;
    if (!fs::is_directory(root.root, ec)) {
      throw Error(ErrorCode::Io, "cannot read project root " + root.root.string());
    }
    std::string name = root.name;
    if (name.empty()) {
      name = fs::weakly_canonical(root.root).filename().string();
    }
    repos.push_back(std::make_unique<FilesystemRepo>(root.root, name, root.include_dirs));
    inputs.push_back(RepoInput{repos.back().get(), repos.back()->list_files()});
  }
  return build_corpus(inputs, options);
}

std::string serialize_stats(const ExtractionStats& stats) {
  nlohmann::ordered_json summary;
  summary["record"] = "summary";
  summary["files_seen"] = stats.files_seen;
  summary["files_skipped_generated"] = stats.files_skipped_generated;
  nlohmann::ordered_json per_kind;
  for (UnitKind kind : kAllUnitKinds) per_kind[std::string(to_string(kind))] = stats.emitted(kind);
  summary["units_emitted"] = per_kind;
  summary["macro_units"] = stats.macro_units;
  summary["duplicate_units_dropped"] = stats.duplicate_units_dropped;
  summary["parse_failures"] = stats.parse_failures;
  summary["unresolved_includes"] = stats.unresolved_includes;
  summary["invalid_utf8_bytes"] = stats.replaced_bytes;
  std::string out = summary.dump() + "\n";
  for (const auto& e : stats.events) {
    nlohmann::ordered_json rec;
    rec["record"] = "event";
    rec["kind"] = e.kind;
    rec["path"] = e.path;
    rec["detail"] = e.detail;
    out += rec.dump() + "\n";
  }
  return out;
}

fs::path stats_sidecar_path(const fs::path& corpus_path) {
  fs::path out = corpus_path;
  if (out.extension() == ".jsonl") out.replace_extension();
  out += ".stats.jsonl";
  return out;
}

}  // namespace coderag
