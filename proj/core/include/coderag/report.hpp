#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "coderag/benchmark_set.hpp"
#include "coderag/pipeline.hpp"

namespace coderag {

struct Aggregate {
  std::size_t count = 0;
  double codebleu = 0.0;  // mean x 100
  double es = 0.0;        // mean x 100
  double codebleu_raw = 0.0;  // mean in [0, 1]
  double es_raw = 0.0;
};

struct ExampleScore {
  std::string id;
  Domain domain = Domain::Utils;
  Difficulty difficulty = Difficulty::Easy;
  EvalScores scores;
  std::size_t token_count = 0;
  std::size_t snippet_count = 0;
  std::vector<DocId> provenance;
  std::string generated_code;
  bool failed = false;
  std::string error;
  std::vector<std::string> flags;
};

struct RunReport {
  std::string run_id;
  std::string model;
  std::string technique;
  std::string mode;
  std::string config_json;  // snapshot sufficient to rerun
  std::vector<ExampleScore> examples;  // benchmark order
  Aggregate overall;
  std::map<std::string, Aggregate> by_domain;
  std::map<std::string, Aggregate> by_difficulty;
};

/// Snapshot of the settings that determine a run's output.
std::string config_snapshot(const PipelineConfig& config, const std::string& model,
                            const std::string& corpus_hash, const std::string& benchmark_hash);

/// Throws Error(CoverageGap) unless the run scores every benchmark id.
RunReport aggregate_report(const PipelineRun& run, const std::vector<BenchmarkExample>& benchmark,
                           const std::string& corpus_hash = "");

Aggregate mean_of(const std::vector<const ExampleScore*>& scores);

/// Deterministic JSON rendering (no timings).
std::string render_json(const RunReport& report);
RunReport parse_report(std::string_view json);

/// Table of techniques x CB/ES, one row per report, followed by the
/// per-domain and per-difficulty breakdowns.
std::string render_text(const std::vector<RunReport>& reports);

/// Completion records, one JSON line per example.
std::string render_records(const PipelineRun& run);

}  // namespace coderag
