#include <benchmark/benchmark.h>

#include <filesystem>
#include <vector>

#include "coderag/corpus.hpp"

using namespace coderag;

namespace {

void BM_BuildSyntheticCorpus(benchmark::State& state) {
  std::vector<ProjectRoot> roots;
  for (const auto& entry : std::filesystem::directory_iterator(std::filesystem::path(CODERAG_DATA_DIR) / "repos")) {
    if (entry.is_directory()) roots.push_back(ProjectRoot{entry.path(), "", {}});
  }
  CorpusBuildOptions options;
  options.threads = static_cast<unsigned>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(build_corpus(roots, options));
}
BENCHMARK(BM_BuildSyntheticCorpus)->Arg(1)->Arg(4);

}  // namespace
