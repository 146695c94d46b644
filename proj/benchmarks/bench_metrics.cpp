#include <benchmark/benchmark.h>

#include <string>

#include "coderag/codebleu.hpp"
#include "coderag/edit_similarity.hpp"

using namespace coderag;

namespace {

std::string function_of(int statements, const std::string& var) {
  std::string out = "int compute(const std::vector<int>& in) {\n  int " + var + " = 0;\n";
  for (int i = 0; i < statements; ++i) {
    out += "  if (in[" + std::to_string(i) + "] > " + var + ") " + var + " = in[" + std::to_string(i) + "] * 2;\n";
  }
  return out + "  return " + var + ";\n}\n";
}

void BM_CodeBleu(benchmark::State& state) {
  const auto ref = function_of(static_cast<int>(state.range(0)), "total");
  const auto cand = function_of(static_cast<int>(state.range(0)), "acc");
  for (auto _ : state) benchmark::DoNotOptimize(codebleu(cand, ref));
}
BENCHMARK(BM_CodeBleu)->Arg(5)->Arg(50);

void BM_EditSimilarity(benchmark::State& state) {
  const auto ref = function_of(static_cast<int>(state.range(0)), "total");
  const auto cand = function_of(static_cast<int>(state.range(0)), "acc");
  for (auto _ : state) benchmark::DoNotOptimize(edit_similarity(cand, ref));
}
BENCHMARK(BM_EditSimilarity)->Arg(5)->Arg(50);

}  // namespace
