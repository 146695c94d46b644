#include <benchmark/benchmark.h>

#include <random>
#include <string>
#include <vector>

#include "coderag/embedder.hpp"
#include "coderag/lexical_index.hpp"
#include "coderag/vector_store.hpp"

using namespace coderag;

namespace {

Corpus random_corpus(std::size_t n, std::size_t words) {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> pick(0, 499);
  std::vector<CodeUnit> units;
  for (std::size_t d = 0; d < n; ++d) {
    CodeUnit u;
    u.kind = UnitKind::FuncDef;
    u.identifier = "f" + std::to_string(d);
    u.qualified_name = u.identifier;
    u.origin = Origin{"a.cpp", static_cast<int>(d + 1), static_cast<int>(d + 1), "bench"};
    u.text = "int " + u.identifier + "() {";
    for (std::size_t w = 0; w < words; ++w) u.text += " v" + std::to_string(pick(rng)) + " +";
    u.text += " 0; }";
    units.push_back(std::move(u));
  }
  return Corpus(std::move(units));
}

void BM_Bm25Search(benchmark::State& state) {
  const auto corpus = random_corpus(static_cast<std::size_t>(state.range(0)), 40);
  const auto index = LexicalIndex::build(corpus);
  const std::string query = corpus.at(corpus.size() / 2).text;
  for (auto _ : state) benchmark::DoNotOptimize(index.search(query, 4));
}
BENCHMARK(BM_Bm25Search)->Arg(1000)->Arg(10000);

void BM_CosineSearch(benchmark::State& state) {
  const auto corpus = random_corpus(static_cast<std::size_t>(state.range(0)), 40);
  BuiltinHashEmbedder embedder;
  const auto store = build_semantic_index(corpus, embedder).store;
  const std::string query = corpus.at(corpus.size() / 2).text;
  for (auto _ : state) benchmark::DoNotOptimize(search_semantic(query, 4, store, embedder));
}
BENCHMARK(BM_CosineSearch)->Arg(1000)->Arg(5000);

void BM_HashEmbed(benchmark::State& state) {
  BuiltinHashEmbedder embedder;
  const auto corpus = random_corpus(1, static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(embedder.embed(corpus.at(0).text));
}
BENCHMARK(BM_HashEmbed)->Arg(50)->Arg(500);

}  // namespace
