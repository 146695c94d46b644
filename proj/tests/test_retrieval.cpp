#include <gtest/gtest.h>

#include <random>
#include <set>

#include "coderag/embedder.hpp"
#include "coderag/errors.hpp"
#include "coderag/lexical_index.hpp"
#include "coderag/retrieval.hpp"
#include "coderag/tokenizer.hpp"
#include "coderag/vector_store.hpp"
#include "support/fixtures.hpp"
#include "support/oracles.hpp"

using namespace coderag;
namespace ts = testing_support;

namespace {

std::vector<ScoredSnippet> list(Technique t, const std::vector<DocId>& docs) {
  std::vector<ScoredSnippet> out;
  for (std::size_t i = 0; i < docs.size(); ++i) {
    ScoredSnippet s;
    s.doc = docs[i];
    s.technique = t;
    s.score = 1.0 / static_cast<double>(i + 1);
    s.rank = i + 1;
    if (t == Technique::Bm25) s.lexical_score = s.score;
    else s.semantic_score = s.score;
    out.push_back(s);
  }
  return out;
}

std::vector<DocId> docs_of(const std::vector<ScoredSnippet>& hits) {
  std::vector<DocId> out;
  for (const auto& h : hits) out.push_back(h.doc);
  return out;
}

std::vector<DocId> random_ranking(std::mt19937_64& rng, std::size_t universe, std::size_t max_len) {
  std::vector<DocId> all(universe);
  for (std::size_t i = 0; i < universe; ++i) all[i] = i;
  std::shuffle(all.begin(), all.end(), rng);
  all.resize(std::uniform_int_distribution<std::size_t>(0, std::min(max_len, universe))(rng));
  return all;
}

RetrievalRecord record(const std::string& id, std::size_t k, const std::vector<DocId>& docs,
                       Technique t = Technique::Bm25) {
  RetrievalRecord r;
  r.example_id = id;
  r.technique = t;
  r.k = k;
  for (DocId d : docs) r.hits.emplace_back(d, 0.5);
  return r;
}

Corpus func_corpus(const std::vector<std::string>& texts) {
  std::vector<CodeUnit> units;
  for (std::size_t i = 0; i < texts.size(); ++i) {
    units.push_back(ts::make_unit(UnitKind::FuncDef, "f" + std::to_string(i), texts[i], "a.cpp", static_cast<int>(i + 1)));
  }
  return Corpus(std::move(units));
}

}  // namespace

TEST(HybridMerge, TraceOfMergeRule) {
  const auto out = hybrid_merge(list(Technique::Bm25, {1, 2, 3, 4}), list(Technique::Semantic, {3, 5, 6, 7}), 4);
  EXPECT_EQ(docs_of(out), (std::vector<DocId>{1, 3, 2, 5}));
  for (std::size_t i = 0; i < out.size(); ++i) {
    EXPECT_EQ(out[i].rank, i + 1);
    EXPECT_EQ(out[i].technique, Technique::Hybrid);
  }
  EXPECT_TRUE(out[1].lexical_score.has_value());
  EXPECT_TRUE(out[1].semantic_score.has_value());
}

TEST(HybridMerge, IdenticalListsTruncate) {
  EXPECT_EQ(docs_of(hybrid_merge(list(Technique::Bm25, {4, 8, 2, 6, 1}), list(Technique::Semantic, {4, 8, 2, 6, 1}), 4)),
            (std::vector<DocId>{4, 8, 2, 6}));
}

TEST(HybridMerge, EmptyLexicalList) {
  EXPECT_EQ(docs_of(hybrid_merge({}, list(Technique::Semantic, {9, 7, 5, 3, 1}), 4)), (std::vector<DocId>{9, 7, 5, 3}));
  EXPECT_TRUE(hybrid_merge({}, {}, 4).empty());
}

TEST(HybridMerge, FuzzNoDuplicatesAndSize) {
  std::mt19937_64 rng(4242);
  for (int trial = 0; trial < 2000; ++trial) {
    const auto lex = random_ranking(rng, 12, 8);
    const auto sem = random_ranking(rng, 12, 8);
    const std::size_t k = std::uniform_int_distribution<std::size_t>(1, 10)(rng);
    const auto out = docs_of(hybrid_merge(list(Technique::Bm25, lex), list(Technique::Semantic, sem), k));
    const std::set<DocId> unique(out.begin(), out.end());
    EXPECT_EQ(unique.size(), out.size());
    std::set<DocId> all(lex.begin(), lex.end());
    all.insert(sem.begin(), sem.end());
    EXPECT_EQ(out.size(), std::min(k, all.size()));
    for (DocId d : out) EXPECT_TRUE(all.count(d));
    if (lex == sem) {
      std::vector<DocId> truncated(lex.begin(), lex.begin() + static_cast<std::ptrdiff_t>(std::min(k, lex.size())));
      EXPECT_EQ(out, truncated);
    }
    if (!lex.empty()) EXPECT_EQ(out.front(), lex.front());
  }
}

TEST(HybridMerge, FuzzDegenerateEqualLists) {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 500; ++trial) {
    const auto l = random_ranking(rng, 20, 10);
    const std::size_t k = std::uniform_int_distribution<std::size_t>(1, 12)(rng);
    const auto out = docs_of(hybrid_merge(list(Technique::Bm25, l), list(Technique::Semantic, l), k));
    EXPECT_EQ(out, std::vector<DocId>(l.begin(), l.begin() + static_cast<std::ptrdiff_t>(std::min(k, l.size()))));
  }
}

TEST(Overlap, IdenticalRuns) {
  const std::vector<RetrievalRecord> a = {record("e1", 4, {1, 2, 3, 4}), record("e2", 4, {5, 6, 7, 8})};
  const auto r = overlap_analysis(a, a);
  EXPECT_EQ(r.distinct_count, 0u);
  for (const auto& [id, n] : r.overlaps) EXPECT_EQ(n, 4u) << id;
}

TEST(Overlap, DisjointUniverses) {
  const std::vector<RetrievalRecord> a = {record("e1", 4, {1, 2, 3, 4}), record("e2", 4, {5, 6, 7, 8})};
  const std::vector<RetrievalRecord> b = {record("e2", 4, {15, 16, 17, 18}), record("e1", 4, {11, 12, 13, 14})};
  const auto r = overlap_analysis(a, b);
  EXPECT_EQ(r.distinct_count, 2u);
  EXPECT_EQ(r.overlaps.at("e1"), 0u);
}

TEST(Overlap, SymmetricOnRandomRuns) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<RetrievalRecord> a, b;
    for (int e = 0; e < 5; ++e) {
      const auto id = "e" + std::to_string(e);
      a.push_back(record(id, 4, random_ranking(rng, 10, 4), Technique::Bm25));
      b.push_back(record(id, 4, random_ranking(rng, 10, 4), Technique::Semantic));
    }
    const auto ab = overlap_analysis(a, b);
    const auto ba = overlap_analysis(b, a);
    EXPECT_EQ(ab.distinct_count, ba.distinct_count);
    EXPECT_EQ(ab.overlaps, ba.overlaps);
    std::size_t distinct = 0;
    for (const auto& [id, n] : ab.overlaps) distinct += n == 0 ? 1 : 0;
    EXPECT_EQ(ab.distinct_count, distinct);
  }
}

TEST(Overlap, MismatchedRunsRejected) {
  const std::vector<RetrievalRecord> a = {record("e1", 4, {1}), record("e2", 4, {2})};
  for (const auto& b : {std::vector<RetrievalRecord>{record("e1", 4, {1})},
                        std::vector<RetrievalRecord>{record("e1", 4, {1}), record("e3", 4, {2})},
                        std::vector<RetrievalRecord>{record("e1", 4, {1}), record("e2", 3, {2})}}) {
    try {
      overlap_analysis(a, b);
      FAIL();
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::ExampleSetMismatch);
    }
  }
}

TEST(RetrievalRecord, RoundTrip) {
  RetrievalRecord r = record("cc-001", 4, {3, 1, 4});
  r.mode = QueryMode::CompleteSnippet;
  r.hits[1].second = 0.123456789012345;
  const auto again = retrieval_record_from_json_line(to_json_line(r), 1);
  EXPECT_EQ(again, r);
  const auto parsed = parse_retrieval_records(to_json_line(r) + "\n" + to_json_line(record("x", 4, {})) + "\n");
  EXPECT_EQ(parsed.size(), 2u);
  try {
    parse_retrieval_records(to_json_line(r) + "\n{\"example_id\":1}\n");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::Schema);
    EXPECT_NE(std::string(e.what()).find('2'), std::string::npos);
  }
}

TEST(Retrieve, Bm25DispatchEqualsLexicalSearch) {
  const auto c = ts::synthetic_corpus();
  const auto lex = LexicalIndex::build(c);
  RetrievalIndices idx{&c, &lex, nullptr, nullptr};
  RetrievalConfig cfg;
  const auto q = RetrievalQuery::from_example(QueryMode::IncompleteContext, "x", "std::vector<std::string> SplitString(", "");
  const auto got = retrieve(q, cfg, idx);
  const auto direct = lex.search(q.text, 4);
  ASSERT_EQ(got.size(), direct.size());
  for (std::size_t i = 0; i < got.size(); ++i) {
    EXPECT_EQ(got[i].doc, direct[i].doc);
    EXPECT_EQ(got[i].score, direct[i].score);
    EXPECT_EQ(got[i].rank, i + 1);
  }
}

TEST(Retrieve, KExceedsCorpus) {
  const auto c = func_corpus({"int add a b", "int sub a b"});
  const auto lex = LexicalIndex::build(c);
  BuiltinHashEmbedder e;
  const auto store = build_semantic_index(c, e).store;
  RetrievalIndices idx{&c, &lex, &store, &e};
  for (Technique t : {Technique::Bm25, Technique::Semantic, Technique::Hybrid}) {
    RetrievalConfig cfg{4, t};
    const auto q = RetrievalQuery::from_example(QueryMode::IncompleteContext, "x", "int a b", "");
    EXPECT_EQ(retrieve(q, cfg, idx).size(), 2u) << to_string(t);
  }
}

TEST(Retrieve, QueryModesReachDifferentBestMatches) {
  const std::vector<std::string> texts = {"int compute total value", "return sum prices items items",
                                          "void unrelated alpha", "bool other beta", "char filler gamma"};
  const auto c = func_corpus(texts);
  const auto lex = LexicalIndex::build(c);
  BuiltinHashEmbedder e;
  const auto store = build_semantic_index(c, e).store;
  RetrievalIndices idx{&c, &lex, &store, &e};
  const std::string context = "int compute_total(";
  const std::string truth = "return sum_prices(items, items);";
  const auto incomplete = RetrievalQuery::from_example(QueryMode::IncompleteContext, "x", context, truth);
  const auto complete = RetrievalQuery::from_example(QueryMode::CompleteSnippet, "x", context, truth);
  EXPECT_EQ(incomplete.text, context);
  EXPECT_NE(complete.text.find(truth), std::string::npos);

  std::map<std::size_t, oracle::Tokens> docs;
  for (std::size_t i = 0; i < texts.size(); ++i) docs[i] = tokenize_code(texts[i]);
  const auto lex_a = oracle::bm25_rank(docs, tokenize_code(incomplete.text), 1.2, 0.75, false, 1);
  const auto lex_b = oracle::bm25_rank(docs, tokenize_code(complete.text), 1.2, 0.75, false, 1);
  ASSERT_NE(lex_a.front().doc, lex_b.front().doc);

  for (Technique t : {Technique::Bm25, Technique::Semantic}) {
    RetrievalConfig cfg{4, t};
    const auto a = retrieve(incomplete, cfg, idx);
    const auto b = retrieve(complete, cfg, idx);
    EXPECT_EQ(a.front().doc, 0u) << to_string(t);
    EXPECT_EQ(b.front().doc, 1u) << to_string(t);
  }
  EXPECT_EQ(retrieve(incomplete, RetrievalConfig{4, Technique::Bm25}, idx).front().doc, lex_a.front().doc);
}

TEST(Retrieve, ConfigurationErrors) {
  const auto c = func_corpus({"int add a b"});
  const auto lex = LexicalIndex::build(c);
  const auto q = RetrievalQuery::from_example(QueryMode::IncompleteContext, "x", "add", "");
  try {
    retrieve(q, RetrievalConfig{0, Technique::Bm25}, RetrievalIndices{&c, &lex, nullptr, nullptr});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::Config);
  }
  try {
    retrieve(q, RetrievalConfig{4, Technique::Semantic}, RetrievalIndices{&c, &lex, nullptr, nullptr});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::EmptyIndex);
  }
  EXPECT_THROW(parse_technique("dense"), Error);
  EXPECT_EQ(parse_technique("hybrid"), Technique::Hybrid);
  EXPECT_EQ(parse_query_mode("complete-snippet"), QueryMode::CompleteSnippet);
  EXPECT_THROW(parse_query_mode("both"), Error);
}
