#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <random>

#include "coderag/errors.hpp"
#include "coderag/identifier_index.hpp"
#include "coderag/index_store.hpp"
#include "coderag/lexical_index.hpp"
#include "coderag/tokenizer.hpp"
#include "support/fixtures.hpp"
#include "support/oracles.hpp"

using namespace coderag;
namespace ts = testing_support;

namespace {

Corpus func_corpus(const std::vector<std::string>& texts) {
  std::vector<CodeUnit> units;
  for (std::size_t i = 0; i < texts.size(); ++i) {
    units.push_back(ts::make_unit(UnitKind::FuncDef, "f" + std::to_string(i), texts[i], "src/a.cpp",
                                  static_cast<int>(i + 1)));
  }
  return Corpus(std::move(units));
}

std::string join(const std::vector<std::string>& tokens) {
  std::string out;
  for (const auto& t : tokens) {
    if (!out.empty()) out += ' ';
    out += t;
  }
  return out;
}

std::filesystem::path temp_dir(const std::string& name) {
  auto p = std::filesystem::temp_directory_path() / ("coderag_test_" + name);
  std::filesystem::remove_all(p);
  return p;
}

}  // namespace

TEST(Tokenizer, SplitsCamelCaseAndPunctuation) {
  EXPECT_EQ(tokenize_code("getUserName(id)"), (std::vector<std::string>{"get", "user", "name", "id"}));
}

TEST(Tokenizer, Empty) { EXPECT_TRUE(tokenize_code("").empty()); }

TEST(Tokenizer, DuplicatesPreserved) { EXPECT_EQ(tokenize_code("x + x"), (std::vector<std::string>{"x", "x"})); }

TEST(Tokenizer, SnakeCaseAndDigits) {
  EXPECT_EQ(tokenize_code("read_var_int32 HTTPServer"),
            (std::vector<std::string>{"read", "var", "int32", "httpserver"}));
}

TEST(LexicalIndex, SingleDocumentStatistics) {
  const auto idx = LexicalIndex::build(func_corpus({"int add a b"}));
  EXPECT_EQ(idx.n_docs(), 1u);
  EXPECT_DOUBLE_EQ(idx.avg_len(), 4.0);
}

TEST(LexicalIndex, ClassDefinitionsAreNotIndexed) {
  const Corpus c({ts::make_unit(UnitKind::ClassDef, "A", "class A {};"),
                  ts::make_unit(UnitKind::ClassDef, "B", "class B {};", "src/b.h")});
  const auto idx = LexicalIndex::build(c);
  EXPECT_EQ(idx.n_docs(), 0u);
  try {
    idx.search("class", 4);
    FAIL() << "expected EmptyIndex";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::EmptyIndex);
  }
}

TEST(LexicalIndex, SharedTermDocumentFrequency) {
  const auto idx = LexicalIndex::build(func_corpus({"int add a b", "double add x y"}));
  EXPECT_EQ(idx.doc_freq("add"), 2u);
  EXPECT_EQ(idx.doc_freq("int"), 1u);
  EXPECT_EQ(idx.doc_freq("missing"), 0u);
}

TEST(Bm25, IdfZeroAtTwoDocsOneMatch) {
  const auto idx = LexicalIndex::build(func_corpus({"alpha beta", "gamma delta"}));
  EXPECT_EQ(idx.idf("alpha"), 0.0);
  EXPECT_EQ(idx.score({"alpha"}, 0), 0.0);
}

TEST(Bm25, TfModIsOneAtAverageLength) {
  Bm25Params p;
  p.raw_idf = true;
  for (double k : {0.5, 1.2, 2.0}) {
    for (double b : {0.0, 0.75, 1.0}) {
      p.k = k;
      p.b = b;
      const auto idx = LexicalIndex::build(func_corpus({"alpha beta", "gamma delta", "eps zeta"}), p);
      EXPECT_EQ(idx.score({"alpha"}, 0), idx.idf("alpha")) << k << " " << b;
    }
  }
}

TEST(Bm25, ThreeDocsOneMatch) {
  const auto idx = LexicalIndex::build(func_corpus({"alpha beta", "gamma delta", "eps zeta"}));
  EXPECT_NEAR(idx.score({"alpha"}, 0), std::log(2.5 / 1.5), 1e-12);
  EXPECT_NEAR(idx.score({"alpha"}, 0), 0.5108, 5e-5);
}

TEST(Bm25, NegativeIdfFlooredUnlessRaw) {
  const std::vector<std::string> texts = {"common a", "common b", "common c"};
  EXPECT_EQ(LexicalIndex::build(func_corpus(texts)).idf("common"), 0.0);
  Bm25Params raw;
  raw.raw_idf = true;
  EXPECT_NEAR(LexicalIndex::build(func_corpus(texts), raw).idf("common"), std::log(0.5 / 3.5), 1e-12);
}

TEST(Bm25, SearchMatchesBruteForceOracle) {
  std::mt19937_64 rng(20240611);
  std::vector<std::string> alphabet;
  for (int i = 0; i < 60; ++i) alphabet.push_back("t" + std::string(1, static_cast<char>('a' + i % 26)) +
                                                  std::string(1, static_cast<char>('a' + i / 26)));
  std::vector<std::string> texts;
  std::map<std::size_t, oracle::Tokens> docs;
  for (std::size_t d = 0; d < 50; ++d) {
    auto toks = oracle::random_tokens(rng, 30, alphabet);
    if (toks.empty()) toks.push_back(alphabet[d]);
    docs[d] = toks;
    texts.push_back(join(toks));
  }
  for (const bool raw : {false, true}) {
    Bm25Params p;
    p.raw_idf = raw;
    const auto idx = LexicalIndex::build(func_corpus(texts), p);
    for (int q = 0; q < 100; ++q) {
      auto query = oracle::random_tokens(rng, 6, alphabet);
      const auto expected = oracle::bm25_rank(docs, query, p.k, p.b, raw, 10);
      const auto got = idx.search(join(query), 10);
      ASSERT_EQ(got.size(), expected.size()) << "query " << q;
      for (std::size_t i = 0; i < got.size(); ++i) {
        EXPECT_EQ(got[i].doc, expected[i].doc) << "query " << q << " rank " << i;
        EXPECT_NEAR(got[i].score, expected[i].score, 1e-9);
      }
    }
  }
}

TEST(Bm25, ExactTextIsRankOne) {
  const auto idx = LexicalIndex::build(func_corpus({"int add int a int b return a b", "void log message text",
                                                    "bool parse header line"}));
  EXPECT_EQ(idx.search("void log message text", 3).front().doc, 1u);
}

TEST(Bm25, KLargerThanCorpus) {
  const auto idx = LexicalIndex::build(func_corpus({"shared a", "shared b", "shared c"}));
  EXPECT_EQ(idx.search("shared", 10).size(), 3u);
}

TEST(Bm25, NoIndexedTerms) {
  const auto idx = LexicalIndex::build(func_corpus({"alpha", "beta"}));
  EXPECT_TRUE(idx.search("zeta omega", 4).empty());
  EXPECT_TRUE(idx.search("", 4).empty());
}

TEST(Bm25, ResultsSortedDescendingThenByDoc) {
  const auto idx = LexicalIndex::build(func_corpus({"x y", "x y", "x z", "q"}));
  const auto hits = idx.search("x y", 10);
  for (std::size_t i = 1; i < hits.size(); ++i) {
    EXPECT_TRUE(hits[i - 1].score > hits[i].score ||
                (hits[i - 1].score == hits[i].score && hits[i - 1].doc < hits[i].doc));
  }
}

TEST(Bm25, ScoreEqualsSumOfTermContributions) {
  std::mt19937_64 rng(7);
  const std::vector<std::string> alphabet = {"a", "b", "c", "d", "e", "f", "g"};
  std::vector<std::string> texts;
  for (int d = 0; d < 12; ++d) texts.push_back(join(oracle::random_tokens(rng, 10, alphabet)) + " z");
  Bm25Params p;
  p.raw_idf = true;
  const auto idx = LexicalIndex::build(func_corpus(texts), p);
  for (int q = 0; q < 30; ++q) {
    const auto query = oracle::random_tokens(rng, 5, alphabet);
    for (DocId d = 0; d < texts.size(); ++d) {
      double sum = 0.0;
      for (const auto& t : query) sum += idx.score({t}, d);
      EXPECT_NEAR(idx.score(query, d), sum, 1e-12);
    }
  }
}

TEST(Bm25, SerializeRoundTrip) {
  const auto c = ts::synthetic_corpus();
  const auto idx = LexicalIndex::build(c);
  const auto again = LexicalIndex::deserialize(idx.serialize());
  EXPECT_EQ(again.serialize(), idx.serialize());
  EXPECT_EQ(again.corpus_hash(), c.hash());
  const auto a = idx.search("read varint buffer", 4);
  const auto b = again.search("read varint buffer", 4);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].doc, b[i].doc);
    EXPECT_EQ(a[i].score, b[i].score);
  }
}

TEST(IdentifierIndex, DistinctKinds) {
  const Corpus c({ts::make_unit(UnitKind::MsgDef, "User", "message User {}", "u.proto"),
                  ts::make_unit(UnitKind::ClassDef, "Store", "class Store {};", "s.h"),
                  ts::make_unit(UnitKind::FuncDef, "run", "void run() {}", "r.cpp")});
  const auto idx = IdentifierIndex::build(c);
  EXPECT_EQ(idx.key_count(), 3u);
  for (UnitKind k : {UnitKind::MsgDef, UnitKind::ClassDef, UnitKind::FuncDef}) EXPECT_EQ(idx.keys(k).size(), 1u);
  EXPECT_TRUE(idx.keys(UnitKind::FuncDec).empty());
}

TEST(IdentifierIndex, OverloadsReturnedInCorpusOrder) {
  const Corpus c({ts::make_unit(UnitKind::FuncDef, "f", "int f(int x) { return x; }", "a.cpp", 1),
                  ts::make_unit(UnitKind::FuncDef, "f", "double f(double x) { return x; }", "a.cpp", 5)});
  const auto idx = IdentifierIndex::build(c);
  EXPECT_EQ(idx.lookup_ids("f", UnitKind::FuncDef), (std::vector<DocId>{0, 1}));
  EXPECT_EQ(idx.lookup("f", UnitKind::FuncDef, c).size(), 2u);
}

TEST(IdentifierIndex, EmptyCorpus) { EXPECT_TRUE(IdentifierIndex::build(Corpus()).empty()); }

TEST(IdentifierIndex, LookupsOnFixtures) {
  const auto built = build_corpus(std::vector<ProjectRoot>{{ts::fixture_dir() / "extract" / "proto_macro", "", {}}});
  const auto idx = IdentifierIndex::build(built.corpus);
  const auto users = idx.lookup("User", UnitKind::MsgDef, built.corpus);
  ASSERT_EQ(users.size(), 1u);
  EXPECT_EQ(users[0].qualified_name, "User");
  EXPECT_TRUE(idx.lookup("NoSuch", UnitKind::ClassDef, built.corpus).empty());
  EXPECT_EQ(idx.lookup("Address", UnitKind::MsgDef, built.corpus).size(), 1u);
  EXPECT_EQ(idx.lookup("User.Address", UnitKind::MsgDef, built.corpus).size(), 1u);

  const Corpus decl = build_corpus(std::vector<RepoInput>{}).corpus;
  EXPECT_TRUE(decl.empty());
  InMemoryRepo repo("p", {{"a.cpp", "#include \"a.h\"\n"}, {"a.h", "class A { void f(); };\n"}});
  const auto c = build_corpus(std::vector<RepoInput>{{&repo, {"a.cpp", "a.h"}}}).corpus;
  const auto hits = IdentifierIndex::build(c).lookup("A::f", UnitKind::FuncDec, c);
  ASSERT_EQ(hits.size(), 1u);
  EXPECT_EQ(hits[0].qualified_name, "A::f");
}

TEST(IdentifierIndex, KindsAreIsolated) {
  const auto c = ts::synthetic_corpus();
  const auto idx = IdentifierIndex::build(c);
  for (UnitKind kind : kAllUnitKinds) {
    for (const auto& [key, ids] : idx.keys(kind)) {
      for (DocId id : ids) {
        EXPECT_EQ(c.at(id).kind, kind);
        EXPECT_TRUE(c.at(id).identifier == key || c.at(id).qualified_name == key);
      }
    }
  }
}

TEST(IdentifierIndex, SegmentRoundTrip) {
  const auto c = ts::synthetic_corpus();
  const auto idx = IdentifierIndex::build(c);
  IdentifierIndex again;
  for (UnitKind kind : kAllUnitKinds) again.load_segment(kind, idx.serialize_segment(kind));
  for (UnitKind kind : kAllUnitKinds) EXPECT_EQ(again.keys(kind), idx.keys(kind));
}

TEST(IndexDir, SegmentsRoundTripAndDetectStaleness) {
  const auto root = temp_dir("indexdir");
  const IndexDir dir(root);
  EXPECT_THROW(dir.load_corpus(), Error);
  const auto c = ts::synthetic_corpus();
  dir.write_corpus(c);
  try {
    dir.load_lexical(c);
    FAIL() << "expected EmptyIndex";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::EmptyIndex);
  }
  dir.save(IdentifierIndex::build(c), c);
  dir.save(LexicalIndex::build(c));
  EXPECT_TRUE(dir.has_identifier());
  EXPECT_TRUE(dir.has_lexical());
  EXPECT_EQ(dir.load_corpus().hash(), c.hash());
  EXPECT_EQ(dir.load_lexical(c).serialize(), LexicalIndex::build(c).serialize());

  const Corpus other(std::vector<CodeUnit>(c.units().begin(), c.units().end() - 1));
  try {
    dir.load_lexical(other);
    FAIL() << "expected StaleIndex";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::StaleIndex);
  }
  dir.write_corpus(other);
  EXPECT_FALSE(dir.has_lexical());
  std::filesystem::remove_all(root);
}
