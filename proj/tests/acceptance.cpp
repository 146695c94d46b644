#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <mutex>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "coderag/code_tokens.hpp"
#include "coderag/codebleu.hpp"
#include "coderag/corpus.hpp"
#include "coderag/edit_similarity.hpp"
#include "coderag/bleu.hpp"
#include "coderag/report.hpp"
#include "coderag/syntax_tree.hpp"
#include "coderag/dataflow.hpp"
#include "coderag/tokenizer.hpp"
#include "support/offline_env.hpp"
#include "support/oracles.hpp"

using namespace coderag;
namespace ts = testing_support;

namespace {

class Failures {
 public:
  void check(bool ok, const std::string& what) {
    if (!ok && list_.size() < 5) list_.push_back(what);
    if (!ok) ++count_;
  }
  bool empty() const { return count_ == 0; }
  std::string summary() const {
    std::string out = std::to_string(count_) + " failed check(s)";
    for (const auto& f : list_) out += "; " + f;
    return out;
  }

 private:
  std::vector<std::string> list_;
  std::size_t count_ = 0;
};

struct Criterion {
  std::string name;
  double limit_seconds;  // 0 = no limit
  std::function<void(Failures&)> body;
};

std::string fmt(double v) {
  std::ostringstream s;
  s.precision(17);
  s << v;
  return s.str();
}

std::string join(const std::vector<std::string>& tokens) {
  std::string out;
  for (const auto& t : tokens) out += (out.empty() ? "" : " ") + t;
  return out;
}

std::vector<std::string> manifest(const Corpus& c) { return ts::manifest_of(c); }

CorpusBuild build_fixture(const std::string& repo) {
  return build_corpus(std::vector<ProjectRoot>{{ts::fixture_dir() / "extract" / repo, "", {}}});
}

// ---- criteria ----------------------------------------------------------------

void extraction_fixtures(Failures& f) {
  for (const std::string repo : {"plain_cpp", "header_cycle", "proto_macro"}) {
    const auto built = build_fixture(repo);
    const auto expected = ts::read_lines(ts::fixture_dir() / "extract" / (repo + ".manifest"));
    f.check(manifest(built.corpus) == expected, repo + " manifest differs");
    f.check(built.stats.parse_failures == 0, repo + " parse failures");
  }
  const auto pm = build_fixture("proto_macro");
  f.check(pm.stats.files_skipped_generated == 2, "expected 2 skipped .pb files");
  for (const auto& u : pm.corpus.units()) f.check(u.origin.path.find(".pb.") == std::string::npos, "unit from " + u.origin.path);

  InMemoryRepo repo("p", {{"a.cpp", "#include \"a.h\"\n#include \"c.h\"\nint main() { return 0; }\n"},
                          {"a.h", "#include \"b.h\"\nint fa();\n"},
                          {"c.h", "#include \"b.h\"\nint fc();\n"},
                          {"b.h", "#include \"a.h\"\nint fb();\n"}});
  IncludeGraph graph;
  ExtractionStats stats;
  const auto first = extract_file(*repo.load("a.cpp"), graph, repo, stats);
  std::size_t fb = 0;
  for (const auto& u : first) fb += u.identifier == "fb" ? 1 : 0;
  f.check(fb == 1, "shared header units must appear once");
  f.check(graph.processed() == std::set<std::string>{"a.h", "b.h", "c.h"}, "processed set");
  const auto second = extract_file(*repo.load("a.cpp"), graph, repo, stats);
  for (const auto& u : second) f.check(u.origin.path == "a.cpp", "second pass re-emitted " + u.origin.path);

  const auto cycle = build_fixture("header_cycle");
  std::map<std::string, int> seen;
  for (const auto& line : manifest(cycle.corpus)) ++seen[line];
  for (const auto& [line, n] : seen) f.check(n == 1, "header_cycle duplicate " + line);
}

void bm25_oracle(Failures& f) {
  std::mt19937_64 rng(911);
  std::vector<std::string> alphabet;
  for (int i = 0; i < 80; ++i) alphabet.push_back("w" + std::to_string(i));
  std::vector<CodeUnit> units;
  std::map<std::size_t, oracle::Tokens> docs;
  for (std::size_t d = 0; d < 50; ++d) {
    auto toks = oracle::random_tokens(rng, 25, alphabet);
    toks.push_back("w" + std::to_string(d));
    docs[d] = toks;
    units.push_back(ts::make_unit(UnitKind::FuncDef, "f" + std::to_string(d), join(toks), "a.cpp", static_cast<int>(d + 1)));
  }
  const Corpus corpus(units);
  const auto idx = LexicalIndex::build(corpus);
  for (int q = 0; q < 100; ++q) {
    const auto query = oracle::random_tokens(rng, 8, alphabet);
    const auto expected = oracle::bm25_rank(docs, query, 1.2, 0.75, false, 50);
    const auto got = idx.search(join(query), 50);
    f.check(got.size() == expected.size(), "query " + std::to_string(q) + " result count");
    for (std::size_t i = 0; i < std::min(got.size(), expected.size()); ++i) {
      f.check(got[i].doc == expected[i].doc, "query " + std::to_string(q) + " rank " + std::to_string(i));
      f.check(std::abs(got[i].score - expected[i].score) <= 1e-9, "query " + std::to_string(q) + " score " +
                                                                       fmt(got[i].score) + " vs " + fmt(expected[i].score));
    }
  }
  const auto two = LexicalIndex::build(Corpus({ts::make_unit(UnitKind::FuncDef, "a", "alpha beta", "a.cpp", 1),
                                               ts::make_unit(UnitKind::FuncDef, "b", "gamma delta", "a.cpp", 2)}));
  f.check(two.idf("alpha") == 0.0, "IDF at N=2, df=1 is " + fmt(two.idf("alpha")));
  Bm25Params raw;
  raw.raw_idf = true;
  const auto three = LexicalIndex::build(Corpus({ts::make_unit(UnitKind::FuncDef, "a", "alpha beta", "a.cpp", 1),
                                                 ts::make_unit(UnitKind::FuncDef, "b", "gamma delta", "a.cpp", 2),
                                                 ts::make_unit(UnitKind::FuncDef, "c", "eps zeta", "a.cpp", 3)}),
                                         raw);
  f.check(three.score({"alpha"}, 0) == three.idf("alpha"), "TF_mod at average length is not 1");
  f.check(std::abs(three.idf("alpha") - std::log(2.5 / 1.5)) < 1e-12, "IDF at N=3, df=1");
}

class TableEmbedder : public Embedder {
 public:
  explicit TableEmbedder(std::map<std::string, std::vector<double>> t) : table_(std::move(t)) {}
  std::string fingerprint() const override { return "table"; }
  std::vector<Embedding> embed_batch(const std::vector<std::string>& texts) override {
    std::vector<Embedding> out;
    for (const auto& t : texts) out.push_back(normalized(table_.at(t)));
    return out;
  }

 private:
  std::map<std::string, std::vector<double>> table_;
};

void semantic_oracle(Failures& f) {
  std::mt19937_64 rng(515);
  std::normal_distribution<double> gauss(0.0, 1.0);
  auto vec = [&] {
    std::vector<double> v(32);
    for (auto& x : v) x = gauss(rng);
    return v;
  };
  VectorStore store("table", "h");
  std::vector<std::pair<std::size_t, std::vector<double>>> reference;
  for (std::size_t i = 0; i < 100; ++i) {
    auto v = vec();
    reference.emplace_back(i, v);
    store.add(i, normalized(v));
  }
  std::map<std::string, std::vector<double>> table;
  for (int q = 0; q < 100; ++q) table["q" + std::to_string(q)] = vec();
  TableEmbedder embedder(table);
  for (int q = 0; q < 100; ++q) {
    const auto key = "q" + std::to_string(q);
    const auto expected = oracle::cosine_rank(reference, table[key], 100);
    const auto got = search_semantic(key, 100, store, embedder);
    f.check(got.size() == expected.size(), key + " size");
    for (std::size_t i = 0; i < std::min(got.size(), expected.size()); ++i) {
      f.check(got[i].doc == expected[i].doc, key + " rank " + std::to_string(i));
      f.check(std::abs(got[i].score - expected[i].score) <= 1e-9, key + " score");
    }
  }
  const auto corpus = ts::synthetic_corpus();
  BuiltinHashEmbedder builtin;
  const auto built = build_semantic_index(corpus, builtin).store;
  for (const auto& entry : built.entries()) {
    const auto hits = search_semantic(corpus.at(entry.doc).text, 1, built, builtin);
    f.check(!hits.empty() && hits[0].doc == entry.doc, "self-retrieval rank 1 for " + corpus.at(entry.doc).qualified_name);
    f.check(!hits.empty() && std::abs(hits[0].score - 1.0) <= 1e-9, "self-retrieval cosine");
  }
}

std::size_t intersection(const std::map<std::string, std::size_t>& a, const std::map<std::string, std::size_t>& b) {
  std::size_t n = 0;
  for (const auto& [k, v] : b) {
    if (auto it = a.find(k); it != a.end()) n += std::min(v, it->second);
  }
  return n;
}

void metric_suite(Failures& f) {
  std::mt19937_64 rng(4040);
  const oracle::Tokens small = {"a", "b", "c"};
  for (int i = 0; i < 100; ++i) {
    const auto a = oracle::random_tokens(rng, 10, small);
    const auto b = oracle::random_tokens(rng, 10, small);
    const std::size_t d = oracle::levenshtein_search(a, b);
    const double expected =
        a.empty() && b.empty() ? 1.0 : 1.0 - static_cast<double>(d) / static_cast<double>(std::max(a.size(), b.size()));
    f.check(levenshtein(a, b) == d, "levenshtein pair " + std::to_string(i));
    f.check(edit_similarity_tokens(a, b) == expected, "edit similarity pair " + std::to_string(i));
  }
  for (const std::string repo : {"plain_cpp", "header_cycle", "proto_macro"}) {
    const auto built = build_fixture(repo);
    for (const auto& u : built.corpus.units()) {
      f.check(codebleu(u.text, u.text).codebleu == 1.0, "codebleu(x,x) for " + u.qualified_name);
    }
  }
  const std::string ref = "int sum(const std::vector<int>& v) {\n  int total = 0;\n  for (int x : v) total += x;\n  return total;\n}";
  const std::string cand = "int sum(const std::vector<int>& v) {\n  int acc = 0;\n  for (auto x : v) acc = acc + x;\n  return acc;\n}";
  const auto full = codebleu(cand, ref);
  const auto tc = code_tokens(cand), tr = code_tokens(ref);
  f.check(std::abs(codebleu(cand, ref, {1, 0, 0, 0}).codebleu - oracle::bleu(tc, tr)) <= 1e-9, "(1,0,0,0) projection");
  f.check(std::abs(codebleu(cand, ref, {0, 1, 0, 0}).codebleu - full.components.weighted_ngram) <= 1e-9, "(0,1,0,0) projection");
  const auto rs = subtree_multiset(parse_fragment(ref).root);
  double rs_total = 0;
  for (const auto& [k, v] : rs) rs_total += static_cast<double>(v);
  f.check(std::abs(codebleu(cand, ref, {0, 0, 1, 0}).codebleu -
                   static_cast<double>(intersection(subtree_multiset(parse_fragment(cand).root), rs)) / rs_total) <= 1e-9,
          "(0,0,1,0) projection");
  const auto re = dataflow_edges(ref);
  double re_total = 0;
  for (const auto& [k, v] : re) re_total += static_cast<double>(v);
  f.check(std::abs(codebleu(cand, ref, {0, 0, 0, 1}).codebleu -
                   static_cast<double>(intersection(dataflow_edges(cand), re)) / re_total) <= 1e-9,
          "(0,0,0,1) projection");

  const oracle::Tokens pieces = {"int", "x", "y", "=", "1", "+", ";", "return", "(", ")", "{", "}", "f", "if",
                                 "for", "*", "[", "]", "\"s\"", ",", "<", ">", "::", "auto", "&"};
  for (int i = 0; i < 1000; ++i) {
    std::string a, b;
    for (const auto& t : oracle::random_tokens(rng, 30, pieces)) a += t + " ";
    for (const auto& t : oracle::random_tokens(rng, 30, pieces)) b += t + " ";
    const auto s = evaluate(a, b);
    for (double v : {s.codebleu, s.es, s.components.ngram, s.components.weighted_ngram, s.components.ast,
                     s.components.dataflow}) {
      f.check(v >= 0.0 && v <= 1.0 && !std::isnan(v), "score out of range for case " + std::to_string(i));
    }
  }
}

std::vector<ScoredSnippet> ranked(Technique t, const std::vector<DocId>& docs) {
  std::vector<ScoredSnippet> out;
  for (std::size_t i = 0; i < docs.size(); ++i) {
    ScoredSnippet s;
    s.doc = docs[i];
    s.technique = t;
    s.rank = i + 1;
    s.score = 1.0 / static_cast<double>(i + 1);
    out.push_back(s);
  }
  return out;
}

std::vector<DocId> docs_of(const std::vector<ScoredSnippet>& v) {
  std::vector<DocId> out;
  for (const auto& s : v) out.push_back(s.doc);
  return out;
}

RetrievalRecord record(const std::string& id, const std::vector<DocId>& docs) {
  RetrievalRecord r;
  r.example_id = id;
  r.k = 4;
  for (DocId d : docs) r.hits.emplace_back(d, 1.0);
  return r;
}

void hybrid_fusion(Failures& f) {
  f.check(docs_of(hybrid_merge(ranked(Technique::Bm25, {1, 2, 3, 4}), ranked(Technique::Semantic, {3, 5, 6, 7}), 4)) ==
              std::vector<DocId>{1, 3, 2, 5},
          "merge trace");
  f.check(docs_of(hybrid_merge({}, ranked(Technique::Semantic, {9, 8, 7, 6, 5}), 4)) == std::vector<DocId>{9, 8, 7, 6},
          "empty lexical list");
  std::mt19937_64 rng(66);
  for (int trial = 0; trial < 3000; ++trial) {
    auto pick = [&](std::size_t max_len) {
      std::vector<DocId> all(15);
      for (DocId i = 0; i < all.size(); ++i) all[i] = i;
      std::shuffle(all.begin(), all.end(), rng);
      all.resize(std::uniform_int_distribution<std::size_t>(0, max_len)(rng));
      return all;
    };
    const auto lex = pick(8);
    const auto sem = trial % 3 == 0 ? lex : pick(8);
    const std::size_t k = std::uniform_int_distribution<std::size_t>(1, 10)(rng);
    const auto out = docs_of(hybrid_merge(ranked(Technique::Bm25, lex), ranked(Technique::Semantic, sem), k));
    std::set<DocId> uni(lex.begin(), lex.end());
    uni.insert(sem.begin(), sem.end());
    f.check(std::set<DocId>(out.begin(), out.end()).size() == out.size(), "duplicate in merge");
    f.check(out.size() == std::min(k, uni.size()), "merge size");
    if (lex == sem) {
      f.check(out == std::vector<DocId>(lex.begin(), lex.begin() + static_cast<std::ptrdiff_t>(std::min(k, lex.size()))),
              "degenerate merge is not truncation");
    }
  }
  std::vector<RetrievalRecord> a, b;
  for (int e = 0; e < 10; ++e) {
    const auto id = "e" + std::to_string(e);
    a.push_back(record(id, {static_cast<DocId>(e), static_cast<DocId>(e + 1), 40, 41}));
    b.push_back(record(id, {static_cast<DocId>(e + 1), 50, 51, static_cast<DocId>(e % 3)}));
  }
  const auto ab = overlap_analysis(a, b), ba = overlap_analysis(b, a);
  f.check(ab.distinct_count == ba.distinct_count && ab.overlaps == ba.overlaps, "overlap symmetry");
  const auto same = overlap_analysis(a, a);
  f.check(same.distinct_count == 0, "identical runs distinct_count");
  for (const auto& [id, n] : same.overlaps) f.check(n == 4, "identical runs overlap " + id);
  std::vector<RetrievalRecord> far;
  for (int e = 0; e < 10; ++e) far.push_back(record("e" + std::to_string(e), {100, 101, 102, 103}));
  f.check(overlap_analysis(a, far).distinct_count == 10, "disjoint runs distinct_count");
}

// ---- offline end-to-end ------------------------------------------------------------

struct OfflineRuns {
  ts::OfflineEnv env;
  std::mutex mu;
  std::vector<std::pair<std::size_t, std::size_t>> prompts;  // token count, item count

  MockChatClient::Responder recording(MockChatClient::Responder inner) {
    return [this, inner](const ChatRequest& r) {
      std::size_t items = 0;
      while (find_prompt_item(r.content, items + 1)) ++items;
      {
        std::lock_guard lock(mu);
        prompts.emplace_back(default_token_counter().count(r.content), items);
      }
      return inner(r);
    };
  }

  RunReport run(const std::string& technique, MockChatClient::Responder responder) {
    MockChatClient client(recording(std::move(responder)));
    const auto result = run_pipeline(env.benchmark, ts::config_for(technique), env.indices(), client);
    return aggregate_report(result, env.benchmark, env.corpus.hash());
  }
};

OfflineRuns& offline() {
  static OfflineRuns runs;
  return runs;
}

std::string pct(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

DocId oracle_rank1(const std::string& technique, const BenchmarkExample& ex, ts::OfflineEnv& env) {
  std::map<std::size_t, oracle::Tokens> docs;
  std::vector<std::pair<std::size_t, std::vector<double>>> vectors;
  for (DocId d = 0; d < env.corpus.size(); ++d) {
    if (env.corpus.at(d).kind != UnitKind::FuncDef) continue;
    const auto& text = env.corpus.at(d).text;
    docs[d] = tokenize_code(text);
    const auto feats = oracle::hashed_ngrams(tokenize_code(text), 3, 4096);
    std::vector<double> v(4096, 0.0);
    for (const auto& [b, c] : feats) v[b] = c;
    vectors.emplace_back(d, v);
  }
  if (technique == "semantic") {
    const auto feats = oracle::hashed_ngrams(tokenize_code(ex.context), 3, 4096);
    std::vector<double> q(4096, 0.0);
    for (const auto& [b, c] : feats) q[b] = c;
    return oracle::cosine_rank(vectors, q, 1).front().doc;
  }
  return oracle::bm25_rank(docs, tokenize_code(ex.context), 1.2, 0.75, false, 1).front().doc;
}

void end_to_end(Failures& f) {
  auto& o = offline();
  for (const auto& t : ts::all_techniques()) {
    const auto r = o.run(t, ground_truth_responder(o.env.benchmark));
    f.check(pct(r.overall.codebleu) == "100.00" && pct(r.overall.es) == "100.00",
            t + " with ground-truth mock gives " + pct(r.overall.codebleu) + "/" + pct(r.overall.es));
  }
  for (const std::string t : {"bm25", "semantic", "hybrid"}) {
    const auto r = o.run(t, first_snippet_responder());
    double cb = 0, es = 0;
    for (std::size_t i = 0; i < o.env.benchmark.size(); ++i) {
      const auto& ex = o.env.benchmark[i];
      const auto expected = evaluate(o.env.corpus.at(oracle_rank1(t, ex, o.env)).text, ex.ground_truth);
      f.check(std::abs(r.examples[i].scores.codebleu - expected.codebleu) <= 1e-12, t + " " + ex.id + " CB");
      f.check(std::abs(r.examples[i].scores.es - expected.es) <= 1e-12, t + " " + ex.id + " ES");
      cb += expected.codebleu;
      es += expected.es;
    }
    const double n = static_cast<double>(o.env.benchmark.size());
    f.check(std::abs(r.overall.codebleu - 100.0 * cb / n) <= 1e-9, t + " aggregate CB");
    f.check(std::abs(r.overall.es - 100.0 * es / n) <= 1e-9, t + " aggregate ES");
  }
  for (const std::string t : {"base", "hybrid", "identifier:class-def"}) {
    const auto a = render_json(o.run(t, first_snippet_responder()));
    const auto b = render_json(o.run(t, first_snippet_responder()));
    f.check(a == b, t + " reports differ between identical runs");
  }
}

void budget_contract(Failures& f) {
  auto& o = offline();
  f.check(!o.prompts.empty(), "no prompts recorded");
  for (const auto& [tokens, items] : o.prompts) {
    f.check(tokens <= 2048, "prompt of " + std::to_string(tokens) + " tokens");
    f.check(items <= 4, "prompt with " + std::to_string(items) + " items");
  }
  for (const auto& t : ts::all_techniques()) {
    for (QueryMode m : {QueryMode::IncompleteContext, QueryMode::CompleteSnippet}) {
      for (const auto& ex : o.env.benchmark) {
        const auto p = prepare_prompt(ex, ts::config_for(t, m), o.env.indices());
        f.check(p.bundle.token_count <= 2048 && p.bundle.included.size() <= 4, t + " " + ex.id + " over budget");
      }
    }
  }
}

void directional_sanity(Failures& f) {
  auto& o = offline();
  const auto base = o.run("base", first_snippet_responder());
  for (const std::string t : {"bm25", "semantic", "hybrid"}) {
    const auto r = o.run(t, first_snippet_responder());
    f.check(r.overall.codebleu > base.overall.codebleu,
            t + " CB " + pct(r.overall.codebleu) + " does not exceed base " + pct(base.overall.codebleu));
    f.check(r.overall.es > base.overall.es, t + " ES " + pct(r.overall.es) + " does not exceed base " + pct(base.overall.es));
  }
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {"extraction-fixture-suite", 5.0, extraction_fixtures},
      {"bm25-oracle-equivalence", 10.0, bm25_oracle},
      {"semantic-oracle-equivalence", 0.0, semantic_oracle},
      {"metric-suite", 0.0, metric_suite},
      {"hybrid-fusion", 0.0, hybrid_fusion},
      {"end-to-end-offline-run", 30.0, end_to_end},
      {"budget-contract", 0.0, budget_contract},
      {"directional-sanity", 0.0, directional_sanity},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    Failures f;
    const auto start = std::chrono::steady_clock::now();
    try {
      c.body(f);
    } catch (const std::exception& e) {
      f.check(false, std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (c.limit_seconds > 0 && secs >= c.limit_seconds) {
      f.check(false, "runtime " + pct(secs) + " s exceeds " + pct(c.limit_seconds) + " s");
    }
    const bool ok = f.empty();
    failed += ok ? 0 : 1;
    std::printf("%s %s (%.2f s)%s%s\n", ok ? "PASS" : "FAIL", c.name.c_str(), secs, ok ? "" : ": ",
                ok ? "" : f.summary().c_str());
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
