#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include <json.hpp>

#include "coderag/benchmark_set.hpp"
#include "coderag/config.hpp"
#include "coderag/errors.hpp"
#include "coderag/report.hpp"
#include "coderag/tokenizer.hpp"
#include "support/offline_env.hpp"
#include "support/oracles.hpp"

using namespace coderag;
namespace ts = testing_support;

namespace {

std::string example_line(const std::string& id, const std::string& domain = "kv", const std::string& difficulty = "easy") {
  return nlohmann::json{{"id", id}, {"domain", domain}, {"difficulty", difficulty},
                        {"context", "int f() {"}, {"ground_truth", "return 1; }"}}
             .dump();
}

ExampleResult scored(const std::string& id, double cb, double es, Domain d = Domain::Kv,
                     Difficulty diff = Difficulty::Easy) {
  ExampleResult r;
  r.example_id = id;
  r.domain = d;
  r.difficulty = diff;
  r.scores.codebleu = cb;
  r.scores.es = es;
  return r;
}

BenchmarkExample example(const std::string& id, Domain d = Domain::Kv, Difficulty diff = Difficulty::Easy) {
  BenchmarkExample e;
  e.id = id;
  e.domain = d;
  e.difficulty = diff;
  e.context = "int f() {";
  e.ground_truth = "return 1; }";
  return e;
}

ts::OfflineEnv& env() {
  static ts::OfflineEnv e;
  return e;
}

}  // namespace

TEST(Benchmark, ValidThreeExampleFile) {
  const auto b = parse_benchmark(example_line("a") + "\n" + example_line("b", "mq", "hard") + "\n" + example_line("c") + "\n");
  ASSERT_EQ(b.size(), 3u);
  EXPECT_EQ(b[1].domain, Domain::Mq);
  EXPECT_EQ(b[1].difficulty, Difficulty::Hard);
  EXPECT_EQ(parse_benchmark(to_json_line(b[0]) + "\n")[0], b[0]);
}

TEST(Benchmark, UnknownDomainNamesField) {
  try {
    parse_benchmark(example_line("a") + "\n" + example_line("b", "weather") + "\n");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::Schema);
    EXPECT_NE(std::string(e.what()).find("domain"), std::string::npos);
    EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos);
  }
}

TEST(Benchmark, DuplicateIdRejected) {
  try {
    parse_benchmark(example_line("a") + "\n" + example_line("a") + "\n");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::DuplicateId);
  }
}

TEST(Benchmark, ShippedSetCoversEveryDomainAndDifficulty) {
  const auto& b = env().benchmark;
  EXPECT_EQ(b.size(), 10u);
  std::set<Domain> domains;
  std::set<Difficulty> levels;
  for (const auto& e : b) {
    domains.insert(e.domain);
    levels.insert(e.difficulty);
  }
  EXPECT_EQ(domains.size(), 7u);
  EXPECT_EQ(levels.size(), 2u);
}

TEST(Benchmark, AnnotationsPrependedAsComments) {
  BenchmarkExample e = example("a");
  e.annotations.push_back(Annotation{"kv.h", 3, 9, "Store keeps entries sorted"});
  const auto ctx = annotated_context(e);
  EXPECT_TRUE(ctx.starts_with("//"));
  EXPECT_NE(ctx.find("Store keeps entries sorted"), std::string::npos);
  EXPECT_TRUE(ctx.ends_with(e.context));
}

TEST(Report, MeanTimesHundred) {
  PipelineRun run;
  run.results = {scored("a", 0.5, 0.4), scored("b", 0.7, 0.8)};
  const auto r = aggregate_report(run, {example("a"), example("b")});
  EXPECT_NEAR(r.overall.codebleu, 60.0, 1e-9);
  EXPECT_NEAR(r.overall.es, 60.0, 1e-9);
  EXPECT_EQ(r.overall.count, 2u);
}

TEST(Report, SingleExample) {
  PipelineRun run;
  run.results = {scored("a", 0.37, 0.91)};
  const auto r = aggregate_report(run, {example("a")});
  EXPECT_NEAR(r.overall.codebleu, 37.0, 1e-9);
  EXPECT_NEAR(r.overall.es, 91.0, 1e-9);
}

TEST(Report, EmptyOrPartialCoverageRejected) {
  PipelineRun run;
  try {
    aggregate_report(run, {example("a")});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::CoverageGap);
  }
  run.results = {scored("a", 1, 1)};
  EXPECT_THROW(aggregate_report(run, {example("a"), example("b")}), Error);
}

TEST(Report, BreakdownsAreMeansOfTheirGroups) {
  PipelineRun run;
  run.results = {scored("a", 0.2, 0.1, Domain::Kv, Difficulty::Easy), scored("b", 0.4, 0.3, Domain::Kv, Difficulty::Hard),
                 scored("c", 0.9, 0.5, Domain::Mq, Difficulty::Hard)};
  const auto r = aggregate_report(run, {example("a", Domain::Kv, Difficulty::Easy), example("b", Domain::Kv, Difficulty::Hard),
                                        example("c", Domain::Mq, Difficulty::Hard)});
  EXPECT_NEAR(r.by_domain.at("kv").codebleu, 30.0, 1e-9);
  EXPECT_NEAR(r.by_domain.at("mq").es, 50.0, 1e-9);
  EXPECT_NEAR(r.by_difficulty.at("hard").codebleu, 65.0, 1e-9);
  EXPECT_NEAR(r.by_difficulty.at("easy").es, 10.0, 1e-9);
  const auto again = parse_report(render_json(r));
  EXPECT_EQ(render_json(again), render_json(r));
  EXPECT_NE(render_text({r}).find("by domain"), std::string::npos);
}

TEST(Pipeline, TechniqueNames) {
  for (const auto& t : ts::all_techniques()) EXPECT_EQ(TechniqueSpec::parse(t).name(), t);
  try {
    TechniqueSpec::parse("dense");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::UnknownTechnique);
  }
  EXPECT_THROW(TechniqueSpec::parse("identifier:enum"), Error);
}

TEST(Pipeline, BaseWithGroundTruthMockScoresOne) {
  auto& e = env();
  MockChatClient client(ground_truth_responder(e.benchmark));
  const auto run = run_pipeline(e.benchmark, ts::config_for("base"), e.indices(), client);
  ASSERT_EQ(run.results.size(), e.benchmark.size());
  for (const auto& r : run.results) {
    EXPECT_EQ(r.scores.codebleu, 1.0) << r.example_id;
    EXPECT_EQ(r.scores.es, 1.0) << r.example_id;
    EXPECT_FALSE(r.failed);
    EXPECT_TRUE(r.retrieved.empty());
  }
}

TEST(Pipeline, Bm25FirstSnippetEqualsIndependentMetrics) {
  auto& e = env();
  std::map<std::size_t, oracle::Tokens> docs;
  for (DocId d = 0; d < e.corpus.size(); ++d) {
    if (e.corpus.at(d).kind == UnitKind::FuncDef) docs[d] = tokenize_code(e.corpus.at(d).text);
  }
  MockChatClient client(first_snippet_responder());
  const auto run = run_pipeline(e.benchmark, ts::config_for("bm25"), e.indices(), client);
  for (std::size_t i = 0; i < e.benchmark.size(); ++i) {
    const auto& ex = e.benchmark[i];
    const auto top = oracle::bm25_rank(docs, tokenize_code(ex.context), 1.2, 0.75, false, 1);
    ASSERT_FALSE(top.empty());
    const auto expected = evaluate(e.corpus.at(top[0].doc).text, ex.ground_truth);
    EXPECT_NEAR(run.results[i].scores.codebleu, expected.codebleu, 1e-12) << ex.id;
    EXPECT_NEAR(run.results[i].scores.es, expected.es, 1e-12) << ex.id;
    EXPECT_EQ(run.results[i].record.provenance.front(), top[0].doc);
  }
}

TEST(Pipeline, LlmErrorOnOneExampleIsFlagged) {
  auto& e = env();
  const auto truth = ground_truth_responder(e.benchmark);
  MockChatClient client([&truth](const ChatRequest& r) -> std::string {
    if (r.request_id == "kv-001") throw HttpError(ErrorCode::LlmHttp, 500, "boom", "upstream failed");
    return truth(r);
  });
  const auto run = run_pipeline(e.benchmark, ts::config_for("bm25"), e.indices(), client);
  for (const auto& r : run.results) {
    if (r.example_id == "kv-001") {
      EXPECT_TRUE(r.failed);
      EXPECT_EQ(r.scores.codebleu, 0.0);
      EXPECT_NE(std::find(r.flags.begin(), r.flags.end(), "failed"), r.flags.end());
      EXPECT_NE(r.error.find("upstream failed"), std::string::npos);
    } else {
      EXPECT_FALSE(r.failed) << r.example_id;
      EXPECT_EQ(r.scores.codebleu, 1.0) << r.example_id;
    }
  }
  const auto report = aggregate_report(run, e.benchmark);
  EXPECT_NEAR(report.overall.codebleu, 90.0, 1e-9);
}

TEST(Pipeline, MissingIndexAndBadKAreConfigurationErrors) {
  auto& e = env();
  MockChatClient client(first_snippet_responder());
  auto idx = e.indices();
  idx.semantic = nullptr;
  try {
    run_pipeline(e.benchmark, ts::config_for("semantic"), idx, client);
    FAIL();
  } catch (const Error& err) {
    EXPECT_EQ(err.code(), ErrorCode::EmptyIndex);
  }
  auto cfg = ts::config_for("bm25");
  cfg.k = 0;
  try {
    run_pipeline(e.benchmark, cfg, e.indices(), client);
    FAIL();
  } catch (const Error& err) {
    EXPECT_EQ(err.code(), ErrorCode::Config);
  }
  EXPECT_NO_THROW(run_pipeline(e.benchmark, ts::config_for("base"), idx, client));
}

TEST(Pipeline, IdenticalRunsGiveByteIdenticalReports) {
  auto& e = env();
  for (const char* t : {"hybrid", "identifier:func-def"}) {
    MockChatClient a(first_snippet_responder());
    MockChatClient b(first_snippet_responder());
    auto cfg_a = ts::config_for(t);
    auto cfg_b = ts::config_for(t);
    cfg_b.max_in_flight = 1;
    const auto ra = aggregate_report(run_pipeline(e.benchmark, cfg_a, e.indices(), a), e.benchmark, e.corpus.hash());
    const auto rb = aggregate_report(run_pipeline(e.benchmark, cfg_b, e.indices(), b), e.benchmark, e.corpus.hash());
    EXPECT_EQ(render_json(ra), render_json(rb)) << t;
  }
}

TEST(Pipeline, PromptsRespectBudgetAndSnippetCap) {
  auto& e = env();
  for (const auto& t : ts::all_techniques()) {
    for (QueryMode m : {QueryMode::IncompleteContext, QueryMode::CompleteSnippet}) {
      const auto cfg = ts::config_for(t, m);
      for (const auto& ex : e.benchmark) {
        const auto p = prepare_prompt(ex, cfg, e.indices());
        EXPECT_LE(p.bundle.token_count, 2048u);
        EXPECT_LE(p.bundle.included.size(), 4u);
        EXPECT_EQ(p.bundle.token_count, default_token_counter().count(p.bundle.text));
      }
    }
  }
}

TEST(Pipeline, RecordsKeepBenchmarkOrder) {
  auto& e = env();
  MockChatClient client(ground_truth_responder(e.benchmark));
  auto cfg = ts::config_for("semantic");
  cfg.max_in_flight = 4;
  const auto run = run_pipeline(e.benchmark, cfg, e.indices(), client);
  for (std::size_t i = 0; i < e.benchmark.size(); ++i) EXPECT_EQ(run.results[i].example_id, e.benchmark[i].id);
  const auto lines = render_records(run);
  EXPECT_EQ(static_cast<std::size_t>(std::count(lines.begin(), lines.end(), '\n')), e.benchmark.size());
}

TEST(Config, ParsesKnownKeys) {
  const auto s = parse_settings(
      "# comment\nindex_dir = idx\ntechnique = hybrid\nmode = complete-snippet\nk = 3\nbudget = 1024\n"
      "bm25.k = 1.5\nbm25.b = 0.5\nmetric.keyword_weight = 2\nllm.endpoint = http://localhost:8000/v1/chat/completions\n"
      "llm.model = m\nembed.dim = 256\nserve.port = 9999\n",
      "/base");
  EXPECT_EQ(s.index_dir, std::filesystem::path("/base/idx"));
  EXPECT_EQ(s.pipeline.technique.name(), "hybrid");
  EXPECT_EQ(s.pipeline.mode, QueryMode::CompleteSnippet);
  EXPECT_EQ(s.pipeline.k, 3u);
  EXPECT_EQ(s.pipeline.budget, 1024u);
  EXPECT_EQ(s.bm25.k, 1.5);
  EXPECT_EQ(s.bm25.b, 0.5);
  EXPECT_EQ(s.pipeline.metric_options.keyword_weight, 2.0);
  EXPECT_EQ(s.llm.model, "m");
  EXPECT_EQ(s.embed.dim, 256u);
  EXPECT_EQ(s.serve_port, 9999);
}

TEST(Config, UnknownKeyAndInlineSecretRejected) {
  try {
    parse_settings("k = 4\nretreival.k = 4\n");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::Config);
    EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos);
  }
  EXPECT_THROW(parse_settings("llm.token = abc\n"), Error);
  EXPECT_THROW(parse_settings("k = many\n"), Error);
  EXPECT_THROW(parse_settings("technique = dense\n"), Error);
  EXPECT_THROW(load_settings(ts::fixture_dir() / "bad_config.conf"), Error);
}
