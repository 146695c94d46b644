#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "coderag/config.hpp"
#include "coderag/corpus.hpp"
#include "coderag/errors.hpp"
#include "coderag/index_store.hpp"
#include "coderag/report.hpp"
#include "coderag/service.hpp"

using namespace coderag;
namespace fs = std::filesystem;

namespace {

constexpr int kExitConfig = 1;
constexpr int kExitData = 2;

struct Loaded {
  Corpus corpus;
  std::optional<IdentifierIndex> identifier;
  std::optional<LexicalIndex> lexical;
  std::optional<VectorStore> semantic;
  std::unique_ptr<Embedder> embedder;
  std::string manifest;
};

// Loads what the technique needs; everything else only if present.
Loaded load_indices(const Settings& s, bool all_available) {
  IndexDir dir(s.index_dir);
  Loaded out;
  out.corpus = dir.load_corpus();
  out.manifest = dir.manifest();
  const auto& t = s.pipeline.technique;
  const bool want_id = all_available || t.family == TechniqueSpec::Family::Identifier;
  const bool sim = t.family == TechniqueSpec::Family::Similarity;
  const bool want_lex = all_available || (sim && t.retrieval != Technique::Semantic);
  const bool want_sem = all_available || (sim && t.retrieval != Technique::Bm25);
  if (want_id && (dir.has_identifier() || !all_available)) out.identifier = dir.load_identifier(out.corpus);
  if (want_lex && (dir.has_lexical() || !all_available)) out.lexical = dir.load_lexical(out.corpus);
  if (want_sem && (dir.has_semantic() || !all_available)) {
    out.semantic = dir.load_semantic(out.corpus);
    out.embedder = make_embedder(s.embed);
  }
  return out;
}

PipelineIndices pipeline_indices(const Loaded& l, ChatClient* lookup) {
  return PipelineIndices{&l.corpus,
                         l.identifier ? &*l.identifier : nullptr,
                         l.lexical ? &*l.lexical : nullptr,
                         l.semantic ? &*l.semantic : nullptr,
                         l.embedder.get(),
                         lookup};
}

std::unique_ptr<ChatClient> make_client(const ChatClientConfig& config, const std::string& mock,
                                        const std::vector<BenchmarkExample>& benchmark) {
  if (mock == "ground-truth") return std::make_unique<MockChatClient>(ground_truth_responder(benchmark));
  if (mock == "first-snippet") return std::make_unique<MockChatClient>(first_snippet_responder(), "mock-first-snippet");
  if (!mock.empty()) throw Error(ErrorCode::Config, "unknown mock '" + mock + "' (ground-truth | first-snippet)");
  if (config.endpoint.empty()) throw Error(ErrorCode::Config, "no LLM endpoint configured (llm.endpoint or --endpoint)");
  auto c = config;
  if (!c.log) c.log = [](const std::string& line) { std::cerr << line << '\n'; };
  return std::make_unique<HttpChatClient>(c);
}

std::string read_text(const std::string& path) {
  if (path == "-") {
    std::ostringstream buf;
    buf << std::cin.rdbuf();
    return buf.str();
  }
  return read_file(path);
}

void write_output(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
  } else {
    write_file(path, text);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Retrieval-augmented C++ code completion toolkit"};
  app.require_subcommand(1);
  std::string config_path;
  app.add_option("--config", config_path, "key = value settings file");
  std::string index_dir;
  app.add_option("--index-dir", index_dir, "index directory (overrides index_dir)");

  // extract
  auto* extract = app.add_subcommand("extract", "Build a corpus from project roots");
  std::vector<std::string> roots;
  std::string corpus_out;
  std::vector<std::string> include_dirs, generated_patterns;
  unsigned threads = 0;
  extract->add_option("roots", roots, "project roots")->required();
  extract->add_option("--out", corpus_out, "corpus file")->required();
  extract->add_option("-I,--include-dir", include_dirs, "repo-relative include directory");
  extract->add_option("--generated", generated_patterns, "extra glob of generated files to skip");
  extract->add_option("--threads", threads, "worker threads (0 = all cores)");

  // index
  auto* index = app.add_subcommand("index", "Build an index segment");
  std::string index_kind, corpus_in;
  std::optional<double> bm25_k, bm25_b;
  bool raw_idf = false;
  index->add_option("kind", index_kind, "identifier | lexical | semantic")
      ->required()
      ->check(CLI::IsMember({"identifier", "lexical", "semantic"}));
  index->add_option("--corpus", corpus_in, "corpus file (default: the one in the index directory)");
  index->add_option("--k", bm25_k, "BM25 k");
  index->add_option("--b", bm25_b, "BM25 b");
  index->add_flag("--raw-idf", raw_idf, "keep negative IDF values");

  // shared technique options
  std::string technique, mode, template_lang, endpoint, model, mock, benchmark_path, out_path;
  std::optional<std::size_t> k;
  auto technique_opts = [&](CLI::App* sub) {
    sub->add_option("--technique", technique, "base | identifier:<kind> | bm25 | semantic | hybrid");
    sub->add_option("--mode", mode, "incomplete-context | complete-snippet");
    sub->add_option("--k", k, "snippets per prompt");
  };
  auto llm_opts = [&](CLI::App* sub) {
    sub->add_option("--endpoint", endpoint, "chat-completions endpoint");
    sub->add_option("--model", model, "model name");
    sub->add_option("--template-lang", template_lang, "zh | en")->check(CLI::IsMember({"zh", "en"}));
    sub->add_option("--mock", mock, "offline client: ground-truth | first-snippet");
  };

  // retrieve
  auto* retrieve_cmd = app.add_subcommand("retrieve", "Retrieve snippets for a query or a benchmark");
  technique_opts(retrieve_cmd);
  std::string query, query_file;
  retrieve_cmd->add_option("--query", query, "query text");
  retrieve_cmd->add_option("--query-file", query_file, "file holding the query ('-' for stdin)");
  retrieve_cmd->add_option("--benchmark", benchmark_path, "benchmark file; writes one record per example");
  retrieve_cmd->add_option("--out", out_path, "output file (default stdout)");

  // complete
  auto* complete_cmd = app.add_subcommand("complete", "Complete one code context");
  technique_opts(complete_cmd);
  llm_opts(complete_cmd);
  std::string context_file;
  complete_cmd->add_option("--context-file", context_file, "file holding the context ('-' for stdin)")->required();
  bool show_prompt = false;
  complete_cmd->add_flag("--show-prompt", show_prompt, "print the prompt instead of calling the model");

  // eval
  auto* eval = app.add_subcommand("eval", "Run a benchmark end to end and write a run report");
  technique_opts(eval);
  llm_opts(eval);
  std::string records_path;
  eval->add_option("--benchmark", benchmark_path, "benchmark file")->required();
  eval->add_option("--run", out_path, "run report output")->required();
  eval->add_option("--records", records_path, "completion records output");

  // report
  auto* report = app.add_subcommand("report", "Tabulate run reports");
  std::vector<std::string> runs;
  report->add_option("--runs", runs, "run report files")->required();

  // overlap
  auto* overlap = app.add_subcommand("overlap", "Compare two retrieval record files");
  std::string run_a, run_b;
  overlap->add_option("a", run_a, "retrieval records")->required();
  overlap->add_option("b", run_b, "retrieval records")->required();

  // serve
  auto* serve = app.add_subcommand("serve", "Serve /retrieve and /complete over HTTP");
  technique_opts(serve);
  llm_opts(serve);
  std::optional<int> port;
  std::string host;
  serve->add_option("--port", port, "port (0 picks one)");
  serve->add_option("--host", host, "bind address");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitConfig;
  }

  try {
    Settings s = config_path.empty() ? Settings{} : load_settings(config_path);
    if (!index_dir.empty()) s.index_dir = index_dir;
    if (!technique.empty()) s.pipeline.technique = TechniqueSpec::parse(technique);
    if (!mode.empty()) s.pipeline.mode = parse_query_mode(mode);
    if (k) s.pipeline.k = *k;
    if (!template_lang.empty()) s.pipeline.language = parse_language(template_lang);
    if (!endpoint.empty()) s.llm.endpoint = endpoint;
    if (!model.empty()) s.llm.model = model;

    if (*extract) {
      std::vector<ProjectRoot> project_roots;
      for (const auto& r : roots) project_roots.push_back(ProjectRoot{r, "", include_dirs});
      CorpusBuildOptions options;
      options.extra_generated_patterns = generated_patterns;
      options.threads = threads;
      const CorpusBuild built = build_corpus(project_roots, options);
      built.corpus.save(corpus_out);
      write_file(stats_sidecar_path(corpus_out), serialize_stats(built.stats));
      std::cerr << "extracted " << built.corpus.size() << " units from " << built.stats.files_seen << " files ("
                << built.stats.parse_failures << " parse failures, " << built.stats.duplicate_units_dropped
                << " duplicates dropped)\n";
      return 0;
    }

    if (*index) {
      IndexDir dir(s.index_dir);
      if (!corpus_in.empty()) dir.write_corpus(Corpus::load(corpus_in));
      const Corpus corpus = dir.load_corpus();
      if (index_kind == "identifier") {
        dir.save(IdentifierIndex::build(corpus), corpus);
      } else if (index_kind == "lexical") {
        Bm25Params params = s.bm25;
        if (bm25_k) params.k = *bm25_k;
        if (bm25_b) params.b = *bm25_b;
        if (raw_idf) params.raw_idf = true;
        dir.save(LexicalIndex::build(corpus, params));
      } else {
        auto embedder = make_embedder(s.embed);
        std::optional<VectorStore> previous;
        if (dir.has_semantic()) {
          try {
            previous = dir.load_semantic(corpus);
          } catch (const Error&) {
            previous.reset();
          }
        }
        SemanticBuild built = build_semantic_index(corpus, *embedder, previous ? &*previous : nullptr);
        dir.save(built.store);
        if (!built.complete()) {
          std::size_t missing = 0;
          for (const auto& f : built.failures) missing += f.docs.size();
          std::cerr << "semantic index is partial: " << missing << " units failed ("
                    << built.failures.front().message << "); rerun to resume\n";
          return kExitData;
        }
      }
      std::cerr << "index " << index_kind << " written to " << s.index_dir.string() << '\n';
      return 0;
    }

    if (*retrieve_cmd) {
      if (s.pipeline.technique.family != TechniqueSpec::Family::Similarity) {
        throw Error(ErrorCode::UnknownTechnique, "retrieve needs bm25, semantic or hybrid");
      }
      const Loaded l = load_indices(s, false);
      const RetrievalIndices idx{&l.corpus, l.lexical ? &*l.lexical : nullptr, l.semantic ? &*l.semantic : nullptr,
                                 l.embedder.get()};
      const RetrievalConfig rc{s.pipeline.k, s.pipeline.technique.retrieval};
      std::string out;
      if (!benchmark_path.empty()) {
        for (const auto& ex : load_benchmark(benchmark_path)) {
          const auto q = RetrievalQuery::from_example(s.pipeline.mode, ex.id, ex.context, ex.ground_truth);
          RetrievalRecord rec{ex.id, rc.technique, s.pipeline.mode, rc.k, {}};
          for (const auto& h : coderag::retrieve(q, rc, idx)) rec.hits.emplace_back(h.doc, h.score);
          out += to_json_line(rec) + "\n";
        }
      } else {
        RetrievalQuery q;
        q.mode = s.pipeline.mode;
        q.text = !query_file.empty() ? read_text(query_file) : query;
        if (q.text.empty()) throw Error(ErrorCode::Config, "give --query, --query-file or --benchmark");
        for (const auto& h : coderag::retrieve(q, rc, idx)) {
          const CodeUnit& u = l.corpus.at(h.doc);
          nlohmann::ordered_json j;
          j["rank"] = h.rank;
          j["doc"] = h.doc;
          j["score"] = h.score;
          j["kind"] = std::string(to_string(u.kind));
          j["qualified_name"] = u.qualified_name;
          j["path"] = u.origin.path;
          out += j.dump() + "\n";
        }
      }
      write_output(out_path, out);
      return 0;
    }

    if (*complete_cmd) {
      BenchmarkExample ex;
      ex.id = "cli";
      ex.context = read_text(context_file);
      const Loaded l = s.pipeline.technique.family == TechniqueSpec::Family::Base ? Loaded{}
                                                                                   : load_indices(s, false);
      std::unique_ptr<ChatClient> lookup;
      if (s.lookup) lookup = make_client(*s.lookup, "", {});
      const PipelineIndices idx = pipeline_indices(l, lookup.get());
      require_indices(s.pipeline, idx);
      const PreparedPrompt prepared = prepare_prompt(ex, s.pipeline, idx);
      if (show_prompt) {
        std::cout << prepared.bundle.text;
        return 0;
      }
      auto client = make_client(s.llm, mock, {});
      const CompletionRecord rec = complete(prepared.bundle, *client, ex.id);
      std::cout << rec.generated_code << '\n';
      return 0;
    }

    if (*eval) {
      const auto benchmark = load_benchmark(benchmark_path);
      const Loaded l = s.pipeline.technique.family == TechniqueSpec::Family::Base ? Loaded{}
                                                                                   : load_indices(s, false);
      auto client = make_client(s.llm, mock, benchmark);
      std::unique_ptr<ChatClient> lookup;
      if (s.lookup) lookup = make_client(*s.lookup, "", {});
      const PipelineRun run = run_pipeline(benchmark, s.pipeline, pipeline_indices(l, lookup.get()), *client);
      const RunReport rep = aggregate_report(run, benchmark, l.corpus.empty() ? "" : l.corpus.hash());
      write_file(out_path, render_json(rep));
      if (!records_path.empty()) write_file(records_path, render_records(run));
      std::cout << render_text({rep});
      return 0;
    }

    if (*report) {
      std::vector<RunReport> reports;
      for (const auto& r : runs) reports.push_back(parse_report(read_file(r)));
      std::cout << render_text(reports);
      return 0;
    }

    if (*overlap) {
      const auto a = parse_retrieval_records(read_file(run_a));
      const auto b = parse_retrieval_records(read_file(run_b));
      const OverlapReport o = overlap_analysis(a, b);
      nlohmann::ordered_json j;
      j["examples"] = o.overlaps.size();
      j["distinct_count"] = o.distinct_count;
      j["overlaps"] = o.overlaps;
      std::cout << j.dump(2) << '\n';
      return 0;
    }

    if (*serve) {
      Loaded l = load_indices(s, true);
      auto client = make_client(s.llm, mock, {});
      std::unique_ptr<ChatClient> lookup;
      if (s.lookup) lookup = make_client(*s.lookup, "", {});
      ServiceResources res;
      res.corpus = &l.corpus;
      res.identifier = l.identifier ? &*l.identifier : nullptr;
      res.lexical = l.lexical ? &*l.lexical : nullptr;
      res.semantic = l.semantic ? &*l.semantic : nullptr;
      res.embedder = l.embedder.get();
      res.chat = client.get();
      res.lookup = lookup.get();
      res.config = s.pipeline;
      res.manifest = l.manifest;
      if (!s.serve_token_env.empty()) {
        res.bearer_token = env_or_empty(s.serve_token_env);
        if (res.bearer_token.empty()) throw Error(ErrorCode::Config, s.serve_token_env + " is not set");
      }
      const std::string bind_host = host.empty() ? s.serve_host : host;
      const int bind_port = port ? *port : s.serve_port;
      const bool ok = serve_until_signal(std::make_shared<const ServiceCore>(std::move(res)), bind_host, bind_port,
                                         [&](int bound) {
                                           std::cerr << "listening on " << bind_host << ':' << bound << '\n';
                                         });
      if (!ok) throw Error(ErrorCode::Config, "cannot bind " + bind_host + ":" + std::to_string(bind_port));
      std::cerr << "stopped\n";
      return 0;
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return is_configuration_error(e.code()) ? kExitConfig : kExitData;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitData;
  }
  return 0;
}
