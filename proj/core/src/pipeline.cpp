#include "coderag/pipeline.hpp"

#include <atomic>
#include <exception>
#include <map>
#include <mutex>
#include <set>
#include <thread>

#include "coderag/errors.hpp"
#include "coderag/identifier_request.hpp"

namespace coderag {

std::string TechniqueSpec::name() const {
  switch (family) {
    case Family::Base: return "base";
    case Family::Identifier: return "identifier:" + std::string(to_string(kind));
    case Family::Similarity: return std::string(to_string(retrieval));
  }
  return "?";
}

TechniqueSpec TechniqueSpec::parse(std::string_view text) {
  TechniqueSpec spec;
  if (text == "base") return spec;
  constexpr std::string_view kPrefix = "identifier:";
  if (text.starts_with(kPrefix)) {
    const auto kind = parse_unit_kind(text.substr(kPrefix.size()));
    if (!kind) throw Error(ErrorCode::UnknownTechnique, "unknown identifier kind in '" + std::string(text) + "'");
    spec.family = Family::Identifier;
    spec.kind = *kind;
    return spec;
  }
  spec.family = Family::Similarity;
  spec.retrieval = parse_technique(text);
  return spec;
}

void require_indices(const PipelineConfig& config, const PipelineIndices& idx) {
  const auto& t = config.technique;
  if (t.family == TechniqueSpec::Family::Base) return;
  if (t.family == TechniqueSpec::Family::Similarity && config.k == 0) {
    throw Error(ErrorCode::Config, "k must be at least 1");
  }
  if (idx.corpus == nullptr) throw Error(ErrorCode::EmptyIndex, "technique " + t.name() + " needs a corpus");
  if (t.family == TechniqueSpec::Family::Identifier) {
    if (idx.identifier == nullptr) throw Error(ErrorCode::EmptyIndex, "identifier index is not loaded");
    return;
  }
  if ((t.retrieval == Technique::Bm25 || t.retrieval == Technique::Hybrid) && idx.lexical == nullptr) {
    throw Error(ErrorCode::EmptyIndex, "lexical index is not loaded");
  }
  if ((t.retrieval == Technique::Semantic || t.retrieval == Technique::Hybrid) &&
      (idx.semantic == nullptr || idx.embedder == nullptr)) {
    throw Error(ErrorCode::EmptyIndex, "semantic index is not loaded");
  }
}

namespace {

PromptTemplate template_of(const PipelineConfig& config, TemplateId id) {
  const auto it = config.templates.find(id);
  if (it != config.templates.end()) {
    PromptTemplate t = it->second;
    if (auto problem = t.check()) throw Error(ErrorCode::TemplateMismatch, *problem);
    return t;
  }
  return PromptTemplate::builtin(id, config.language);
}

const std::set<std::string>& requested(const IdentifierRequest& r, UnitKind kind) {
  switch (kind) {
    case UnitKind::MsgDef: return r.messages;
    case UnitKind::ClassDef: return r.classes;
    default: return r.functions;
  }
}

PromptOptions prompt_options(const PipelineConfig& config) {
  PromptOptions opts;
  opts.budget = config.budget;
  opts.max_snippets = config.k;
  opts.counter = make_token_counter(config.token_counter);
  return opts;
}

}  // namespace

PreparedPrompt prepare_prompt(const BenchmarkExample& example, const PipelineConfig& config,
                              const PipelineIndices& indices) {
  PreparedPrompt out;
  const std::string current = config.include_annotations ? annotated_context(example) : example.context;
  const PromptOptions opts = prompt_options(config);
  const auto& t = config.technique;
  switch (t.family) {
    case TechniqueSpec::Family::Base:
      out.bundle = build_base_prompt(current, config.language, opts);
      break;
    case TechniqueSpec::Family::Identifier: {
      const IdentifierRequest req = need_to_lookup(example.context, indices.lookup_client, indices.identifier);
      if (req.fallback) out.flags.emplace_back("identifier-fallback");
      std::vector<PromptItem> items;
      std::set<DocId> seen;
      for (const auto& name : requested(req, t.kind)) {
        for (DocId doc : indices.identifier->lookup_ids(name, t.kind)) {
          if (!seen.insert(doc).second) continue;
          items.push_back(prompt_item(doc, indices.corpus->at(doc)));
          out.retrieved.emplace_back(doc, 0.0);
        }
      }
      if (items.empty()) out.flags.emplace_back("knowledge-unavailable");
      out.bundle = build_identifier_prompt(t.kind, items, current, template_of(config, template_for(t.kind)), opts);
      break;
    }
    case TechniqueSpec::Family::Similarity: {
      RetrievalIndices ri{indices.corpus, indices.lexical, indices.semantic, indices.embedder};
      const auto query = RetrievalQuery::from_example(config.mode, example.id, example.context, example.ground_truth);
      const auto hits = retrieve(query, RetrievalConfig{config.k, t.retrieval}, ri);
      for (const auto& h : hits) out.retrieved.emplace_back(h.doc, h.score);
      out.bundle = build_similarity_prompt(hits, *indices.corpus, current, template_of(config, TemplateId::Similar), opts);
      break;
    }
  }
  if (out.bundle.truncated) out.flags.emplace_back("items-dropped");
  if (out.bundle.context_truncated) out.flags.emplace_back("context-truncated");
  return out;
}

PipelineRun run_pipeline(const std::vector<BenchmarkExample>& benchmark, const PipelineConfig& config,
                         const PipelineIndices& indices, ChatClient& client) {
  require_indices(config, indices);
  if (auto problem = config.weights.check()) throw Error(ErrorCode::Config, *problem);
  make_token_counter(config.token_counter);
  if (config.technique.family == TechniqueSpec::Family::Identifier) {
    template_of(config, template_for(config.technique.kind));
  } else if (config.technique.family == TechniqueSpec::Family::Similarity) {
    template_of(config, TemplateId::Similar);
  }

  PipelineRun run;
  run.technique = config.technique.name();
  run.mode = std::string(to_string(config.mode));
  run.model = client.model();
  run.config = config;
  run.results.resize(benchmark.size());

  std::atomic<std::size_t> next{0};
  std::atomic<bool> abort{false};
  std::exception_ptr fatal;
  std::mutex fatal_mu;

  auto work = [&] {
    for (std::size_t i = next++; i < benchmark.size() && !abort; i = next++) {
      const BenchmarkExample& ex = benchmark[i];
      ExampleResult& r = run.results[i];
      r.example_id = ex.id;
      r.domain = ex.domain;
      r.difficulty = ex.difficulty;
      try {
        PreparedPrompt prepared = prepare_prompt(ex, config, indices);
        r.retrieved = prepared.retrieved;
        r.flags = prepared.flags;
        r.snippet_count = prepared.bundle.included.size();
        r.record = complete(prepared.bundle, client, ex.id);
        r.record.technique = run.technique;
        r.record.mode = run.mode;
        r.scores = evaluate(r.record.generated_code, ex.ground_truth, config.weights, config.metric_options);
        for (const auto& f : r.scores.flags) r.flags.push_back(f);
      } catch (const Error& e) {
        if (is_configuration_error(e.code())) {
          std::lock_guard lock(fatal_mu);
          if (!fatal) fatal = std::current_exception();
          abort = true;
          return;
        }
        r.failed = true;
        r.error = e.what();
        r.scores = EvalScores{};
        r.flags.emplace_back("failed");
      } catch (const std::exception& e) {
        r.failed = true;
        r.error = e.what();
        r.scores = EvalScores{};
        r.flags.emplace_back("failed");
      }
    }
  };

  const std::size_t threads = std::max<std::size_t>(1, std::min(config.max_in_flight, benchmark.size()));
  if (threads == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(work);
    for (auto& th : pool) th.join();
  }
  if (fatal) std::rethrow_exception(fatal);
  return run;
}

MockChatClient::Responder ground_truth_responder(const std::vector<BenchmarkExample>& benchmark) {
  auto answers = std::make_shared<std::map<std::string, std::string>>();
  for (const auto& ex : benchmark) (*answers)[ex.id] = ex.ground_truth;
  return [answers](const ChatRequest& request) {
    const auto it = answers->find(request.request_id);
    if (it == answers->end()) return std::string();
    return "```cpp\n" + it->second + "\n```";
  };
}

MockChatClient::Responder first_snippet_responder() {
  return [](const ChatRequest& request) {
    const auto item = find_prompt_item(request.content, 1);
    if (!item) return std::string();
    return "```cpp\n" + *item + "\n```";
  };
}

}  // namespace coderag
