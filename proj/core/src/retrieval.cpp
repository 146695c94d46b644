#include "coderag/retrieval.hpp"

#include <algorithm>
#include <set>

#include <json.hpp>

#include "coderag/errors.hpp"

namespace coderag {

std::string_view to_string(Technique t) {
  switch (t) {
    case Technique::Bm25: return "bm25";
    case Technique::Semantic: return "semantic";
    case Technique::Hybrid: return "hybrid";
  }
  return "?";
}

std::string_view to_string(QueryMode m) {
  return m == QueryMode::IncompleteContext ? "incomplete-context" : "complete-snippet";
}

Technique parse_technique(std::string_view text) {
  if (text == "bm25") return Technique::Bm25;
  if (text == "semantic") return Technique::Semantic;
  if (text == "hybrid") return Technique::Hybrid;
  throw Error(ErrorCode::UnknownTechnique, "unknown retrieval technique '" + std::string(text) + "'");
}

QueryMode parse_query_mode(std::string_view text) {
  if (text == "incomplete-context" || text == "incomplete") return QueryMode::IncompleteContext;
  if (text == "complete-snippet" || text == "complete") return QueryMode::CompleteSnippet;
  throw Error(ErrorCode::Config, "unknown query mode '" + std::string(text) + "'");
}

RetrievalQuery RetrievalQuery::from_example(QueryMode mode, const std::string& example_id,
                                            const std::string& context, const std::string& ground_truth) {
  RetrievalQuery q;
  q.mode = mode;
  q.example_id = example_id;
  q.text = mode == QueryMode::IncompleteContext ? context : context + ground_truth;
  return q;
}

std::vector<ScoredSnippet> ranked_lexical(const std::vector<LexicalHit>& hits) {
  std::vector<ScoredSnippet> out;
  for (const auto& h : hits) {
    ScoredSnippet s;
    s.doc = h.doc;
    s.technique = Technique::Bm25;
    s.score = h.score;
    s.rank = out.size() + 1;
    s.lexical_score = h.score;
    out.push_back(s);
  }
  return out;
}

std::vector<ScoredSnippet> ranked_semantic(const std::vector<SemanticHit>& hits) {
  std::vector<ScoredSnippet> out;
  for (const auto& h : hits) {
    ScoredSnippet s;
    s.doc = h.doc;
    s.technique = Technique::Semantic;
    s.score = h.score;
    s.rank = out.size() + 1;
    s.semantic_score = h.score;
    out.push_back(s);
  }
  return out;
}

namespace {

std::vector<ScoredSnippet> lexical(const RetrievalQuery& q, std::size_t k, const RetrievalIndices& idx) {
  if (idx.lexical == nullptr) throw Error(ErrorCode::EmptyIndex, "lexical index is not loaded");
  return ranked_lexical(idx.lexical->search(q.text, k));
}

std::vector<ScoredSnippet> semantic(const RetrievalQuery& q, std::size_t k, const RetrievalIndices& idx) {
  if (idx.semantic == nullptr || idx.embedder == nullptr) {
    throw Error(ErrorCode::EmptyIndex, "semantic index is not loaded");
  }
  return ranked_semantic(search_semantic(q.text, k, *idx.semantic, *idx.embedder));
}

}  // namespace

std::vector<ScoredSnippet> retrieve(const RetrievalQuery& query, const RetrievalConfig& cfg,
                                    const RetrievalIndices& indices) {
  if (cfg.k == 0) throw Error(ErrorCode::Config, "k must be at least 1");
  switch (cfg.technique) {
    case Technique::Bm25: return lexical(query, cfg.k, indices);
    case Technique::Semantic: return semantic(query, cfg.k, indices);
    case Technique::Hybrid:
      return hybrid_merge(lexical(query, cfg.k, indices), semantic(query, cfg.k, indices), cfg.k);
  }
  throw Error(ErrorCode::UnknownTechnique, "unknown retrieval technique");
}

std::vector<ScoredSnippet> hybrid_merge(const std::vector<ScoredSnippet>& lex,
                                        const std::vector<ScoredSnippet>& sem, std::size_t k) {
  std::vector<ScoredSnippet> out;
  std::set<DocId> taken;
  auto find_in = [](const std::vector<ScoredSnippet>& list, DocId doc) -> const ScoredSnippet* {
    for (const auto& s : list) {
      if (s.doc == doc) return &s;
    }
    return nullptr;
  };
  auto take = [&](const ScoredSnippet& s) {
    if (out.size() >= k || !taken.insert(s.doc).second) return;
    ScoredSnippet merged = s;
    merged.technique = Technique::Hybrid;
    merged.rank = out.size() + 1;
    if (const auto* l = find_in(lex, s.doc)) merged.lexical_score = l->lexical_score ? l->lexical_score : l->score;
    if (const auto* m = find_in(sem, s.doc)) merged.semantic_score = m->semantic_score ? m->semantic_score : m->score;
    out.push_back(merged);
  };
  for (std::size_t i = 0; out.size() < k && (i < lex.size() || i < sem.size()); ++i) {
    if (i < lex.size()) take(lex[i]);
    if (i < sem.size()) take(sem[i]);
  }
  return out;
}

std::string to_json_line(const RetrievalRecord& record) {
  nlohmann::ordered_json doc;
  doc["example_id"] = record.example_id;
  doc["technique"] = std::string(to_string(record.technique));
  doc["mode"] = std::string(to_string(record.mode));
  doc["k"] = record.k;
  nlohmann::ordered_json hits = nlohmann::ordered_json::array();
  for (const auto& [doc_id, score] : record.hits) hits.push_back({doc_id, score});
  doc["hits"] = std::move(hits);
  return doc.dump();
}

RetrievalRecord retrieval_record_from_json_line(std::string_view line, std::size_t line_no) {
  const std::string where = "line " + std::to_string(line_no) + ": ";
  try {
    const auto doc = nlohmann::json::parse(line);
    RetrievalRecord r;
    r.example_id = doc.at("example_id").get<std::string>();
    r.technique = parse_technique(doc.at("technique").get<std::string>());
    r.mode = parse_query_mode(doc.at("mode").get<std::string>());
    r.k = doc.at("k").get<std::size_t>();
    for (const auto& h : doc.at("hits")) r.hits.emplace_back(h.at(0).get<DocId>(), h.at(1).get<double>());
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::Schema, where + e.what());
  } catch (const Error& e) {
    throw Error(ErrorCode::Schema, where + e.message());
  }
}

std::vector<RetrievalRecord> parse_retrieval_records(std::string_view content) {
  std::vector<RetrievalRecord> out;
  std::size_t line_no = 0;
  std::size_t begin = 0;
  while (begin < content.size()) {
    auto end = content.find('\n', begin);
    if (end == std::string_view::npos) end = content.size();
    ++line_no;
    const auto line = content.substr(begin, end - begin);
    if (line.find_first_not_of(" \t\r") != std::string_view::npos) {
      out.push_back(retrieval_record_from_json_line(line, line_no));
    }
    begin = end + 1;
  }
  return out;
}

OverlapReport overlap_analysis(const std::vector<RetrievalRecord>& run_a,
                               const std::vector<RetrievalRecord>& run_b) {
  auto index = [](const std::vector<RetrievalRecord>& run, const char* name) {
    std::map<std::string, const RetrievalRecord*> out;
    for (const auto& r : run) {
      if (!out.emplace(r.example_id, &r).second) {
        throw Error(ErrorCode::ExampleSetMismatch,
                    std::string("run ") + name + " lists example " + r.example_id + " twice");
      }
    }
    return out;
  };
  const auto a = index(run_a, "A");
  const auto b = index(run_b, "B");
  if (a.size() != b.size() ||
      !std::equal(a.begin(), a.end(), b.begin(), [](const auto& x, const auto& y) { return x.first == y.first; })) {
    throw Error(ErrorCode::ExampleSetMismatch, "runs cover different example ids");
  }
  OverlapReport report;
  for (const auto& [id, ra] : a) {
    const RetrievalRecord* rb = b.at(id);
    if (ra->k != rb->k) throw Error(ErrorCode::ExampleSetMismatch, "runs use different k for example " + id);
    std::set<DocId> da, db;
    for (const auto& h : ra->hits) da.insert(h.first);
    for (const auto& h : rb->hits) db.insert(h.first);
    std::size_t common = 0;
    for (DocId d : da) common += db.count(d);
    report.overlaps[id] = common;
    if (common == 0) ++report.distinct_count;
  }
  return report;
}

}  // namespace coderag
