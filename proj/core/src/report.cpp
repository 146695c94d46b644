#include "coderag/report.hpp"

#include <cstdio>
#include <set>

#include <json.hpp>

#include "coderag/errors.hpp"
#include "coderag/hash.hpp"

namespace coderag {

std::string config_snapshot(const PipelineConfig& config, const std::string& model, const std::string& corpus_hash,
                            const std::string& benchmark_hash) {
  nlohmann::ordered_json doc;
  doc["technique"] = config.technique.name();
  doc["mode"] = std::string(to_string(config.mode));
  doc["model"] = model;
  doc["k"] = config.k;
  doc["budget"] = config.budget;
  doc["token_counter"] = config.token_counter;
  doc["template_language"] = std::string(to_string(config.language));
  nlohmann::ordered_json custom = nlohmann::ordered_json::object();
  for (const auto& [id, t] : config.templates) custom[std::string(to_string(id))] = content_hash(t.body);
  doc["custom_templates"] = std::move(custom);
  doc["weights"] = {{"alpha", config.weights.alpha},
                    {"beta", config.weights.beta},
                    {"gamma", config.weights.gamma},
                    {"delta", config.weights.delta}};
  doc["keyword_weight"] = config.metric_options.keyword_weight;
  doc["max_n"] = config.metric_options.max_n;
  doc["fusion_policy"] = std::string(kFusionPolicy);
  doc["annotations"] = config.include_annotations;
  doc["corpus_hash"] = corpus_hash;
  doc["benchmark_hash"] = benchmark_hash;
  return doc.dump();
}

Aggregate mean_of(const std::vector<const ExampleScore*>& scores) {
  Aggregate a;
  a.count = scores.size();
  if (scores.empty()) return a;
  double cb = 0.0, es = 0.0;
  for (const auto* s : scores) {
    cb += s->scores.codebleu;
    es += s->scores.es;
  }
  a.codebleu_raw = cb / static_cast<double>(scores.size());
  a.es_raw = es / static_cast<double>(scores.size());
  a.codebleu = a.codebleu_raw * 100.0;
  a.es = a.es_raw * 100.0;
  return a;
}

RunReport aggregate_report(const PipelineRun& run, const std::vector<BenchmarkExample>& benchmark,
                           const std::string& corpus_hash) {
  if (run.results.empty()) throw Error(ErrorCode::CoverageGap, "no scored examples");
  std::map<std::string, const ExampleResult*> by_id;
  for (const auto& r : run.results) by_id[r.example_id] = &r;
  std::vector<std::string> missing;
  std::string bench_text;
  for (const auto& ex : benchmark) {
    if (!by_id.contains(ex.id)) missing.push_back(ex.id);
    bench_text += to_json_line(ex) + "\n";
  }
  if (!missing.empty()) {
    std::string list;
    for (const auto& m : missing) list += (list.empty() ? "" : ", ") + m;
    throw Error(ErrorCode::CoverageGap, "no scores for: " + list);
  }

  RunReport report;
  report.model = run.model;
  report.technique = run.technique;
  report.mode = run.mode;
  report.config_json = config_snapshot(run.config, run.model, corpus_hash, content_hash(bench_text));
  report.run_id = to_hex(fnv1a64(report.config_json));
  for (const auto& ex : benchmark) {
    const ExampleResult& r = *by_id.at(ex.id);
    ExampleScore s;
    s.id = ex.id;
    s.domain = ex.domain;
    s.difficulty = ex.difficulty;
    s.scores = r.scores;
    s.token_count = r.record.token_count;
    s.snippet_count = r.snippet_count;
    s.provenance = r.record.provenance;
    s.generated_code = r.record.generated_code;
    s.failed = r.failed;
    s.error = r.error;
    s.flags = r.flags;
    report.examples.push_back(std::move(s));
  }
  std::vector<const ExampleScore*> all;
  std::map<std::string, std::vector<const ExampleScore*>> dom, diff;
  for (const auto& s : report.examples) {
    all.push_back(&s);
    dom[std::string(to_string(s.domain))].push_back(&s);
    diff[std::string(to_string(s.difficulty))].push_back(&s);
  }
  report.overall = mean_of(all);
  for (const auto& [k, v] : dom) report.by_domain[k] = mean_of(v);
  for (const auto& [k, v] : diff) report.by_difficulty[k] = mean_of(v);
  return report;
}

namespace {

nlohmann::ordered_json aggregate_json(const Aggregate& a) {
  nlohmann::ordered_json j;
  j["count"] = a.count;
  j["codebleu"] = a.codebleu;
  j["es"] = a.es;
  j["codebleu_raw"] = a.codebleu_raw;
  j["es_raw"] = a.es_raw;
  return j;
}

Aggregate aggregate_from(const nlohmann::ordered_json& j) {
  Aggregate a;
  a.count = j.at("count").get<std::size_t>();
  a.codebleu = j.at("codebleu").get<double>();
  a.es = j.at("es").get<double>();
  a.codebleu_raw = j.at("codebleu_raw").get<double>();
  a.es_raw = j.at("es_raw").get<double>();
  return a;
}

}  // namespace

std::string render_json(const RunReport& report) {
  nlohmann::ordered_json doc;
  doc["format"] = "coderag-report-v1";
  doc["run_id"] = report.run_id;
  doc["model"] = report.model;
  doc["technique"] = report.technique;
  doc["mode"] = report.mode;
  doc["config"] = nlohmann::ordered_json::parse(report.config_json);
  doc["overall"] = aggregate_json(report.overall);
  nlohmann::ordered_json dom = nlohmann::ordered_json::object();
  for (const auto& [k, v] : report.by_domain) dom[k] = aggregate_json(v);
  doc["by_domain"] = std::move(dom);
  nlohmann::ordered_json diff = nlohmann::ordered_json::object();
  for (const auto& [k, v] : report.by_difficulty) diff[k] = aggregate_json(v);
  doc["by_difficulty"] = std::move(diff);
  nlohmann::ordered_json examples = nlohmann::ordered_json::array();
  for (const auto& s : report.examples) {
    nlohmann::ordered_json e;
    e["id"] = s.id;
    e["domain"] = std::string(to_string(s.domain));
    e["difficulty"] = std::string(to_string(s.difficulty));
    e["codebleu"] = s.scores.codebleu;
    e["es"] = s.scores.es;
    e["components"] = {{"ngram", s.scores.components.ngram},
                       {"weighted_ngram", s.scores.components.weighted_ngram},
                       {"ast", s.scores.components.ast},
                       {"dataflow", s.scores.components.dataflow}};
    e["token_count"] = s.token_count;
    e["snippet_count"] = s.snippet_count;
    e["provenance"] = s.provenance;
    e["generated_code"] = s.generated_code;
    e["failed"] = s.failed;
    e["error"] = s.error;
    e["flags"] = s.flags;
    examples.push_back(std::move(e));
  }
  doc["examples"] = std::move(examples);
  return doc.dump(2) + "\n";
}

RunReport parse_report(std::string_view json) {
  RunReport r;
  try {
    const auto doc = nlohmann::ordered_json::parse(json);
    if (doc.at("format") != "coderag-report-v1") throw Error(ErrorCode::Schema, "not a run report");
    r.run_id = doc.at("run_id").get<std::string>();
    r.model = doc.at("model").get<std::string>();
    r.technique = doc.at("technique").get<std::string>();
    r.mode = doc.at("mode").get<std::string>();
    r.config_json = doc.at("config").dump();
    r.overall = aggregate_from(doc.at("overall"));
    for (const auto& [k, v] : doc.at("by_domain").items()) r.by_domain[k] = aggregate_from(v);
    for (const auto& [k, v] : doc.at("by_difficulty").items()) r.by_difficulty[k] = aggregate_from(v);
    for (const auto& e : doc.at("examples")) {
      ExampleScore s;
      s.id = e.at("id").get<std::string>();
      const auto d = parse_domain(e.at("domain").get<std::string>());
      const auto df = parse_difficulty(e.at("difficulty").get<std::string>());
      if (!d || !df) throw Error(ErrorCode::Schema, "bad domain or difficulty in report");
      s.domain = *d;
      s.difficulty = *df;
      s.scores.codebleu = e.at("codebleu").get<double>();
      s.scores.es = e.at("es").get<double>();
      const auto& c = e.at("components");
      s.scores.components = EvalComponents{c.at("ngram").get<double>(), c.at("weighted_ngram").get<double>(),
                                           c.at("ast").get<double>(), c.at("dataflow").get<double>()};
      s.token_count = e.at("token_count").get<std::size_t>();
      s.snippet_count = e.at("snippet_count").get<std::size_t>();
      s.provenance = e.at("provenance").get<std::vector<DocId>>();
      s.generated_code = e.at("generated_code").get<std::string>();
      s.failed = e.at("failed").get<bool>();
      s.error = e.at("error").get<std::string>();
      s.flags = e.at("flags").get<std::vector<std::string>>();
      r.examples.push_back(std::move(s));
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::Schema, std::string("run report: ") + e.what());
  }
  return r;
}

namespace {

std::string fmt2(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string fmt4(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4f", v);
  return buf;
}

std::string pad(std::string s, std::size_t width) {
  if (s.size() < width) s.append(width - s.size(), ' ');
  return s;
}

std::string lpad(std::string s, std::size_t width) {
  if (s.size() < width) s.insert(0, width - s.size(), ' ');
  return s;
}

}  // namespace

std::string render_text(const std::vector<RunReport>& reports) {
  std::size_t w = 10;
  std::size_t mw = 13;
  for (const auto& r : reports) {
    w = std::max(w, r.technique.size() + r.mode.size() + 3);
    mw = std::max(mw, r.model.size());
  }
  mw += 2;
  std::string out;
  out += pad("model", mw) + pad("technique (mode)", w + 2) + lpad("CB", 8) + lpad("ES", 8) + lpad("CB raw", 9) +
         lpad("ES raw", 9) + lpad("n", 5) + "\n";
  for (const auto& r : reports) {
    out += pad(r.model, mw) + pad(r.technique + " (" + r.mode + ")", w + 2) + lpad(fmt2(r.overall.codebleu), 8) +
           lpad(fmt2(r.overall.es), 8) + lpad(fmt4(r.overall.codebleu_raw), 9) + lpad(fmt4(r.overall.es_raw), 9) +
           lpad(std::to_string(r.overall.count), 5) + "\n";
  }
  std::set<std::string> domains, difficulties;
  for (const auto& r : reports) {
    for (const auto& [k, v] : r.by_domain) domains.insert(k);
    for (const auto& [k, v] : r.by_difficulty) difficulties.insert(k);
  }
  auto breakdown = [&](const char* title, const std::set<std::string>& keys,
                       std::map<std::string, Aggregate> RunReport::*member) {
    out += "\n" + pad(title, mw) + pad("technique (mode)", w + 2);
    for (const auto& k : keys) out += lpad(k + " CB/ES", 20);
    out += "\n";
    for (const auto& r : reports) {
      out += pad("", mw) + pad(r.technique + " (" + r.mode + ")", w + 2);
      for (const auto& k : keys) {
        const auto& m = r.*member;
        const auto it = m.find(k);
        out += lpad(it == m.end() ? "-" : fmt2(it->second.codebleu) + "/" + fmt2(it->second.es), 20);
      }
      out += "\n";
    }
  };
  breakdown("by domain", domains, &RunReport::by_domain);
  breakdown("by difficulty", difficulties, &RunReport::by_difficulty);
  return out;
}

std::string render_records(const PipelineRun& run) {
  std::string out;
  for (const auto& r : run.results) {
    nlohmann::ordered_json j;
    j["example_id"] = r.example_id;
    j["technique"] = run.technique;
    j["mode"] = run.mode;
    j["template"] = r.record.template_id;
    j["token_count"] = r.record.token_count;
    j["provenance"] = r.record.provenance;
    nlohmann::ordered_json hits = nlohmann::ordered_json::array();
    for (const auto& [doc, score] : r.retrieved) hits.push_back({doc, score});
    j["retrieved"] = std::move(hits);
    j["generated_code"] = r.record.generated_code;
    j["model"] = run.model;
    j["latency_ms"] = r.record.latency_ms;
    j["response_id"] = r.record.response_id;
    j["retries"] = r.record.retries;
    j["failed"] = r.failed;
    j["error"] = r.error;
    out += j.dump() + "\n";
  }
  return out;
}

}  // namespace coderag
