#include "coderag/service.hpp"

#include <algorithm>
#include <csignal>
#include <thread>

#include <httplib.h>
#include <json.hpp>

#include "coderag/errors.hpp"

namespace coderag {

namespace {

using nlohmann::ordered_json;

ServiceResponse reply(int status, const ordered_json& body) { return {status, body.dump()}; }

ServiceResponse error_reply(int status, std::string_view code, const std::string& message) {
  ordered_json body;
  body["error"] = std::string(code);
  body["message"] = message;
  return reply(status, body);
}

ServiceResponse map_error(const Error& e) {
  switch (e.code()) {
    case ErrorCode::EmptyIndex:
    case ErrorCode::StaleIndex:
    case ErrorCode::FingerprintMismatch:
      return error_reply(503, to_string(e.code()), e.what());
    case ErrorCode::LlmHttp:
    case ErrorCode::Timeout:
    case ErrorCode::LlmUnavailable:
    case ErrorCode::EmbeddingService: {
      ordered_json body;
      body["error"] = std::string(to_string(e.code()));
      body["message"] = e.what();
      if (const auto* h = dynamic_cast<const HttpError*>(&e)) {
        body["upstream_status"] = h->status();
        body["upstream_body"] = h->body_excerpt();
      } else {
        body["upstream_status"] = nullptr;
      }
      return reply(502, body);
    }
    default:
      return error_reply(400, to_string(e.code()), e.what());
  }
}

nlohmann::json parse_body(std::string_view body) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(body);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::Schema, std::string("request body is not JSON: ") + e.what());
  }
  if (!doc.is_object()) throw Error(ErrorCode::Schema, "request body must be an object");
  return doc;
}

std::string required_string(const nlohmann::json& doc, const char* field) {
  const auto it = doc.find(field);
  if (it == doc.end() || !it->is_string() || it->get<std::string>().empty()) {
    throw Error(ErrorCode::Schema, std::string("field '") + field + "' must be a non-empty string");
  }
  return it->get<std::string>();
}

std::optional<std::string> optional_string(const nlohmann::json& doc, const char* field) {
  const auto it = doc.find(field);
  if (it == doc.end() || it->is_null()) return std::nullopt;
  if (!it->is_string()) throw Error(ErrorCode::Schema, std::string("field '") + field + "' must be a string");
  return it->get<std::string>();
}

std::size_t read_k(const nlohmann::json& doc, std::size_t fallback) {
  const auto it = doc.find("k");
  if (it == doc.end() || it->is_null()) return fallback;
  if (!it->is_number_integer() || it->get<long long>() < 1) {
    throw Error(ErrorCode::Schema, "field 'k' must be a positive integer");
  }
  return it->get<std::size_t>();
}

ordered_json snippet_json(const ScoredSnippet& s, const Corpus& corpus) {
  ordered_json j;
  j["doc"] = s.doc;
  j["rank"] = s.rank;
  j["technique"] = std::string(to_string(s.technique));
  j["score"] = s.score;
  j["lexical_score"] = s.lexical_score ? ordered_json(*s.lexical_score) : ordered_json(nullptr);
  j["semantic_score"] = s.semantic_score ? ordered_json(*s.semantic_score) : ordered_json(nullptr);
  const CodeUnit& unit = corpus.at(s.doc);
  j["kind"] = std::string(to_string(unit.kind));
  j["qualified_name"] = unit.qualified_name;
  j["path"] = unit.origin.path;
  j["project"] = unit.origin.project;
  j["text"] = unit.text;
  return j;
}

}  // namespace

ServiceResponse ServiceCore::healthz() const {
  ordered_json body;
  body["status"] = "ok";
  body["corpus_units"] = res_.corpus != nullptr ? res_.corpus->size() : 0;
  body["identifier"] = res_.identifier != nullptr;
  body["lexical"] = res_.lexical != nullptr;
  body["semantic"] = res_.semantic != nullptr;
  body["llm"] = res_.chat != nullptr ? res_.chat->model() : std::string();
  try {
    body["manifest"] = ordered_json::parse(res_.manifest);
  } catch (const nlohmann::json::exception&) {
    body["manifest"] = nullptr;
  }
  return reply(200, body);
}

ServiceResponse ServiceCore::retrieve(std::string_view raw) const {
  try {
    const auto doc = parse_body(raw);
    const std::string query_text = required_string(doc, "query");
    const std::string technique_name = required_string(doc, "technique");
    const auto spec = TechniqueSpec::parse(technique_name);
    if (spec.family != TechniqueSpec::Family::Similarity) {
      throw Error(ErrorCode::Schema, "technique '" + technique_name + "' does not retrieve snippets");
    }
    const auto mode_text = optional_string(doc, "mode");
    const QueryMode mode = mode_text ? parse_query_mode(*mode_text) : res_.config.mode;
    const std::size_t k = read_k(doc, res_.config.k);

    RetrievalQuery query;
    query.mode = mode;
    query.text = query_text;
    const RetrievalIndices idx{res_.corpus, res_.lexical, res_.semantic, res_.embedder};
    const auto hits = coderag::retrieve(query, RetrievalConfig{k, spec.retrieval}, idx);

    ordered_json body;
    body["technique"] = spec.name();
    body["mode"] = std::string(to_string(mode));
    body["k"] = k;
    ordered_json list = ordered_json::array();
    for (const auto& h : hits) list.push_back(snippet_json(h, *res_.corpus));
    body["hits"] = std::move(list);
    return reply(200, body);
  } catch (const Error& e) {
    return map_error(e);
  } catch (const std::exception& e) {
    return error_reply(500, "internal", e.what());
  }
}

ServiceResponse ServiceCore::complete(std::string_view raw) const {
  try {
    const auto doc = parse_body(raw);
    BenchmarkExample example;
    example.id = "request";
    example.context = required_string(doc, "context");

    PipelineConfig config = res_.config;
    if (const auto t = optional_string(doc, "technique")) config.technique = TechniqueSpec::parse(*t);
    if (const auto m = optional_string(doc, "mode")) config.mode = parse_query_mode(*m);
    config.k = read_k(doc, config.k);
    if (res_.chat == nullptr) throw Error(ErrorCode::LlmUnavailable, "no completion model configured");

    const PipelineIndices idx{res_.corpus, res_.identifier, res_.lexical, res_.semantic, res_.embedder, res_.lookup};
    require_indices(config, idx);
    const PreparedPrompt prepared = prepare_prompt(example, config, idx);
    const CompletionRecord record = coderag::complete(prepared.bundle, *res_.chat, example.id);

    ordered_json body;
    body["generated_code"] = record.generated_code;
    ordered_json provenance = ordered_json::array();
    for (const auto& [d, score] : prepared.retrieved) {
      if (std::find(record.provenance.begin(), record.provenance.end(), d) == record.provenance.end()) continue;
      ordered_json p;
      p["doc"] = d;
      p["score"] = score;
      const CodeUnit& unit = res_.corpus->at(d);
      p["kind"] = std::string(to_string(unit.kind));
      p["qualified_name"] = unit.qualified_name;
      p["path"] = unit.origin.path;
      provenance.push_back(std::move(p));
    }
    body["provenance"] = std::move(provenance);
    body["technique"] = config.technique.name();
    body["template"] = record.template_id;
    body["token_count"] = record.token_count;
    body["model"] = record.model;
    body["response_id"] = record.response_id;
    body["flags"] = prepared.flags;
    return reply(200, body);
  } catch (const Error& e) {
    return map_error(e);
  } catch (const std::exception& e) {
    return error_reply(500, "internal", e.what());
  }
}

bool ServiceCore::authorized(std::string_view header) const {
  if (res_.bearer_token.empty()) return true;
  constexpr std::string_view kPrefix = "Bearer ";
  return header.starts_with(kPrefix) && header.substr(kPrefix.size()) == res_.bearer_token;
}

Service::Service(std::shared_ptr<const ServiceCore> core)
    : core_(std::move(core)), server_(std::make_unique<httplib::Server>()) {
  auto send = [](httplib::Response& out, const ServiceResponse& r) {
    out.status = r.status;
    out.set_content(r.body, "application/json");
  };
  auto guard = [this, send](const httplib::Request& req, httplib::Response& out) {
    if (core_->authorized(req.get_header_value("Authorization"))) return true;
    send(out, ServiceResponse{401, R"({"error":"Unauthorized","message":"missing or wrong bearer token"})"});
    return false;
  };
  server_->Get("/healthz", [this, send](const httplib::Request&, httplib::Response& out) {
    send(out, core_->healthz());
  });
  server_->Post("/retrieve", [this, send, guard](const httplib::Request& req, httplib::Response& out) {
    if (guard(req, out)) send(out, core_->retrieve(req.body));
  });
  server_->Post("/complete", [this, send, guard](const httplib::Request& req, httplib::Response& out) {
    if (guard(req, out)) send(out, core_->complete(req.body));
  });
}

Service::~Service() = default;

int Service::bind(const std::string& host, int port) {
  if (port == 0) return server_->bind_to_any_port(host);
  return server_->bind_to_port(host, port) ? port : -1;
}

void Service::run() { server_->listen_after_bind(); }

void Service::stop() { server_->stop(); }

namespace {

std::atomic<bool> g_stop{false};

extern "C" void on_signal(int) { g_stop = true; }

}  // namespace

bool serve_until_signal(std::shared_ptr<const ServiceCore> core, const std::string& host, int port,
                        const std::function<void(int)>& on_bound) {
  Service service(std::move(core));
  const int bound = service.bind(host, port);
  if (bound < 0) return false;
  if (on_bound) on_bound(bound);
  g_stop = false;
  auto* old_int = std::signal(SIGINT, on_signal);
  auto* old_term = std::signal(SIGTERM, on_signal);
  std::thread watcher([&] {
    while (!g_stop) std::this_thread::sleep_for(std::chrono::milliseconds(100));
    service.stop();
  });
  service.run();
  g_stop = true;
  watcher.join();
  std::signal(SIGINT, old_int);
  std::signal(SIGTERM, old_term);
  return true;
}

}  // namespace coderag
