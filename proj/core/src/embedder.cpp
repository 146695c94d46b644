#include "coderag/embedder.hpp"

#include <future>
#include <mutex>
#include <thread>

#include <json.hpp>

#include "coderag/errors.hpp"
#include "coderag/hash.hpp"
#include "coderag/tokenizer.hpp"
#include "coderag/utf8.hpp"

namespace coderag {

std::string EmbedderSpec::fingerprint() const {
  if (kind == EmbedderKind::BuiltinHash) {
    return "builtin-hash:v1:dim=" + std::to_string(dim) + ":order=" + std::to_string(order) +
           ":cap=" + std::to_string(char_cap);
  }
  return "remote:model=" + model + ":endpoint=" + endpoint + ":cap=" + std::to_string(char_cap);
}

bool truncate_code_points(std::string& text, std::size_t cap) {
  std::size_t pos = 0;
  for (std::size_t count = 0; pos < text.size(); ++count) {
    if (count == cap) {
      text.resize(pos);
      return true;
    }
    pos += utf8_sequence_length(static_cast<unsigned char>(text[pos]));
  }
  return false;
}

Embedding Embedder::embed(const std::string& text) { return embed_batch({text}).at(0); }

// ---- builtin -----------------------------------------------------------------

BuiltinHashEmbedder::BuiltinHashEmbedder(EmbedderSpec spec) : spec_(std::move(spec)) {
  spec_.kind = EmbedderKind::BuiltinHash;
  if (spec_.dim == 0 || spec_.order == 0) {
    throw Error(ErrorCode::Config, "builtin embedder needs dim >= 1 and order >= 1");
  }
}

std::size_t BuiltinHashEmbedder::bucket(const std::vector<std::string>& ngram) const {
  std::string key = std::to_string(ngram.size());
  for (const auto& t : ngram) {
    key += '\x1f';
    key += t;
  }
  return static_cast<std::size_t>(fnv1a64(key) % spec_.dim);
}

std::map<std::size_t, double> BuiltinHashEmbedder::features(std::string_view text) const {
  std::string cut(text);
  truncate_code_points(cut, spec_.char_cap);
  const auto tokens = tokenize_code(cut);
  std::map<std::size_t, double> out;
  for (std::size_t n = 1; n <= spec_.order; ++n) {
    for (std::size_t i = 0; i + n <= tokens.size(); ++i) {
      out[bucket({tokens.begin() + static_cast<std::ptrdiff_t>(i),
                  tokens.begin() + static_cast<std::ptrdiff_t>(i + n)})] += 1.0;
    }
  }
  return out;
}

Embedding BuiltinHashEmbedder::embed_one(const std::string& text) {
  std::string cut = text;
  if (truncate_code_points(cut, spec_.char_cap)) ++truncated_;
  const auto feats = features(cut);
  if (feats.empty()) throw Error(ErrorCode::EmptyInput, "no tokens to embed");
  std::vector<double> raw(spec_.dim, 0.0);
  for (const auto& [b, count] : feats) raw[b] = count;
  return normalized(std::move(raw));
}

std::vector<Embedding> BuiltinHashEmbedder::embed_batch(const std::vector<std::string>& texts) {
  std::vector<Embedding> out;
  out.reserve(texts.size());
  for (const auto& t : texts) out.push_back(embed_one(t));
  return out;
}

// ---- remote ------------------------------------------------------------------

RemoteEmbedder::RemoteEmbedder(EmbedderSpec spec, std::shared_ptr<HttpTransport> transport,
                               RetryPolicy retry)
    : spec_(std::move(spec)), transport_(std::move(transport)), retry_(std::move(retry)) {
  spec_.kind = EmbedderKind::Remote;
  if (spec_.model.empty()) throw Error(ErrorCode::Config, "remote embedder needs a model name");
  url_ = parse_http_url(spec_.endpoint);
  if (!transport_) transport_ = std::make_shared<DefaultHttpTransport>();
  if (spec_.batch_size == 0) spec_.batch_size = 1;
  if (spec_.max_in_flight == 0) spec_.max_in_flight = 1;
  retry_.max_retries = spec_.max_retries;
  if (!retry_.sleep) retry_.sleep = [](std::chrono::milliseconds d) { std::this_thread::sleep_for(d); };
}

std::vector<Embedding> RemoteEmbedder::request(const std::vector<std::string>& texts) {
  nlohmann::json body = {{"model", spec_.model}, {"input", texts}};
  const std::string payload = body.dump();
  const std::string token = env_or_empty(spec_.token_env);
  for (int attempt = 0;; ++attempt) {
    HttpResult res = transport_->post_json(url_, payload, token, spec_.timeout);
    if (res.status == 200) {
      try {
        const auto doc = nlohmann::json::parse(res.body);
        const auto& data = doc.at("data");
        if (data.size() != texts.size()) {
          throw HttpError(ErrorCode::EmbeddingService, 200, body_excerpt(res.body),
                          "expected " + std::to_string(texts.size()) + " embeddings, got " +
                              std::to_string(data.size()));
        }
        std::vector<Embedding> out;
        for (const auto& item : data) out.push_back(normalized(item.at("embedding").get<std::vector<double>>()));
        return out;
      } catch (const nlohmann::json::exception& e) {
        throw HttpError(ErrorCode::EmbeddingService, 200, body_excerpt(res.body),
                        std::string("malformed embedding response: ") + e.what());
      }
    }
    const bool retryable = res.status == 0 || is_retryable_status(res.status);
    if (!retryable || attempt >= retry_.max_retries) {
      const std::string reason =
          res.status == 0 ? "transport failure: " + res.transport_error : "status " + std::to_string(res.status);
      throw HttpError(ErrorCode::EmbeddingService, res.status, body_excerpt(res.body),
                      "embedding request failed after " + std::to_string(attempt + 1) + " attempt(s), " + reason);
    }
    retry_.sleep(retry_delay(retry_, attempt, res.retry_after_seconds));
  }
}

std::vector<Embedding> RemoteEmbedder::embed_batch(const std::vector<std::string>& texts) {
  std::vector<std::string> cut = texts;
  for (auto& t : cut) {
    if (t.empty()) throw Error(ErrorCode::EmptyInput, "empty text to embed");
    if (truncate_code_points(t, spec_.char_cap)) ++truncated_;
  }
  std::vector<std::vector<std::string>> batches;
  for (std::size_t i = 0; i < cut.size(); i += spec_.batch_size) {
    const auto end = std::min(cut.size(), i + spec_.batch_size);
    batches.emplace_back(cut.begin() + static_cast<std::ptrdiff_t>(i), cut.begin() + static_cast<std::ptrdiff_t>(end));
  }
  std::vector<std::vector<Embedding>> results(batches.size());
  for (std::size_t start = 0; start < batches.size(); start += spec_.max_in_flight) {
    const auto end = std::min(batches.size(), start + spec_.max_in_flight);
    std::vector<std::future<std::vector<Embedding>>> inflight;
    for (std::size_t b = start; b < end; ++b) {
      inflight.push_back(std::async(std::launch::async, [this, &batches, b] { return request(batches[b]); }));
    }
    for (std::size_t b = start; b < end; ++b) results[b] = inflight[b - start].get();
  }
  std::vector<Embedding> out;
  out.reserve(texts.size());
  for (auto& r : results) std::move(r.begin(), r.end(), std::back_inserter(out));
  if (!out.empty()) {
    for (const auto& e : out) {
      if (e.dim() != out.front().dim()) throw Error(ErrorCode::DimensionMismatch, "embedding service returned mixed dimensions");
    }
  }
  return out;
}

std::unique_ptr<Embedder> make_embedder(const EmbedderSpec& spec, std::shared_ptr<HttpTransport> transport) {
  if (spec.kind == EmbedderKind::BuiltinHash) return std::make_unique<BuiltinHashEmbedder>(spec);
  return std::make_unique<RemoteEmbedder>(spec, std::move(transport));
}

}  // namespace coderag
