#pragma once

#include <atomic>
#include <chrono>
#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "coderag/embedding.hpp"
#include "coderag/http_util.hpp"

namespace coderag {

enum class EmbedderKind { BuiltinHash, Remote };

struct EmbedderSpec {
  EmbedderKind kind = EmbedderKind::BuiltinHash;
  std::size_t dim = 4096;      // builtin only
  std::size_t order = 3;       // builtin only: token n-gram orders 1..order
  std::size_t char_cap = 8000; // inputs longer than this (in code points) are cut
  std::string endpoint;        // remote only
  std::string model;           // remote only
  std::string token_env = "CODERAG_EMBED_TOKEN";
  std::size_t batch_size = 16;
  std::size_t max_in_flight = 8;
  std::chrono::milliseconds timeout{30000};
  int max_retries = 3;

  /// Identity of the vector space. Stores built under one fingerprint
  /// refuse queries under another.
  std::string fingerprint() const;
};

/// Cuts `text` after `cap` UTF-8 code points. Returns whether it was cut.
bool truncate_code_points(std::string& text, std::size_t cap);

class Embedder {
 public:
  virtual ~Embedder() = default;
  virtual std::string fingerprint() const = 0;
  /// One normalized embedding per input, in input order.
  virtual std::vector<Embedding> embed_batch(const std::vector<std::string>& texts) = 0;
  Embedding embed(const std::string& text);
  /// Inputs cut to the character cap so far.
  std::size_t truncated_inputs() const { return truncated_; }

 protected:
  std::atomic<std::size_t> truncated_{0};
};

/// Deterministic offline embedder: hashed token n-gram counts, L2-normalized.
class BuiltinHashEmbedder : public Embedder {
 public:
  explicit BuiltinHashEmbedder(EmbedderSpec spec = {});

  std::string fingerprint() const override { return spec_.fingerprint(); }
  std::vector<Embedding> embed_batch(const std::vector<std::string>& texts) override;

  /// Raw bucket counts before normalization, keyed by bucket.
  std::map<std::size_t, double> features(std::string_view text) const;
  std::size_t bucket(const std::vector<std::string>& ngram) const;

 private:
  Embedding embed_one(const std::string& text);

  EmbedderSpec spec_;
};

/// Client for an embeddings endpoint taking {model, input: [...]} and
/// answering {data: [{embedding: [...]}, ...]}.
class RemoteEmbedder : public Embedder {
 public:
  RemoteEmbedder(EmbedderSpec spec, std::shared_ptr<HttpTransport> transport,
                 RetryPolicy retry = {});

  std::string fingerprint() const override { return spec_.fingerprint(); }
  std::vector<Embedding> embed_batch(const std::vector<std::string>& texts) override;

 private:
  std::vector<Embedding> request(const std::vector<std::string>& texts);

  EmbedderSpec spec_;
  HttpUrl url_;
  std::shared_ptr<HttpTransport> transport_;
  RetryPolicy retry_;
};

std::unique_ptr<Embedder> make_embedder(const EmbedderSpec& spec,
                                        std::shared_ptr<HttpTransport> transport = nullptr);

}  // namespace coderag
