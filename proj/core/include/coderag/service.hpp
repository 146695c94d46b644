#pragma once

#include <atomic>
#include <functional>
#include <memory>
#include <string>
#include <string_view>

#include "coderag/pipeline.hpp"

namespace httplib {
class Server;
}

namespace coderag {

/// Indices and clients the service answers from. Everything borrowed
/// here must outlive the service and is only read.
struct ServiceResources {
  const Corpus* corpus = nullptr;
  const IdentifierIndex* identifier = nullptr;
  const LexicalIndex* lexical = nullptr;
  const VectorStore* semantic = nullptr;
  Embedder* embedder = nullptr;
  ChatClient* chat = nullptr;
  ChatClient* lookup = nullptr;
  PipelineConfig config;       // defaults for fields a request omits
  std::string manifest = "{}";  // index manifest, reported by /healthz
  std::string bearer_token;    // empty = no auth check
};

struct ServiceResponse {
  int status = 200;
  std::string body;  // JSON
};

/// Request handling without the network layer.
class ServiceCore {
 public:
  explicit ServiceCore(ServiceResources resources) : res_(std::move(resources)) {}

  ServiceResponse healthz() const;
  /// POST /retrieve {query, technique, mode?, k?}
  ServiceResponse retrieve(std::string_view body) const;
  /// POST /complete {context, technique?, mode?, k?}
  ServiceResponse complete(std::string_view body) const;
  /// Checks an Authorization header value against the bearer token.
  bool authorized(std::string_view header) const;

 private:
  ServiceResources res_;
};

/// HTTP front end over a ServiceCore.
class Service {
 public:
  explicit Service(std::shared_ptr<const ServiceCore> core);
  ~Service();

  /// Binds; port 0 picks a free port. Returns the bound port or -1.
  int bind(const std::string& host, int port);
  /// Blocks until stop().
  void run();
  void stop();

 private:
  std::shared_ptr<const ServiceCore> core_;
  std::unique_ptr<httplib::Server> server_;
};

/// Binds, installs SIGINT/SIGTERM handlers that stop the server, and
/// serves until one arrives. Returns false if binding failed.
bool serve_until_signal(std::shared_ptr<const ServiceCore> core, const std::string& host, int port,
                        const std::function<void(int)>& on_bound = {});

}  // namespace coderag
