#pragma once

#include <string>

namespace rpc {

struct Request {
  std::string method;
  std::string body;
  int timeout_ms = 1000;
};

struct Response {
  int code = 0;
  std::string body;
};

class Channel {
 public:
  virtual ~Channel() = default;
  virtual int Send(const Request& req, Response* resp) = 0;
  virtual bool Healthy() const = 0;
};

int CallWithRetry(Channel* channel, const Request& req, Response* resp, int max_attempts);
std::string BuildHeader(const std::string& service, const std::string& method, int seq);

}  // namespace rpc
