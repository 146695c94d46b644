#include "client.h"

#include <thread>
#include <chrono>

namespace rpc {

int CallWithRetry(Channel* channel, const Request& req, Response* resp, int max_attempts) {
  int ret = -1;
  for (int attempt = 0; attempt < max_attempts; ++attempt) {
    if (!channel->Healthy()) {
      continue;
    }
    ret = channel->Send(req, resp);
    if (ret == 0 && resp->code == 0) {
      return 0;
    }
    std::this_thread::sleep_for(std::chrono::milliseconds(10 << attempt));
  }
  return ret;
}

std::string BuildHeader(const std::string& service, const std::string& method, int seq) {
  std::string header = service;
  header += "/";
  header += method;
  header += "#";
  header += std::to_string(seq);
  return header;
}

int CountHealthy(Channel** channels, int n) {
  int healthy = 0;
  for (int i = 0; i < n; ++i) {
    if (channels[i] != nullptr && channels[i]->Healthy()) {
      ++healthy;
    }
  }
  return healthy;
}

}  // namespace rpc
