"""Regenerates benchmark.jsonl from the examples below."""
import json

EXAMPLES = [
    ("cc-001", "client-call", "easy",
     '''#include "client.h"

namespace rpc {

int CallWithRetry(Channel* ch, const Request& req, Response* resp, int attempts) {
  int ret = -1;
''',
     '''  for (int attempt = 0; attempt < attempts; ++attempt) {
    if (!ch->Healthy()) {
      continue;
    }
    ret = ch->Send(req, resp);
    if (ret == 0 && resp->code == 0) {
      return 0;
    }
  }
  return ret;
}''', [{"path": "src/client.h", "lines": [18, 23], "note": "Channel interface used for the call"}]),
    ("cc-002", "client-call", "hard",
     '''#include <string>

namespace rpc {

std::string BuildHeader(const std::string& service, const std::string& method, int seq) {
''',
     '''  std::string header = service;
  header += ".";
  header += method;
  header += "#";
  header += std::to_string(seq);
  return header;
}''', []),
    ("conn-001", "connection", "easy",
     '''#include <cerrno>
#include <unistd.h>

namespace net {

int ReadFully(int fd, char* buf, int len) {
  int done = 0;
  while (done < len) {
''',
     '''    int n = read(fd, buf + done, len - done);
    if (n < 0) {
      if (errno == EINTR) {
        continue;
      }
      return -1;
    }
    if (n == 0) {
      break;
    }
    done += n;
  }
  return done;
}''', []),
    ("conn-002", "connection", "hard",
     '''#include <poll.h>

namespace net {

bool WaitReadable(int fd, int timeout_ms) {
  struct pollfd pfd;
''',
     '''  pfd.fd = fd;
  pfd.events = POLLIN;
  pfd.revents = 0;
  int ret = poll(&pfd, 1, timeout_ms);
  if (ret <= 0) {
    return false;
  }
  return (pfd.revents & POLLIN) != 0;
}''', []),
    ("colib-001", "colib", "hard",
     '''#include <functional>
#include <vector>

namespace co {

int RunTasks(std::vector<Task>& tasks, int max_rounds) {
  int finished = 0;
''',
     '''  for (int round = 0; round < max_rounds; ++round) {
    for (auto& task : tasks) {
      if (task.done) {
        continue;
      }
      if (task.step()) {
        task.done = true;
        ++finished;
      }
    }
  }
  return finished;
}''', [{"path": "src/scheduler.cpp", "lines": [6, 9], "note": "Task holds a step callback and a done flag"}]),
    ("enc-001", "encoding", "easy",
     '''#include <string>

namespace codec {

std::string HexEncode(const std::string& input) {
  static const char kDigits[] = "0123456789ABCDEF";
''',
     '''  std::string out;
  out.reserve(input.size() * 2);
  for (unsigned char c : input) {
    out.push_back(kDigits[c >> 4]);
    out.push_back(kDigits[c & 0x0f]);
  }
  return out;
}''', []),
    ("enc-002", "encoding", "hard",
     '''#include <cstddef>
#include <cstdint>

namespace codec {

uint32_t ReadVarint32(const uint8_t* data, size_t size, size_t* consumed) {
  uint32_t value = 0;
''',
     '''  int shift = 0;
  for (size_t i = 0; i < size && shift < 32; ++i) {
    value |= static_cast<uint32_t>(data[i] & 0x7f) << shift;
    if ((data[i] & 0x80) == 0) {
      *consumed = i + 1;
      return value;
    }
    shift += 7;
  }
  *consumed = 0;
  return 0;
}''', []),
    ("kv-001", "kv", "easy",
     '''#include "kv.h"

namespace kv {

std::string GetOrDefault(const Store& store, const std::string& key, const std::string& fallback) {
''',
     '''  std::string value;
  if (!store.Get(key, &value)) {
    return fallback;
  }
  return value;
}''', []),
    ("mq-001", "mq", "hard",
     '''#include <vector>

namespace mq {

int DrainQueue(MessageQueue& queue, std::vector<Message>* batch, int max_batch) {
''',
     '''  int count = 0;
  Message msg;
  while (count < max_batch && queue.Pop(&msg)) {
    batch->push_back(msg);
    ++count;
  }
  return count;
}''', [{"path": "src/queue.cpp", "lines": [14, 23], "note": "Pop returns false when the queue is empty"}]),
    ("utils-001", "utils", "easy",
     '''#include <string>
#include <vector>

namespace util {

std::vector<std::string> SplitString(const std::string& text, char sep) {
  std::vector<std::string> parts;
''',
     '''  std::string current;
  for (char c : text) {
    if (c == sep) {
      parts.push_back(current);
      current.clear();
    } else {
      current.push_back(c);
    }
  }
  parts.push_back(current);
  return parts;
}''', []),
]

with open("benchmark.jsonl", "w") as out:
    for id_, domain, difficulty, context, ground_truth, annotations in EXAMPLES:
        rec = {"id": id_, "domain": domain, "difficulty": difficulty,
               "context": context, "ground_truth": ground_truth}
        if annotations:
            rec["annotations"] = annotations
        out.write(json.dumps(rec, ensure_ascii=False) + "\n")
