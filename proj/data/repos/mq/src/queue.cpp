#include <deque>
#include <string>
#include <vector>

namespace mq {

struct Message {
  std::string topic;
  std::string payload;
  long offset = 0;
};

class MessageQueue {
 public:
  bool Pop(Message* out) {
    if (items_.empty()) {
      return false;
    }
    *out = items_.front();
    items_.pop_front();
    return true;
  }
  void Push(const Message& m) { items_.push_back(m); }

 private:
  std::deque<Message> items_;
};

int DrainQueue(MessageQueue& queue, std::vector<Message>* batch, int max_batch) {
  int count = 0;
  Message msg;
  while (count < max_batch && queue.Pop(&msg)) {
    batch->push_back(msg);
    ++count;
  }
  return count;
}

}  // namespace mq
