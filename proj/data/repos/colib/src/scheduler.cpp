#include <functional>
#include <vector>

namespace co {

struct Task {
  std::function<bool()> step;
  bool done = false;
};

int RunTasks(std::vector<Task>& tasks, int max_rounds) {
  int finished = 0;
  for (int round = 0; round < max_rounds && finished < static_cast<int>(tasks.size()); ++round) {
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
}

void ResetTasks(std::vector<Task>& tasks) {
  for (auto& task : tasks) {
    task.done = false;
  }
}

}  // namespace co
