#include "kv.h"

namespace kv {

bool Store::Get(const std::string& key, std::string* value) const {
  auto it = data_.find(key);
  if (it == data_.end()) {
    return false;
  }
  *value = it->second;
  return true;
}

std::string GetOrDefault(const Store& store, const std::string& key, const std::string& fallback) {
  std::string value;
  if (!store.Get(key, &value)) {
    return fallback;
  }
  return value;
}

int CopyKeys(const Store& from, Store* to, const std::string* keys, int n) {
  int copied = 0;
  for (int i = 0; i < n; ++i) {
    std::string value;
    if (from.Get(keys[i], &value)) {
      to->Put(keys[i], value);
      ++copied;
    }
  }
  return copied;
}

}  // namespace kv
