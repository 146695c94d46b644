#pragma once

#include <map>
#include <string>

namespace kv {

class Store {
 public:
  bool Get(const std::string& key, std::string* value) const;
  void Put(const std::string& key, const std::string& value) { data_[key] = value; }
  bool Erase(const std::string& key) { return data_.erase(key) > 0; }

 private:
  std::map<std::string, std::string> data_;
};

}  // namespace kv
