#include "coderag/benchmark_set.hpp"

#include <array>
#include <set>

#include <json.hpp>

#include "coderag/errors.hpp"
#include "coderag/index_store.hpp"

namespace coderag {

namespace {

constexpr std::array<std::pair<Domain, std::string_view>, 7> kDomains = {{
    {Domain::ClientCall, "client-call"},
    {Domain::Connection, "connection"},
    {Domain::Colib, "colib"},
    {Domain::Encoding, "encoding"},
    {Domain::Kv, "kv"},
    {Domain::Mq, "mq"},
    {Domain::Utils, "utils"},
}};

}  // namespace

std::string_view to_string(Domain d) {
  for (const auto& [value, name] : kDomains) {
    if (value == d) return name;
  }
  return "?";
}

std::string_view to_string(Difficulty d) { return d == Difficulty::Easy ? "easy" : "hard"; }

std::optional<Domain> parse_domain(std::string_view text) {
  for (const auto& [value, name] : kDomains) {
    if (name == text) return value;
  }
  return std::nullopt;
}

std::optional<Difficulty> parse_difficulty(std::string_view text) {
  if (text == "easy") return Difficulty::Easy;
  if (text == "hard") return Difficulty::Hard;
  return std::nullopt;
}

namespace {

[[noreturn]] void schema(std::size_t line_no, const std::string& what) {
  throw Error(ErrorCode::Schema, "line " + std::to_string(line_no) + ": " + what);
}

std::string string_field(const nlohmann::json& doc, const char* name, std::size_t line_no, bool non_empty) {
  if (!doc.contains(name)) schema(line_no, std::string("missing field '") + name + "'");
  const auto& v = doc.at(name);
  if (!v.is_string()) schema(line_no, std::string("field '") + name + "' must be a string");
  std::string s = v.get<std::string>();
  if (non_empty && s.empty()) schema(line_no, std::string("field '") + name + "' must not be empty");
  return s;
}

BenchmarkExample parse_example(std::string_view line, std::size_t line_no) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(line);
  } catch (const nlohmann::json::exception& e) {
    schema(line_no, std::string("not a JSON record: ") + e.what());
  }
  if (!doc.is_object()) schema(line_no, "record must be an object");
  static const std::set<std::string> kKnown = {"id", "domain", "difficulty", "context", "ground_truth", "annotations"};
  for (const auto& [key, value] : doc.items()) {
    if (!kKnown.contains(key)) schema(line_no, "unknown field '" + key + "'");
  }
  BenchmarkExample ex;
  ex.id = string_field(doc, "id", line_no, true);
  const std::string domain = string_field(doc, "domain", line_no, true);
  const auto d = parse_domain(domain);
  if (!d) schema(line_no, "field 'domain': unknown value '" + domain + "'");
  ex.domain = *d;
  const std::string difficulty = string_field(doc, "difficulty", line_no, true);
  const auto diff = parse_difficulty(difficulty);
  if (!diff) schema(line_no, "field 'difficulty': unknown value '" + difficulty + "'");
  ex.difficulty = *diff;
  ex.context = string_field(doc, "context", line_no, true);
  ex.ground_truth = string_field(doc, "ground_truth", line_no, true);
  if (doc.contains("annotations")) {
    const auto& list = doc.at("annotations");
    if (!list.is_array()) schema(line_no, "field 'annotations' must be a list");
    for (const auto& a : list) {
      try {
        Annotation ann;
        ann.path = a.at("path").get<std::string>();
        const auto& lines = a.at("lines");
        ann.start_line = lines.at(0).get<int>();
        ann.end_line = lines.at(1).get<int>();
        ann.note = a.value("note", std::string());
        if (ann.start_line < 1 || ann.end_line < ann.start_line) schema(line_no, "field 'annotations': bad line range");
        ex.annotations.push_back(std::move(ann));
      } catch (const nlohmann::json::exception& e) {
        schema(line_no, std::string("field 'annotations': ") + e.what());
      }
    }
  }
  return ex;
}

}  // namespace

std::vector<BenchmarkExample> parse_benchmark(std::string_view content) {
  std::vector<BenchmarkExample> out;
  std::set<std::string> ids;
  std::size_t line_no = 0;
  std::size_t begin = 0;
  while (begin < content.size()) {
    auto end = content.find('\n', begin);
    if (end == std::string_view::npos) end = content.size();
    ++line_no;
    const auto line = content.substr(begin, end - begin);
    begin = end + 1;
    if (line.find_first_not_of(" \t\r") == std::string_view::npos) continue;
    BenchmarkExample ex = parse_example(line, line_no);
    if (!ids.insert(ex.id).second) {
      throw Error(ErrorCode::DuplicateId, "line " + std::to_string(line_no) + ": duplicate id '" + ex.id + "'");
    }
    out.push_back(std::move(ex));
  }
  return out;
}

std::vector<BenchmarkExample> load_benchmark(const std::filesystem::path& path) {
  return parse_benchmark(read_file(path));
}

std::string to_json_line(const BenchmarkExample& ex) {
  nlohmann::ordered_json doc;
  doc["id"] = ex.id;
  doc["domain"] = std::string(to_string(ex.domain));
  doc["difficulty"] = std::string(to_string(ex.difficulty));
  doc["context"] = ex.context;
  doc["ground_truth"] = ex.ground_truth;
  if (!ex.annotations.empty()) {
    nlohmann::ordered_json list = nlohmann::ordered_json::array();
    for (const auto& a : ex.annotations) {
      list.push_back({{"path", a.path}, {"lines", {a.start_line, a.end_line}}, {"note", a.note}});
    }
    doc["annotations"] = std::move(list);
  }
  return doc.dump();
}

std::string annotated_context(const BenchmarkExample& ex) {
  std::string out;
  for (const auto& a : ex.annotations) {
    out += "// " + a.path + ":" + std::to_string(a.start_line) + "-" + std::to_string(a.end_line);
    if (!a.note.empty()) {
      std::string note = a.note;
      for (char& c : note) {
        if (c == '\n' || c == '\r') c = ' ';
      }
      out += " " + note;
    }
    out += '\n';
  }
  return out + ex.context;
}

}  // namespace coderag
