#include "coderag/config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "coderag/errors.hpp"
#include "coderag/index_store.hpp"

namespace coderag {

namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

[[noreturn]] void bad_value(std::string_view key, std::string_view value) {
  throw Error(ErrorCode::Config, "invalid value for " + std::string(key) + ": '" + std::string(value) + "'");
}

std::size_t to_size(std::string_view key, std::string_view v) {
  std::size_t out = 0;
  const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || p != v.data() + v.size()) bad_value(key, v);
  return out;
}

int to_int(std::string_view key, std::string_view v) {
  int out = 0;
  const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || p != v.data() + v.size()) bad_value(key, v);
  return out;
}

double to_double(std::string_view key, std::string_view v) {
  try {
    std::size_t used = 0;
    const double d = std::stod(std::string(v), &used);
    if (used != v.size()) bad_value(key, v);
    return d;
  } catch (const std::logic_error&) {
    bad_value(key, v);
  }
}

bool to_bool(std::string_view key, std::string_view v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  bad_value(key, v);
}

bool set_client(ChatClientConfig& c, std::string_view field, std::string_view key, std::string_view v) {
  if (field == "endpoint") c.endpoint = v;
  else if (field == "model") c.model = v;
  else if (field == "token_env") c.token_env = v;
  else if (field == "timeout_ms") c.timeout = std::chrono::milliseconds(to_size(key, v));
  else if (field == "max_retries") c.max_retries = to_int(key, v);
  else return false;
  return true;
}

}  // namespace

void Settings::set(std::string_view key, std::string_view v) {
  auto& p = pipeline;
  if (key == "index_dir") index_dir = std::string(v);
  else if (key == "technique") p.technique = TechniqueSpec::parse(v);
  else if (key == "mode") p.mode = parse_query_mode(v);
  else if (key == "k") p.k = to_size(key, v);
  else if (key == "budget") p.budget = to_size(key, v);
  else if (key == "token_counter") {
    make_token_counter(v);
    p.token_counter = v;
  } else if (key == "template_lang") p.language = parse_language(v);
  else if (key.starts_with("template.")) {
    const auto id = parse_template_id(key.substr(9));
    if (!id) throw Error(ErrorCode::Config, "unknown template id in " + std::string(key));
    p.templates[*id] = PromptTemplate::from_file(*id, p.language, std::string(v));
  } else if (key == "annotations") p.include_annotations = to_bool(key, v);
  else if (key == "max_in_flight") p.max_in_flight = to_size(key, v);
  else if (key == "bm25.k") bm25.k = to_double(key, v);
  else if (key == "bm25.b") bm25.b = to_double(key, v);
  else if (key == "bm25.raw_idf") bm25.raw_idf = to_bool(key, v);
  else if (key == "metric.alpha") p.weights.alpha = to_double(key, v);
  else if (key == "metric.beta") p.weights.beta = to_double(key, v);
  else if (key == "metric.gamma") p.weights.gamma = to_double(key, v);
  else if (key == "metric.delta") p.weights.delta = to_double(key, v);
  else if (key == "metric.keyword_weight") p.metric_options.keyword_weight = to_double(key, v);
  else if (key.starts_with("llm.") && set_client(llm, key.substr(4), key, v)) {
  } else if (key.starts_with("lookup.")) {
    if (!lookup) lookup = ChatClientConfig{};
    if (!set_client(*lookup, key.substr(7), key, v)) throw Error(ErrorCode::Config, "unknown key " + std::string(key));
  } else if (key == "embed.kind") {
    if (v == "builtin") embed.kind = EmbedderKind::BuiltinHash;
    else if (v == "remote") embed.kind = EmbedderKind::Remote;
    else bad_value(key, v);
  } else if (key == "embed.dim") embed.dim = to_size(key, v);
  else if (key == "embed.order") embed.order = to_size(key, v);
  else if (key == "embed.char_cap") embed.char_cap = to_size(key, v);
  else if (key == "embed.endpoint") embed.endpoint = v;
  else if (key == "embed.model") embed.model = v;
  else if (key == "embed.token_env") embed.token_env = v;
  else if (key == "embed.batch_size") embed.batch_size = to_size(key, v);
  else if (key == "embed.max_in_flight") embed.max_in_flight = to_size(key, v);
  else if (key == "embed.timeout_ms") embed.timeout = std::chrono::milliseconds(to_size(key, v));
  else if (key == "embed.max_retries") embed.max_retries = to_int(key, v);
  else if (key == "serve.host") serve_host = v;
  else if (key == "serve.port") serve_port = to_int(key, v);
  else if (key == "serve.token_env") serve_token_env = v;
  else if (key.ends_with(".token") || key == "token") {
    throw Error(ErrorCode::Config, std::string(key) + ": tokens are read from the environment, set " +
                                       std::string(key) + "_env instead");
  } else {
    throw Error(ErrorCode::Config, "unknown key " + std::string(key));
  }
}

Settings parse_settings(std::string_view text, const std::filesystem::path& base_dir) {
  Settings s;
  std::size_t line_no = 0;
  std::size_t begin = 0;
  while (begin < text.size()) {
    auto end = text.find('\n', begin);
    if (end == std::string_view::npos) end = text.size();
    ++line_no;
    const std::string_view line = trim(text.substr(begin, end - begin));
    begin = end + 1;
    if (line.empty() || line.front() == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw Error(ErrorCode::Config, "line " + std::to_string(line_no) + ": expected key = value");
    }
    const std::string_view key = trim(line.substr(0, eq));
    std::string value(trim(line.substr(eq + 1)));
    if ((key == "index_dir" || key.starts_with("template.")) && !base_dir.empty() &&
        std::filesystem::path(value).is_relative()) {
      value = (base_dir / value).string();
    }
    try {
      s.set(key, value);
    } catch (const Error& e) {
      throw Error(ErrorCode::Config, "line " + std::to_string(line_no) + ": " + e.message());
    }
  }
  return s;
}

Settings load_settings(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Config, "cannot read config " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_settings(buf.str(), path.parent_path());
}

}  // namespace coderag
