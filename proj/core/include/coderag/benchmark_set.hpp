#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace coderag {

enum class Domain { ClientCall, Connection, Colib, Encoding, Kv, Mq, Utils };
enum class Difficulty { Easy, Hard };

std::string_view to_string(Domain d);
std::string_view to_string(Difficulty d);
std::optional<Domain> parse_domain(std::string_view text);
std::optional<Difficulty> parse_difficulty(std::string_view text);

struct Annotation {
  std::string path;
  int start_line = 0;
  int end_line = 0;
  std::string note;

  bool operator==(const Annotation&) const = default;
};

struct BenchmarkExample {
  std::string id;
  Domain domain = Domain::Utils;
  Difficulty difficulty = Difficulty::Easy;
  std::string context;       // code preceding the completion point
  std::string ground_truth;  // the reference completion
  std::vector<Annotation> annotations;

  bool operator==(const BenchmarkExample&) const = default;
};

/// One record per line: {id, domain, difficulty, context, ground_truth,
/// annotations?}. Throws Error(Schema) naming the line and field, or
/// Error(DuplicateId).
std::vector<BenchmarkExample> parse_benchmark(std::string_view content);
std::vector<BenchmarkExample> load_benchmark(const std::filesystem::path& path);
std::string to_json_line(const BenchmarkExample& example);

/// The context with annotations prepended as `//` comment lines.
std::string annotated_context(const BenchmarkExample& example);

}  // namespace coderag
