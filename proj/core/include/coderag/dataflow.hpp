#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <string_view>

namespace coderag {

/// Def-use edges of a fragment as "vI rel vJ" strings with multiplicity.
/// Variables are numbered in order of first definition; a use of a defined
/// variable yields "vI comesFrom vI", a definition from an expression
/// yields "vI computedFrom vJ" for each defined variable it reads. Uses of
/// never-defined names yield nothing.
std::map<std::string, std::size_t> dataflow_edges(std::string_view code);

struct DataflowDetail {
  double score = 0.0;
  std::size_t reference_edges = 0;
  std::size_t matched = 0;
  bool flagged = false;  // reference had no edges
};

/// Matched reference edges over reference edges. A reference with no edges
/// scores 1 when the candidate has none either, else 0; both are flagged.
DataflowDetail dataflow_similarity_detail(std::string_view candidate, std::string_view reference);
double dataflow_similarity(std::string_view candidate, std::string_view reference);

}  // namespace coderag
