#pragma once

#include <cstddef>
#include <vector>

namespace coderag {

struct Embedding {
  std::vector<double> values;
  double norm = 0.0;  // Euclidean norm of `values`

  std::size_t dim() const { return values.size(); }
};

double l2_norm(const std::vector<double>& values);

/// Scales `raw` to unit length. Throws Error(ZeroVector) for a zero vector.
Embedding normalized(std::vector<double> raw);

/// Cosine similarity clamped to [-1, 1]. Throws Error(DimensionMismatch)
/// or Error(ZeroVector).
double cosine(const Embedding& a, const Embedding& b);

}  // namespace coderag
