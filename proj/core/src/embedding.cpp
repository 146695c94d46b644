#include "coderag/embedding.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "coderag/errors.hpp"

namespace coderag {

double l2_norm(const std::vector<double>& values) {
  double sum = 0.0;
  for (double v : values) sum += v * v;
  return std::sqrt(sum);
}

Embedding normalized(std::vector<double> raw) {
  const double n = l2_norm(raw);
  if (!(n > 0.0) || !std::isfinite(n)) throw Error(ErrorCode::ZeroVector, "cannot normalize a zero vector");
  for (double& v : raw) v /= n;
  Embedding out;
  out.norm = l2_norm(raw);
  out.values = std::move(raw);
  return out;
}

double cosine(const Embedding& a, const Embedding& b) {
  if (a.dim() != b.dim()) {
    throw Error(ErrorCode::DimensionMismatch,
                "dimensions " + std::to_string(a.dim()) + " and " + std::to_string(b.dim()));
  }
  if (!(a.norm > 0.0) || !(b.norm > 0.0)) throw Error(ErrorCode::ZeroVector, "cosine of a zero vector");
  double dot = 0.0;
  for (std::size_t i = 0; i < a.dim(); ++i) dot += a.values[i] * b.values[i];
  return std::clamp(dot / (a.norm * b.norm), -1.0, 1.0);
}

}  // namespace coderag
