#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace coderag {

inline constexpr std::uint64_t kFnvOffsetBasis = 0xcbf29ce484222325ULL;

/// 64-bit FNV-1a. Byte-oriented, so results are identical on every platform.
std::uint64_t fnv1a64(std::string_view bytes, std::uint64_t seed = kFnvOffsetBasis);

/// Lower-case 16-digit hex rendering of a 64-bit value.
std::string to_hex(std::uint64_t value);

/// Content hash used to tie indices to the corpus they were built from.
std::string content_hash(std::string_view bytes);

}  // namespace coderag
