#include "coderag/hash.hpp"

#include <array>

namespace coderag {

std::uint64_t fnv1a64(std::string_view bytes, std::uint64_t seed) {
  constexpr std::uint64_t kPrime = 0x100000001b3ULL;
  std::uint64_t h = seed;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= kPrime;
  }
  return h;
}

std::string to_hex(std::uint64_t value) {
  static constexpr std::array<char, 16> kDigits = {'0', '1', '2', '3', '4', '5', '6', '7',
                                                   '8', '9', 'a', 'b', 'c', 'd', 'e', 'f'};
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[static_cast<std::size_t>(i)] = kDigits[value & 0xF];
    value >>= 4;
  }
  return out;
}

std::string content_hash(std::string_view bytes) {
  // Two independent lanes keep accidental collisions out of reach for
  // corpus-sized inputs.
  return "fnv1a64x2:" + to_hex(fnv1a64(bytes)) + to_hex(fnv1a64(bytes, 0x84222325cbf29ce4ULL));
}

}  // namespace coderag
