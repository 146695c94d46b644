#include <cstddef>
#include <cstdint>
#include <string>

namespace codec {

std::string HexEncode(const std::string& input) {
  static const char kDigits[] = "0123456789abcdef";
  std::string out;
  out.reserve(input.size() * 2);
  for (unsigned char c : input) {
    out.push_back(kDigits[c >> 4]);
    out.push_back(kDigits[c & 0x0f]);
  }
  return out;
}

uint64_t ReadVarint(const uint8_t* data, size_t size, size_t* consumed) {
  uint64_t value = 0;
  int shift = 0;
  for (size_t i = 0; i < size && shift < 64; ++i) {
    value |= static_cast<uint64_t>(data[i] & 0x7f) << shift;
    if ((data[i] & 0x80) == 0) {
      *consumed = i + 1;
      return value;
    }
    shift += 7;
  }
  *consumed = 0;
  return 0;
}

size_t WriteVarint(uint64_t value, uint8_t* out) {
  size_t n = 0;
  while (value >= 0x80) {
    out[n++] = static_cast<uint8_t>(value | 0x80);
    value >>= 7;
  }
  out[n++] = static_cast<uint8_t>(value);
  return n;
}

}  // namespace codec
