#pragma once

#include <cstddef>
#include <string>
#include <string_view>

namespace coderag {

struct DecodedText {
  std::string text;
  std::size_t replaced_bytes = 0;
};

/// Lossy UTF-8 validation: every byte that is not part of a well-formed
/// sequence is replaced with U+FFFD and counted.
DecodedText decode_utf8_lossy(std::string_view bytes);

/// Length in bytes of the UTF-8 sequence starting with `lead` (1 for
/// ASCII and for invalid lead bytes).
std::size_t utf8_sequence_length(unsigned char lead);

}  // namespace coderag
