#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace ideate::unicode {

/// Decode UTF-8 into codepoints. Invalid sequences decode to U+FFFD.
std::u32string decode_utf8(std::string_view text);

/// Encode codepoints back to UTF-8.
std::string encode_utf8(const std::u32string& codepoints);

/// Canonical composition (NFC): canonical decomposition, canonical
/// reordering of combining marks, then canonical recomposition
/// (including algorithmic Hangul). Idempotent.
std::string nfc(std::string_view text);

} // namespace ideate::unicode
