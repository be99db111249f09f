#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>

namespace pamr::unicode {

/// Byte offset of the first invalid UTF-8 sequence, or nullopt if `text` is
/// well-formed UTF-8.
std::optional<std::size_t> find_invalid_utf8(std::string_view text);

/// NFC normalization. Input must be valid UTF-8.
std::string to_nfc(std::string_view text);

bool is_nfc(std::string_view text);

/// The first code point of `text` as a UTF-8 substring (empty for empty input).
std::string_view first_code_point(std::string_view text);

std::string ascii_lower(std::string_view text);

}  // namespace pamr::unicode
