#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace longner::utf8 {

// Decodes one scalar starting at `pos`; advances `pos`. Returns nullopt on
// malformed input (overlong forms, surrogates, truncated sequences).
std::optional<char32_t> decode_next(std::string_view text, std::size_t& pos);

bool is_valid(std::string_view text);

// Byte offsets of each scalar boundary, including the final end offset.
std::vector<std::size_t> boundaries(std::string_view text);

std::size_t scalar_count(std::string_view text);

std::string_view strip_bom(std::string_view text);

bool is_digit(char32_t c);       // ASCII or Devanagari digit
bool is_latin(char32_t c);       // ASCII letter
bool is_devanagari(char32_t c);  // U+0900..U+097F

}  // namespace longner::utf8
