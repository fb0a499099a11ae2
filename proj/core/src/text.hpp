#pragma once

#include <cstddef>
#include <string>
#include <string_view>

namespace evgen::text {

// Decodes the code point at `pos` and advances `pos`. Ill-formed sequences
// decode as U+FFFD and consume one byte.
char32_t next_code_point(std::string_view s, std::size_t& pos);

bool is_alnum(char32_t c);
bool is_space(char32_t c);
bool is_upper(char32_t c);

void append_lower(std::string& out, char32_t c);
void append_utf8(std::string& out, char32_t c);

std::string_view trim(std::string_view s);

}  // namespace evgen::text
