#pragma once

#include <string>
#include <string_view>

namespace discalign::text {

// Decodes UTF-8 into code points. Throws SemanticError on malformed input.
std::u32string decode_utf8(std::string_view bytes);
std::string encode_utf8(std::u32string_view chars);

// CRLF and lone CR become LF.
std::string normalize_newlines(std::string_view bytes);

bool is_space(char32_t c) noexcept;
bool is_punct(char32_t c) noexcept;

std::string to_lower_ascii(std::string_view s);

// Trims, lower-cases and collapses internal whitespace runs to one space.
std::string normalize_connective(std::string_view s);

}  // namespace discalign::text
