#ifndef BELHD_TEXT_H_
#define BELHD_TEXT_H_

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

// UTF-8 helpers. Offsets exposed to users are Unicode scalar-value positions.
namespace belhd::text {

// Decodes UTF-8. Invalid sequences decode to U+FFFD.
std::u32string decode(std::string_view utf8);
std::string encode(std::u32string_view codepoints);
void append(std::string &out, char32_t cp);

// Byte offset of every codepoint plus a final entry equal to utf8.size(), so
// result.size() == codepoint count + 1.
std::vector<std::size_t> codepoint_offsets(std::string_view utf8);

std::size_t codepoint_length(std::string_view utf8);

// Slice [start, end) in codepoints. Throws std::out_of_range when the range
// exceeds the string.
std::string slice(std::string_view utf8, std::size_t start, std::size_t end);

// Unicode simple lowercase mapping, codepoint by codepoint.
std::string lowercase(std::string_view utf8);

bool is_alnum(char32_t cp);
bool is_space(char32_t cp);
bool is_upper(char32_t cp);
bool is_lower(char32_t cp);
char32_t to_lower(char32_t cp);

std::string_view trim(std::string_view s);

// Splits on a single-byte separator, keeping empty fields.
std::vector<std::string_view> split(std::string_view s, char sep);

}  // namespace belhd::text

#endif  // BELHD_TEXT_H_
