#pragma once

// UTF-8 helpers and the word tokenizer shared by corpus statistics and
// the metrics. Character classes cover Latin, Greek, Cyrillic and the
// common CJK blocks; that is enough for Spanish administrative text.

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace llano::text {

bool is_valid_utf8(std::string_view bytes);

// Invalid sequences decode to U+FFFD.
std::u32string decode_utf8(std::string_view bytes);
void append_utf8(std::string& out, char32_t cp);
std::string encode_utf8(std::u32string_view cps);

bool is_letter(char32_t cp);
bool is_digit(char32_t cp);
inline bool is_alnum(char32_t cp) { return is_letter(cp) || is_digit(cp); }
bool is_space(char32_t cp);
char32_t to_lower(char32_t cp);
inline bool is_upper(char32_t cp) { return to_lower(cp) != cp; }

std::string to_lower(std::string_view s);

// Number of code points.
std::size_t char_length(std::string_view s);

std::string_view trim(std::string_view s);
bool is_blank(std::string_view s);

std::vector<std::string_view> split_lines(std::string_view s);
std::size_t count_nonempty_lines(std::string_view s);

// A word token is a maximal run of letters/digits, allowing a single
// hyphen or apostrophe between two alphanumerics ("socio-cultural",
// "l'Alfàs"). Anything starting with http://, https:// or www. is one
// token up to the next whitespace, minus trailing punctuation.
std::vector<std::string> tokenize_words(std::string_view s);
std::size_t count_words(std::string_view s);

}  // namespace llano::text
