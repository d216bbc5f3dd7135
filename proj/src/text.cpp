#include "llano/text.hpp"

#include <array>

namespace llano::text {
namespace {

constexpr char32_t kReplacement = 0xFFFD;

// Decodes one code point starting at bytes[i]; advances i. Returns
// kReplacement (and advances by one byte) on malformed input.
char32_t decode_one(std::string_view bytes, std::size_t& i, bool& ok) {
  const auto b0 = static_cast<unsigned char>(bytes[i]);
  ok = true;
  if (b0 < 0x80) {
    ++i;
    return b0;
  }
  int len = 0;
  char32_t cp = 0;
  if ((b0 & 0xE0) == 0xC0) {
    len = 2;
    cp = b0 & 0x1F;
  } else if ((b0 & 0xF0) == 0xE0) {
    len = 3;
    cp = b0 & 0x0F;
  } else if ((b0 & 0xF8) == 0xF0) {
    len = 4;
    cp = b0 & 0x07;
  } else {
    ok = false;
    ++i;
    return kReplacement;
  }
  if (i + len > bytes.size()) {
    ok = false;
    ++i;
    return kReplacement;
  }
  for (int k = 1; k < len; ++k) {
    const auto b = static_cast<unsigned char>(bytes[i + k]);
    if ((b & 0xC0) != 0x80) {
      ok = false;
      ++i;
      return kReplacement;
    }
    cp = (cp << 6) | (b & 0x3F);
  }
  // Overlong forms, surrogates and out-of-range values.
  static constexpr std::array<char32_t, 5> kMin{0, 0, 0x80, 0x800, 0x10000};
  if (cp < kMin[len] || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) {
    ok = false;
    ++i;
    return kReplacement;
  }
  i += len;
  return cp;
}

bool starts_with_ci(std::u32string_view s, std::size_t pos, std::string_view prefix) {
  if (pos + prefix.size() > s.size()) return false;
  for (std::size_t k = 0; k < prefix.size(); ++k) {
    if (to_lower(s[pos + k]) != static_cast<char32_t>(prefix[k])) return false;
  }
  return true;
}

bool is_joiner(char32_t cp) {
  return cp == U'-' || cp == U'\'' || cp == 0x2019 || cp == 0x2010;
}

bool is_url_trailer(char32_t cp) {
  switch (cp) {
    case U'.': case U',': case U';': case U':': case U'!': case U'?':
    case U')': case U']': case U'}': case U'"': case U'\'':
    case 0x00BB: case 0x201D: case 0x2019:
      return true;
    default:
      return false;
  }
}

}  // namespace

bool is_valid_utf8(std::string_view bytes) {
  std::size_t i = 0;
  bool ok = true;
  while (i < bytes.size()) {
    decode_one(bytes, i, ok);
    if (!ok) return false;
  }
  return true;
}

std::u32string decode_utf8(std::string_view bytes) {
  std::u32string out;
  out.reserve(bytes.size());
  std::size_t i = 0;
  bool ok = true;
  while (i < bytes.size()) out.push_back(decode_one(bytes, i, ok));
  return out;
}

void append_utf8(std::string& out, char32_t cp) {
  if (cp < 0x80) {
    out.push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
}

std::string encode_utf8(std::u32string_view cps) {
  std::string out;
  out.reserve(cps.size());
  for (char32_t cp : cps) append_utf8(out, cp);
  return out;
}

bool is_letter(char32_t cp) {
  if ((cp >= U'a' && cp <= U'z') || (cp >= U'A' && cp <= U'Z')) return true;
  if (cp < 0xAA) return false;
  if (cp == 0xAA || cp == 0xB5 || cp == 0xBA) return true;
  if (cp >= 0xC0 && cp <= 0x24F) return cp != 0xD7 && cp != 0xF7;
  if (cp >= 0x250 && cp <= 0x2AF) return true;         // IPA
  if (cp >= 0x370 && cp <= 0x3FF) return cp != 0x37E && cp != 0x387;  // Greek
  if (cp >= 0x400 && cp <= 0x52F) return cp < 0x482 || cp > 0x489;    // Cyrillic
  if (cp >= 0x5D0 && cp <= 0x5EA) return true;         // Hebrew
  if (cp >= 0x620 && cp <= 0x64A) return true;         // Arabic
  if (cp >= 0x1E00 && cp <= 0x1EFF) return true;       // Latin Extended Additional
  if (cp >= 0x3040 && cp <= 0x30FF) return cp != 0x30FB;  // kana
  if (cp >= 0x4E00 && cp <= 0x9FFF) return true;       // CJK
  if (cp >= 0xAC00 && cp <= 0xD7A3) return true;       // Hangul
  return false;
}

bool is_digit(char32_t cp) { return cp >= U'0' && cp <= U'9'; }

bool is_space(char32_t cp) {
  switch (cp) {
    case U' ': case U'\t': case U'\n': case U'\r': case U'\v': case U'\f':
    case 0x85: case 0xA0: case 0x2007: case 0x202F: case 0x3000:
      return true;
    default:
      return cp >= 0x2000 && cp <= 0x200A;
  }
}

char32_t to_lower(char32_t cp) {
  if (cp >= U'A' && cp <= U'Z') return cp + 32;
  if (cp < 0xC0) return cp;
  if (cp <= 0xDE) return cp == 0xD7 ? cp : cp + 32;
  if ((cp >= 0x100 && cp <= 0x137) || (cp >= 0x14A && cp <= 0x177)) {
    return (cp % 2 == 0) ? cp + 1 : cp;
  }
  if ((cp >= 0x139 && cp <= 0x148) || (cp >= 0x179 && cp <= 0x17E)) {
    return (cp % 2 == 1) ? cp + 1 : cp;
  }
  if (cp == 0x178) return 0xFF;
  if (cp >= 0x391 && cp <= 0x3A9 && cp != 0x3A2) return cp + 32;
  if (cp >= 0x400 && cp <= 0x40F) return cp + 80;
  if (cp >= 0x410 && cp <= 0x42F) return cp + 32;
  if (cp >= 0x1E00 && cp <= 0x1EFF && cp % 2 == 0 &&
      !(cp >= 0x1E96 && cp <= 0x1E9F)) {
    return cp + 1;
  }
  return cp;
}

std::string to_lower(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  std::size_t i = 0;
  bool ok = true;
  while (i < s.size()) {
    const std::size_t start = i;
    const char32_t cp = decode_one(s, i, ok);
    if (!ok) {
      // Keep malformed bytes as they are.
      out.append(s.substr(start, i - start));
      continue;
    }
    append_utf8(out, to_lower(cp));
  }
  return out;
}

std::size_t char_length(std::string_view s) {
  std::size_t n = 0;
  std::size_t i = 0;
  bool ok = true;
  while (i < s.size()) {
    decode_one(s, i, ok);
    ++n;
  }
  return n;
}

std::string_view trim(std::string_view s) {
  const auto* ws = " \t\r\n\v\f";
  const auto first = s.find_first_not_of(ws);
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(ws);
  return s.substr(first, last - first + 1);
}

bool is_blank(std::string_view s) {
  for (char32_t cp : decode_utf8(s)) {
    if (!is_space(cp)) return false;
  }
  return true;
}

std::vector<std::string_view> split_lines(std::string_view s) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start <= s.size()) {
    const auto nl = s.find('\n', start);
    if (nl == std::string_view::npos) {
      lines.push_back(s.substr(start));
      break;
    }
    std::string_view line = s.substr(start, nl - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines.push_back(line);
    start = nl + 1;
  }
  return lines;
}

std::size_t count_nonempty_lines(std::string_view s) {
  std::size_t n = 0;
  for (auto line : split_lines(s)) {
    if (!is_blank(line)) ++n;
  }
  return n;
}

std::vector<std::string> tokenize_words(std::string_view s) {
  const std::u32string cps = decode_utf8(s);
  std::vector<std::string> tokens;
  const std::size_t n = cps.size();
  std::size_t i = 0;
  while (i < n) {
    const bool at_boundary = (i == 0) || !is_alnum(cps[i - 1]);
    if (at_boundary && (starts_with_ci(cps, i, "http://") ||
                        starts_with_ci(cps, i, "https://") ||
                        starts_with_ci(cps, i, "www."))) {
      std::size_t j = i;
      while (j < n && !is_space(cps[j])) ++j;
      std::size_t end = j;
      while (end > i && is_url_trailer(cps[end - 1])) --end;
      tokens.push_back(encode_utf8(std::u32string_view(cps).substr(i, end - i)));
      i = j;
      continue;
    }
    if (!is_alnum(cps[i])) {
      ++i;
      continue;
    }
    std::size_t j = i + 1;
    while (j < n) {
      if (is_alnum(cps[j])) {
        ++j;
      } else if (is_joiner(cps[j]) && j + 1 < n && is_alnum(cps[j + 1])) {
        j += 2;
      } else {
        break;
      }
    }
    tokens.push_back(encode_utf8(std::u32string_view(cps).substr(i, j - i)));
    i = j;
  }
  return tokens;
}

std::size_t count_words(std::string_view s) { return tokenize_words(s).size(); }

}  // namespace llano::text
