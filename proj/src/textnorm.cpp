#include "llano/textnorm.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <regex>
#include <set>

#include "llano/error.hpp"
#include "llano/text.hpp"

namespace llano::textnorm {
namespace {

constexpr std::string_view kOpen = "\xE2\x9F\xA6";   // ⟦
constexpr std::string_view kClose = "\xE2\x9F\xA7";  // ⟧

const std::regex& sentinel_regex() {
  static const std::regex re("\xE2\x9F\xA6[ \t]*NUM[ \t]*([0-9]+)[ \t]*\xE2\x9F\xA7");
  return re;
}

bool is_ascii_digit(char c) { return c >= '0' && c <= '9'; }

// Code point ending right before byte offset `pos` (0 if none).
char32_t prev_cp(std::string_view s, std::size_t pos) {
  if (pos == 0) return 0;
  std::size_t start = pos - 1;
  while (start > 0 && (static_cast<unsigned char>(s[start]) & 0xC0) == 0x80) --start;
  const auto cps = text::decode_utf8(s.substr(start, pos - start));
  return cps.empty() ? 0 : cps.front();
}

// Code point starting at byte offset `pos` (0 if none).
char32_t next_cp(std::string_view s, std::size_t pos) {
  if (pos >= s.size()) return 0;
  std::size_t len = 1;
  const auto b = static_cast<unsigned char>(s[pos]);
  if (b >= 0xF0) len = 4;
  else if (b >= 0xE0) len = 3;
  else if (b >= 0xC0) len = 2;
  const auto cps = text::decode_utf8(s.substr(pos, len));
  return cps.empty() ? 0 : cps.front();
}

// No digit, letter or decimal/thousands continuation on the left.
bool clean_left(std::string_view s, std::size_t pos) {
  const char32_t p = prev_cp(s, pos);
  if (p == 0) return true;
  if (text::is_alnum(p)) return false;
  if ((p == U'.' || p == U',' || p == U':' || p == U'/') && pos >= 2 &&
      is_ascii_digit(s[pos - 2])) {
    return false;
  }
  return true;
}

bool clean_right(std::string_view s, std::size_t end) {
  const char32_t n = next_cp(s, end);
  if (n == 0) return true;
  if (text::is_alnum(n)) return false;
  if ((n == U'.' || n == U',' || n == U':' || n == U'/') && end + 1 < s.size() &&
      is_ascii_digit(s[end + 1])) {
    return false;
  }
  return true;
}

std::string_view period_for(int hour, std::span<const PeriodRange> map) {
  for (const auto& r : map) {
    if (hour >= r.first_hour && hour <= r.last_hour) return r.label;
  }
  return {};
}

// If `out` ends with the word "la"/"las" followed by a single space,
// removes it and reports whether it was capitalized.
std::optional<bool> take_trailing_article(std::string& out) {
  for (std::string_view article : {"las ", "la "}) {
    if (out.size() < article.size()) continue;
    const std::string_view tail = std::string_view(out).substr(out.size() - article.size());
    if (text::to_lower(tail) != article) continue;
    const std::size_t start = out.size() - article.size();
    if (text::is_letter(prev_cp(out, start))) continue;
    const bool capital = tail[0] == 'L';
    out.erase(start);
    return capital;
  }
  return std::nullopt;
}

std::string minutes_phrase(int minutes) {
  switch (minutes) {
    case 0: return "";
    case 15: return " y cuarto";
    case 30: return " y media";
    case 1: return " y 1 minuto";
    default: return " y " + std::to_string(minutes) + " minutos";
  }
}

std::string strip_separators(std::string_view digits) {
  std::string out;
  for (char c : digits) {
    if (is_ascii_digit(c)) out.push_back(c);
  }
  return out;
}

struct Candidate {
  std::size_t begin;
  std::size_t end;
  NumericKind kind;
};

void collect(std::string_view s, const std::regex& re, NumericKind kind,
             std::vector<Candidate>& out,
             bool (*accept)(std::string_view) = nullptr) {
  const std::string str(s);
  for (auto it = std::sregex_iterator(str.begin(), str.end(), re);
       it != std::sregex_iterator(); ++it) {
    const auto b = static_cast<std::size_t>(it->position(0));
    const auto e = b + static_cast<std::size_t>(it->length(0));
    if (!clean_left(s, b)) continue;
    if (kind != NumericKind::Percentage && !clean_right(s, e)) continue;
    if (accept && !accept(s.substr(b, e - b))) continue;
    out.push_back({b, e, kind});
  }
}

bool is_year(std::string_view digits) {
  const int v = std::stoi(std::string(digits));
  return v >= 1900 && v <= 2099;
}

bool is_day_range(std::string_view surface) {
  // Both day numbers must be calendar days.
  std::vector<int> days;
  int cur = -1;
  for (char c : surface) {
    if (is_ascii_digit(c)) {
      cur = (cur < 0 ? 0 : cur * 10) + (c - '0');
    } else if (cur >= 0) {
      days.push_back(cur);
      cur = -1;
    }
  }
  if (cur >= 0) days.push_back(cur);
  return std::all_of(days.begin(), days.end(), [](int d) { return d >= 1 && d <= 31; });
}

bool is_preamble_line(std::string_view line) {
  static const std::vector<std::string_view> kMarkers = {
      "texto adaptado",      "texto simplificado", "texto reducido",
      "texto reescrito",     "texto final",        "versión adaptada",
      "versión simplificada", "versión reducida",  "aquí tienes",
      "aquí está",           "a continuación",     "respuesta",
      "adaptación",          "resultado",
  };
  std::string l = text::to_lower(text::trim(line));
  const auto first = l.find_first_not_of("#*_> ");
  if (first == std::string::npos) return false;
  l.erase(0, first);
  while (!l.empty() && (l.back() == '*' || l.back() == '_' || l.back() == ' ')) l.pop_back();
  for (auto marker : kMarkers) {
    if (l.rfind(marker, 0) != 0) continue;
    if (l.size() == marker.size() || l.back() == ':') return true;
  }
  return false;
}

std::string strip_preamble(std::string_view s) {
  auto lines = text::split_lines(s);
  std::size_t first = 0;
  auto skip_blank = [&] {
    while (first < lines.size() && text::is_blank(lines[first])) ++first;
  };
  skip_blank();
  while (first < lines.size() &&
         (is_preamble_line(lines[first]) || text::trim(lines[first]).rfind("```", 0) == 0)) {
    ++first;
    skip_blank();
  }
  std::size_t last = lines.size();
  while (last > first && (text::is_blank(lines[last - 1]) ||
                          text::trim(lines[last - 1]) == "```")) {
    --last;
  }
  std::string out;
  for (std::size_t i = first; i < last; ++i) {
    if (i > first) out.push_back('\n');
    out.append(lines[i]);
  }
  return out;
}

std::string tidy_lines(std::string_view s) {
  std::string out;
  bool pending_blank = false;
  bool any = false;
  for (auto line : text::split_lines(s)) {
    std::string_view l = line;
    while (!l.empty() && (l.back() == ' ' || l.back() == '\t')) l.remove_suffix(1);
    if (text::is_blank(l)) {
      pending_blank = any;
      continue;
    }
    if (any) out += pending_blank ? "\n\n" : "\n";
    out.append(l);
    any = true;
    pending_blank = false;
  }
  return out;
}

}  // namespace

std::string_view to_string(NumericKind kind) {
  switch (kind) {
    case NumericKind::Percentage: return "percentage";
    case NumericKind::DateRange: return "date_range";
    case NumericKind::Year: return "year";
    case NumericKind::LargeNumber: return "large_number";
  }
  return "?";
}

NumericKind parse_numeric_kind(std::string_view name) {
  if (name == "percentage") return NumericKind::Percentage;
  if (name == "date_range") return NumericKind::DateRange;
  if (name == "year") return NumericKind::Year;
  if (name == "large_number") return NumericKind::LargeNumber;
  throw Error(ErrorKind::ParseError, "unknown numeric kind '" + std::string(name) + "'");
}

std::vector<PeriodRange> default_period_map() {
  return {
      {0, 5, "de la madrugada"},
      {6, 11, "de la mañana"},
      {12, 12, "del mediodía"},
      {13, 20, "de la tarde"},
      {21, 23, "de la noche"},
  };
}

void NormalizationConfig::validate() const {
  std::vector<int> hits(24, 0);
  for (const auto& r : period_map) {
    if (r.first_hour < 0 || r.last_hour > 23 || r.first_hour > r.last_hour) {
      throw Error(ErrorKind::ConfigError,
                  "period range " + std::to_string(r.first_hour) + "-" +
                      std::to_string(r.last_hour) + " is not within 0-23");
    }
    if (r.label.empty()) throw Error(ErrorKind::ConfigError, "period label is empty");
    for (int h = r.first_hour; h <= r.last_hour; ++h) ++hits[h];
  }
  for (int h = 0; h < 24; ++h) {
    if (hits[h] != 1) {
      throw Error(ErrorKind::ConfigError,
                  "hour " + std::to_string(h) + " is covered " + std::to_string(hits[h]) +
                      " times by period_map");
    }
  }
}

std::string sentinel(int id) {
  return std::string(kOpen) + "NUM" + std::to_string(id) + std::string(kClose);
}

bool contains_sentinel(std::string_view text) {
  const std::string s(text);
  return std::regex_search(s, sentinel_regex());
}

std::string normalize_time(std::string_view text) {
  const auto map = default_period_map();
  return normalize_time(text, map);
}

std::string normalize_time(std::string_view text, std::span<const PeriodRange> period_map) {
  static const std::regex re(R"(([0-9]{1,2}):([0-9]{2}))");
  const std::string s(text);
  std::string out;
  std::size_t cursor = 0;
  for (auto it = std::sregex_iterator(s.begin(), s.end(), re); it != std::sregex_iterator();
       ++it) {
    const auto& m = *it;
    const auto b = static_cast<std::size_t>(m.position(0));
    std::size_t e = b + static_cast<std::size_t>(m.length(0));
    if (b < cursor || !clean_left(s, b) || !clean_right(s, e)) continue;
    const int hour = std::stoi(m.str(1));
    const int minutes = std::stoi(m.str(2));
    if (hour > 23 || minutes > 59) continue;
    const auto period = period_for(hour, period_map);
    if (period.empty()) continue;

    // Optional unit suffix.
    std::size_t k = e;
    while (k < s.size() && s[k] == ' ') ++k;
    bool keep_period = false;
    auto word_end = [&](std::size_t at) { return !text::is_letter(next_cp(s, at)); };
    if (s.compare(k, 5, "horas") == 0 && word_end(k + 5)) {
      e = k + 5;
    } else if (s.compare(k, 2, "h.") == 0) {
      e = k + 2;
      // The dot may also close the sentence.
      std::size_t j = e;
      while (j < s.size() && s[j] == ' ') ++j;
      keep_period = j >= s.size() || s[j] == '\n' || text::is_upper(next_cp(s, j));
    } else if (k < s.size() && s[k] == 'h' && !text::is_alnum(next_cp(s, k + 1))) {
      e = k + 1;
    }

    out.append(s, cursor, b - cursor);
    const auto capital = take_trailing_article(out);
    const int display = hour % 12 == 0 ? 12 : hour % 12;
    std::string article = display == 1 ? "la" : "las";
    if (capital.value_or(false)) article[0] = 'L';
    out += article + " " + std::to_string(display) + minutes_phrase(minutes) + " ";
    out.append(period);
    if (keep_period) out.push_back('.');
    cursor = e;
  }
  out.append(s, cursor, std::string::npos);
  return out;
}

std::string normalize_money(std::string_view text) {
  static const std::regex re(
      "([0-9]{1,3}(?:\\.[0-9]{3})+|[0-9]{1,3}(?:,[0-9]{3})+|[0-9]+)([.,])([0-9]{2})"
      "(?: |\xC2\xA0)?(EUR|euros|\xE2\x82\xAC)");
  const std::string s(text);
  std::string out;
  std::size_t cursor = 0;
  for (auto it = std::sregex_iterator(s.begin(), s.end(), re); it != std::sregex_iterator();
       ++it) {
    const auto& m = *it;
    const auto b = static_cast<std::size_t>(m.position(0));
    const auto e = b + static_cast<std::size_t>(m.length(0));
    if (!clean_left(s, b)) continue;
    if (text::is_alnum(next_cp(s, e))) continue;
    const std::string whole = m.str(1);
    const char decimal = m.str(2)[0];
    // Thousands and decimal separators must differ.
    if (whole.find(decimal) != std::string::npos) continue;
    out.append(s, cursor, b - cursor);
    out += strip_separators(whole) + " con " + m.str(3) + " euros";
    cursor = e;
  }
  out.append(s, cursor, std::string::npos);
  return out;
}

ProtectedText protect_numerics(std::string_view text) {
  if (contains_sentinel(text)) {
    throw Error(ErrorKind::SentinelCollision, "input already contains a ⟦NUMk⟧ sentinel");
  }
  static const std::regex percentage("[0-9]+(?:[.,][0-9]+)*(?: |\xC2\xA0)?%");
  static const std::regex date_range(
      "[0-9]{1,2} ?(?:al|-|\xE2\x80\x93|\xE2\x80\x94) ?[0-9]{1,2} de "
      "(?:enero|febrero|marzo|abril|mayo|junio|julio|agosto|septiembre|setiembre|"
      "octubre|noviembre|diciembre)",
      std::regex::icase);
  static const std::regex calendar_date("[0-9]{1,2}/[0-9]{1,2}/(?:[0-9]{4}|[0-9]{2})");
  static const std::regex year("[0-9]{4}");
  static const std::regex large_number(
      "[0-9]{1,3}(?:\\.[0-9]{3})+(?:,[0-9]+)?|[0-9]{5,}(?:,[0-9]+)?");

  std::vector<Candidate> candidates;
  collect(text, percentage, NumericKind::Percentage, candidates);
  collect(text, date_range, NumericKind::DateRange, candidates, is_day_range);
  collect(text, calendar_date, NumericKind::DateRange, candidates);
  collect(text, year, NumericKind::Year, candidates, is_year);
  collect(text, large_number, NumericKind::LargeNumber, candidates);

  // Candidates arrive grouped by priority; keep the first that claims a
  // range.
  std::vector<Candidate> accepted;
  for (const auto& c : candidates) {
    const bool overlaps = std::any_of(accepted.begin(), accepted.end(), [&](const Candidate& a) {
      return c.begin < a.end && a.begin < c.end;
    });
    if (!overlaps) accepted.push_back(c);
  }
  std::sort(accepted.begin(), accepted.end(),
            [](const Candidate& a, const Candidate& b) { return a.begin < b.begin; });

  ProtectedText result;
  std::size_t cursor = 0;
  int next_id = 0;
  for (const auto& c : accepted) {
    result.text.append(text.substr(cursor, c.begin - cursor));
    result.text += sentinel(next_id);
    result.spans.push_back({next_id, std::string(text.substr(c.begin, c.end - c.begin)), c.kind});
    ++next_id;
    cursor = c.end;
  }
  result.text.append(text.substr(cursor));
  return result;
}

RestoreResult restore_numerics_lenient(std::string_view text,
                                       std::span<const ProtectedSpan> spans) {
  std::map<int, const ProtectedSpan*> by_id;
  for (const auto& sp : spans) by_id[sp.id] = &sp;

  RestoreResult result;
  std::set<int> seen;
  std::set<int> orphans;
  const std::string s(text);
  std::size_t cursor = 0;
  for (auto it = std::sregex_iterator(s.begin(), s.end(), sentinel_regex());
       it != std::sregex_iterator(); ++it) {
    const auto b = static_cast<std::size_t>(it->position(0));
    const auto e = b + static_cast<std::size_t>(it->length(0));
    result.text.append(s, cursor, b - cursor);
    int id = -1;
    try {
      id = std::stoi(it->str(1));
    } catch (const std::out_of_range&) {
    }
    const auto found = by_id.find(id);
    if (found == by_id.end()) {
      result.text.append(s, b, e - b);
      orphans.insert(id);
    } else {
      result.text += found->second->surface;
      seen.insert(id);
    }
    cursor = e;
  }
  result.text.append(s, cursor, std::string::npos);
  for (const auto& [id, _] : by_id) {
    if (!seen.count(id)) result.dropped.push_back(id);
  }
  result.orphans.assign(orphans.begin(), orphans.end());
  return result;
}

RestoreResult restore_numerics(const ProtectedText& protected_text) {
  auto result = restore_numerics_lenient(protected_text.text, protected_text.spans);
  if (!result.orphans.empty()) {
    std::string ids;
    for (int id : result.orphans) {
      if (!ids.empty()) ids += ",";
      ids += std::to_string(id);
    }
    throw Error(ErrorKind::OrphanSentinel, "no span for sentinel id(s) " + ids);
  }
  return result;
}

ProtectedText preprocess(std::string_view text, const NormalizationConfig& config) {
  std::string working(text);
  if (config.enable_time) working = normalize_time(working, config.period_map);
  if (config.enable_money) working = normalize_money(working);
  if (config.enable_protection) return protect_numerics(working);
  return {std::move(working), {}};
}

PostprocessResult postprocess(std::string_view llm_output,
                              std::span<const ProtectedSpan> spans,
                              const NormalizationConfig& config) {
  PostprocessResult result;
  std::string working = strip_preamble(llm_output);
  auto restored = restore_numerics_lenient(working, spans);
  for (int id : restored.orphans) {
    result.warnings.push_back("OrphanSentinel(" + std::to_string(id) + ")");
  }
  for (int id : restored.dropped) {
    result.warnings.push_back("DroppedSentinel(" + std::to_string(id) + ")");
  }
  working = std::move(restored.text);
  if (config.enable_time) working = normalize_time(working, config.period_map);
  if (config.enable_money) working = normalize_money(working);
  result.text = tidy_lines(working);
  return result;
}

}  // namespace llano::textnorm
