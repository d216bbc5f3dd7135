#include "llano/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <set>

#include "llano/error.hpp"
#include "llano/text.hpp"

namespace llano::metrics {
namespace {

bool is_terminal(char32_t c) {
  return c == U'.' || c == U'!' || c == U'?' || c == 0x2026;
}

bool is_closer(char32_t c) {
  switch (c) {
    case U'"': case U'\'': case U')': case U']':
    case 0xBB: case 0x201D: case 0x2019:
      return true;
    default:
      return false;
  }
}

bool opens_sentence(char32_t c) {
  if (text::is_upper(c) || text::is_digit(c)) return true;
  switch (c) {
    case 0xBF: case 0xA1:             // ¿ ¡
    case U'"': case U'(': case U'\'':
    case 0xAB: case 0x201C: case 0x2018:
    case U'-': case 0x2013: case 0x2014: case 0x2022:
      return true;
    default:
      return false;
  }
}

const std::set<std::string>& abbreviations() {
  static const std::set<std::string> kAbbrev = {
      "sr",    "sra",   "srta",  "sres",  "sras",  "dr",    "dra",   "dres",
      "d",     "dña",   "dª",    "núm",   "num",   "nº",    "n.º",   "art",
      "arts",  "pág",   "págs",  "pag",   "ej",    "p.ej",  "aprox", "avda",
      "av",    "c",     "tel",   "tfno",  "telf",  "ud",    "uds",   "vd",
      "vds",   "excmo", "excma", "ilmo",  "ilma",  "prof",  "profa", "lic",
      "ing",   "arq",   "dpto",  "depto", "admón", "cía",   "vol",   "cap",
      "fig",   "máx",   "mín",   "apdo",  "aptdo", "pza",   "pl",    "ctra",
      "urb",   "esq",   "sta",   "sto",   "gral",  "dcha",  "izq",   "pp",
      "vs",    "cf",    "a.m",   "p.m",   "ee.uu", "s.a",   "s.l",   "cp",
  };
  return kAbbrev;
}

// Lowercased run of non-space characters ending at `dot` (exclusive),
// with leading brackets/quotes removed.
std::string token_before(const std::u32string& cps, std::size_t dot) {
  std::size_t b = dot;
  while (b > 0 && !text::is_space(cps[b - 1])) --b;
  while (b < dot && !text::is_alnum(cps[b])) ++b;
  std::u32string tok = cps.substr(b, dot - b);
  for (auto& c : tok) c = text::to_lower(c);
  return text::encode_utf8(tok);
}

bool is_abbreviation(const std::u32string& cps, std::size_t dot) {
  const std::string tok = token_before(cps, dot);
  if (tok.empty()) return false;
  if (abbreviations().count(tok)) return true;
  // Single capital initial ("J. Pérez").
  std::size_t b = dot;
  while (b > 0 && !text::is_space(cps[b - 1])) --b;
  while (b < dot && !text::is_alnum(cps[b])) ++b;
  return dot - b == 1 && text::is_upper(cps[b]);
}

void emit(std::vector<std::string>& out, std::u32string_view piece) {
  const std::string s(text::trim(text::encode_utf8(piece)));
  if (!s.empty() && !text::is_blank(s)) out.push_back(s);
}

std::map<std::string, std::int64_t> frequencies(std::string_view s) {
  std::map<std::string, std::int64_t> freq;
  for (const auto& tok : text::tokenize_words(s)) ++freq[text::to_lower(tok)];
  return freq;
}

}  // namespace

std::vector<std::string> segment_sentences(std::string_view input) {
  std::vector<std::string> out;
  for (auto line : text::split_lines(input)) {
    if (text::is_blank(line)) continue;
    const std::u32string cps = text::decode_utf8(line);
    const std::size_t n = cps.size();
    std::size_t start = 0;
    std::size_t i = 0;
    while (i < n) {
      if (!is_terminal(cps[i])) {
        ++i;
        continue;
      }
      const std::size_t first_mark = i;
      std::size_t end = i;
      while (end < n && is_terminal(cps[end])) ++end;
      while (end < n && is_closer(cps[end])) ++end;
      std::size_t next = end;
      while (next < n && text::is_space(cps[next])) ++next;

      bool boundary = false;
      if (next == n) {
        boundary = true;
      } else if (next > end && opens_sentence(cps[next])) {
        const bool lone_dot = cps[first_mark] == U'.' &&
                              (end == first_mark + 1 || !is_terminal(cps[first_mark + 1]));
        boundary = !(lone_dot && is_abbreviation(cps, first_mark));
      }
      if (boundary) {
        emit(out, std::u32string_view(cps).substr(start, end - start));
        start = next;
      }
      i = end;
    }
    if (start < n) emit(out, std::u32string_view(cps).substr(start));
  }
  return out;
}

ReadabilityInputs readability_inputs(std::string_view text) {
  const auto tokens = text::tokenize_words(text);
  if (tokens.empty()) throw Error(ErrorKind::NoWords, "text has no word tokens");
  ReadabilityInputs in;
  in.words = tokens.size();
  for (const auto& t : tokens) in.syllables += static_cast<std::size_t>(count_syllables(t));
  in.sentences = std::max<std::size_t>(1, segment_sentences(text).size());
  return in;
}

FernandezHuerta fernandez_huerta(const ReadabilityInputs& in) {
  if (in.words == 0) throw Error(ErrorKind::NoWords, "word count is zero");
  const double w = static_cast<double>(in.words);
  const double syllables_per_100 = 100.0 * static_cast<double>(in.syllables) / w;
  const double sentences_per_100 = 100.0 * static_cast<double>(in.sentences) / w;
  FernandezHuerta fh;
  fh.raw = 206.84 - 0.60 * syllables_per_100 - 1.02 * sentences_per_100;
  fh.score = std::clamp(fh.raw, 0.0, 100.0);
  return fh;
}

double fernandez_huerta(std::string_view text) {
  return fernandez_huerta(readability_inputs(text)).score;
}

double bow_cosine(std::string_view a, std::string_view b) {
  const auto fa = frequencies(a);
  const auto fb = frequencies(b);
  if (fa.empty() || fb.empty()) return 0.0;
  // Integer accumulation keeps the result exactly symmetric and exactly
  // invariant under scaling either side.
  std::int64_t dot = 0;
  auto ia = fa.begin();
  auto ib = fb.begin();
  while (ia != fa.end() && ib != fb.end()) {
    if (ia->first < ib->first) {
      ++ia;
    } else if (ib->first < ia->first) {
      ++ib;
    } else {
      dot += ia->second * ib->second;
      ++ia;
      ++ib;
    }
  }
  std::int64_t na = 0, nb = 0;
  for (const auto& [_, c] : fa) na += c * c;
  for (const auto& [_, c] : fb) nb += c * c;
  // One rounding step in the denominator: sqrt(2)*sqrt(2) is not 2.
  const double denom = std::sqrt(static_cast<double>(na) * static_cast<double>(nb));
  return std::clamp(static_cast<double>(dot) / denom, 0.0, 1.0);
}

double cosine(const Embedding& a, const Embedding& b) {
  if (a.size() != b.size()) {
    throw Error(ErrorKind::DimensionMismatch, "embedding dimensions " +
                                                  std::to_string(a.size()) + " and " +
                                                  std::to_string(b.size()));
  }
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    dot += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  if (na == 0.0 || nb == 0.0) return 0.0;
  return std::clamp(dot / std::sqrt(na * nb), -1.0, 1.0);
}

double embedding_cosine(std::string_view a, std::string_view b, Embedder& embedder) {
  const std::vector<std::string> texts{std::string(a), std::string(b)};
  const auto vectors = embedder.embed(texts);
  if (vectors.size() != 2) {
    throw Error(ErrorKind::EmbedderUnavailable,
                "embedder returned " + std::to_string(vectors.size()) + " vectors for 2 texts");
  }
  return cosine(vectors[0], vectors[1]);
}

SimScore sim_score(std::string_view output, std::string_view reference, Embedder* embedder,
                   bool strict) {
  SimScore s;
  s.bow = bow_cosine(output, reference);
  if (embedder) {
    try {
      s.embedding = embedding_cosine(output, reference, *embedder);
    } catch (const Error& e) {
      if (strict || e.kind() != ErrorKind::EmbedderUnavailable) throw;
    }
  }
  if (s.embedding) {
    s.combined = (s.bow + *s.embedding) / 2.0;
  } else {
    s.combined = s.bow;
    s.degraded = true;
  }
  return s;
}

PairReport evaluate_pair(std::string doc_id, std::string_view output, std::string_view reference,
                         Embedder* embedder, bool strict) {
  const auto inputs = readability_inputs(output);
  const auto fh = fernandez_huerta(inputs);
  PairReport r;
  r.doc_id = std::move(doc_id);
  r.sim = sim_score(output, reference, embedder, strict);
  r.fh = fh.score;
  r.fh_raw = fh.raw;
  r.output_words = inputs.words;
  r.reference_words = text::count_words(reference);
  return r;
}

}  // namespace llano::metrics
