#pragma once

// Deterministic pre/postprocessing for Spanish administrative text:
// clock times and euro amounts are rewritten in spoken form, and fragile
// numerics are swapped for sentinels ⟦NUMk⟧ so the model cannot alter
// them.

#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace llano::textnorm {

enum class NumericKind { Percentage, DateRange, Year, LargeNumber };

std::string_view to_string(NumericKind kind);
NumericKind parse_numeric_kind(std::string_view name);

struct ProtectedSpan {
  int id = 0;
  std::string surface;
  NumericKind kind = NumericKind::Year;

  bool operator==(const ProtectedSpan&) const = default;
};

struct ProtectedText {
  std::string text;
  std::vector<ProtectedSpan> spans;

  bool operator==(const ProtectedText&) const = default;
};

// Inclusive hour range [first_hour, last_hour] -> day-period phrase
// ("de la tarde", "del mediodía").
struct PeriodRange {
  int first_hour = 0;
  int last_hour = 0;
  std::string label;

  bool operator==(const PeriodRange&) const = default;
};

std::vector<PeriodRange> default_period_map();

struct NormalizationConfig {
  bool enable_time = true;
  bool enable_money = true;
  bool enable_protection = true;
  std::vector<PeriodRange> period_map = default_period_map();

  // Throws ConfigError unless period_map covers hours 0..23 exactly once.
  void validate() const;

  bool operator==(const NormalizationConfig&) const = default;
};

std::string sentinel(int id);

// "a las 20:00 horas" -> "a las 8 de la tarde". A preceding article
// "la"/"las" is absorbed into the rewrite. Invalid clock values are left
// alone.
std::string normalize_time(std::string_view text,
                           std::span<const PeriodRange> period_map);
std::string normalize_time(std::string_view text);

// "13.50 EUR" / "13,50 €" -> "13 con 50 euros". Whole amounts are left
// alone.
std::string normalize_money(std::string_view text);

// Throws SentinelCollision if the input already contains a sentinel.
ProtectedText protect_numerics(std::string_view text);

struct RestoreResult {
  std::string text;
  std::vector<int> dropped;  // spans whose sentinel never appeared
  std::vector<int> orphans;  // sentinels without a span (left verbatim)
};

// Throws OrphanSentinel if the text references an unknown id. Dropped
// sentinels are reported, not fatal.
RestoreResult restore_numerics(const ProtectedText& protected_text);
// Same, but orphans are reported instead of thrown.
RestoreResult restore_numerics_lenient(std::string_view text,
                                       std::span<const ProtectedSpan> spans);

bool contains_sentinel(std::string_view text);

// time -> money -> protect, each stage gated by the config.
ProtectedText preprocess(std::string_view text, const NormalizationConfig& config);

struct PostprocessResult {
  std::string text;
  std::vector<std::string> warnings;
};

// Strips an echoed preamble, restores sentinels, re-applies the time and
// money rewrites, trims trailing spaces and collapses blank-line runs.
// Sentinel problems become warnings.
PostprocessResult postprocess(std::string_view llm_output,
                              std::span<const ProtectedSpan> spans,
                              const NormalizationConfig& config);

}  // namespace llano::textnorm
