#pragma once

// Readability (Fernández-Huerta) and similarity (BoW + embedding cosine)
// metrics for Spanish plain-language output.

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "llano/embedder.hpp"

namespace llano::metrics {

// Rule-based Spanish syllable count. Never returns less than 1.
int count_syllables(std::string_view word);

std::vector<std::string> segment_sentences(std::string_view text);

struct ReadabilityInputs {
  std::size_t words = 0;
  std::size_t syllables = 0;
  std::size_t sentences = 0;
};

// Throws NoWords if the text has no word tokens. Sentences are floored
// at 1 so fragments without terminal punctuation still score.
ReadabilityInputs readability_inputs(std::string_view text);

struct FernandezHuerta {
  double raw = 0.0;    // 206.84 - 0.60 P - 1.02 F
  double score = 0.0;  // raw clamped to [0, 100]
};

FernandezHuerta fernandez_huerta(const ReadabilityInputs& in);
double fernandez_huerta(std::string_view text);

// Lowercased word-frequency cosine. Either side empty -> 0.
double bow_cosine(std::string_view a, std::string_view b);

// Throws DimensionMismatch. Zero vectors give 0.
double cosine(const Embedding& a, const Embedding& b);
double embedding_cosine(std::string_view a, std::string_view b, Embedder& embedder);

struct SimScore {
  double bow = 0.0;
  std::optional<double> embedding;
  double combined = 0.0;
  bool degraded = false;  // BoW only
};

// combined = (bow + embedding) / 2, or bow alone when no embedder is given
// or (unless strict) the embedder is unavailable.
SimScore sim_score(std::string_view output, std::string_view reference,
                   Embedder* embedder, bool strict = false);

struct PairReport {
  std::string doc_id;
  SimScore sim;
  double fh = 0.0;
  double fh_raw = 0.0;
  std::size_t output_words = 0;
  std::size_t reference_words = 0;
};

// FH is scored on the output only. Throws NoWords for an empty output.
PairReport evaluate_pair(std::string doc_id, std::string_view output,
                         std::string_view reference, Embedder* embedder,
                         bool strict = false);

}  // namespace llano::metrics
