#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace llano {

// One corpus entry: an original text and, optionally, its reference
// plain-language adaptation. Empty optional fields are stored as nullopt
// so CSV and JSONL round-trip to the same value.
struct Document {
  std::string id;
  std::string original;
  std::optional<std::string> adapted;
  std::optional<std::string> origin;
  std::optional<std::string> topic;
  std::size_t word_count = 0;  // tokens in `original`

  // Validates id/original and derives word_count.
  static Document make(std::string id, std::string original,
                       std::optional<std::string> adapted = std::nullopt,
                       std::optional<std::string> origin = std::nullopt,
                       std::optional<std::string> topic = std::nullopt);

  bool operator==(const Document&) const = default;
};

class Corpus {
 public:
  Corpus() = default;
  // Throws DuplicateId.
  explicit Corpus(std::vector<Document> documents,
                  std::optional<std::string> source_path = std::nullopt);

  const std::vector<Document>& documents() const { return documents_; }
  std::size_t size() const { return documents_.size(); }
  bool empty() const { return documents_.empty(); }
  const std::optional<std::string>& source_path() const { return source_path_; }
  const Document* find(std::string_view id) const;

  // Source path is provenance only and does not take part in equality.
  bool operator==(const Corpus& other) const { return documents_ == other.documents_; }

 private:
  std::vector<Document> documents_;
  std::optional<std::string> source_path_;
};

enum class CorpusFormat { Csv, Jsonl };

CorpusFormat parse_corpus_format(std::string_view name);
// ".csv" -> Csv, ".jsonl"/".json"/".ndjson" -> Jsonl.
CorpusFormat corpus_format_from_path(const std::filesystem::path& path);

Corpus load_corpus(const std::filesystem::path& path, CorpusFormat format);
Corpus parse_corpus(std::string_view data, CorpusFormat format);
void write_corpus(const Corpus& corpus, const std::filesystem::path& path,
                  CorpusFormat format);
std::string serialize_corpus(const Corpus& corpus, CorpusFormat format);

enum class TextField { Original, Adapted };

struct CorpusStats {
  std::size_t n_samples = 0;
  double avg_words = 0.0;
  double avg_lines = 0.0;
  // Mean over every word token in the corpus, not a mean of
  // per-document means.
  double avg_word_length_chars = 0.0;
};

CorpusStats corpus_stats(const Corpus& corpus, TextField field);

enum class SubsetKind { Smallest, Random, Categories };
enum class GroupKey { Origin, Topic };

struct SubsetSpec {
  SubsetKind kind = SubsetKind::Smallest;
  std::size_t size = 0;
  std::optional<std::uint64_t> seed;   // Random only
  std::optional<GroupKey> group_key;   // Categories only
};

// Smallest: fewest original words, ties by ascending id, in that order.
// Random: uniform sample without replacement drawn over the id-sorted
//   documents, returned in corpus order.
// Categories: round-robin over group values (sorted), each group sorted
//   by id.
Corpus build_subset(const Corpus& corpus, const SubsetSpec& spec);

// Id ordering: numeric when both ids are all digits, lexicographic
// otherwise.
bool id_less(std::string_view a, std::string_view b);

std::string_view to_string(SubsetKind kind);
std::string_view to_string(GroupKey key);
SubsetKind parse_subset_kind(std::string_view name);
GroupKey parse_group_key(std::string_view name);

}  // namespace llano
