#include "llano/corpus.hpp"

#include <algorithm>
#include <map>
#include <random>
#include <unordered_set>

#include "json.hpp"

#include "llano/csv.hpp"
#include "llano/error.hpp"
#include "llano/io.hpp"
#include "llano/text.hpp"

namespace llano {
namespace {

using nlohmann::ordered_json;

std::optional<std::string> non_empty(std::optional<std::string> v) {
  if (v && v->empty()) return std::nullopt;
  return v;
}

std::string row_label(std::size_t row) { return "row " + std::to_string(row); }

bool all_digits(std::string_view s) {
  return !s.empty() && std::all_of(s.begin(), s.end(),
                                   [](char c) { return c >= '0' && c <= '9'; });
}

const std::optional<std::string>& group_value(const Document& d, GroupKey key) {
  return key == GroupKey::Origin ? d.origin : d.topic;
}

// Uniform integer in [0, n) from the raw 64-bit stream. mt19937_64 output
// is fully specified, so this keeps selections identical across standard
// library implementations (std::uniform_int_distribution is not).
std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t n) {
  const std::uint64_t bucket = std::mt19937_64::max() / n;
  while (true) {
    const std::uint64_t q = rng() / bucket;
    if (q < n) return q;
  }
}

Document document_from_json(const nlohmann::json& obj, std::size_t row) {
  if (!obj.is_object()) {
    throw Error(ErrorKind::ParseError, row_label(row) + " is not a JSON object");
  }
  auto text_field = [&](const char* key, bool required) -> std::optional<std::string> {
    const auto it = obj.find(key);
    if (it == obj.end() || it->is_null()) {
      if (required) {
        throw Error(ErrorKind::MissingField,
                    std::string("field '") + key + "' missing in " + row_label(row));
      }
      return std::nullopt;
    }
    if (it->is_string()) return it->get<std::string>();
    if (std::string_view(key) == "id" && it->is_number_integer()) {
      return std::to_string(it->get<long long>());
    }
    throw Error(ErrorKind::ParseError,
                std::string("field '") + key + "' is not a string in " + row_label(row));
  };
  auto id = *text_field("id", true);
  auto original = *text_field("original", true);
  if (id.empty()) {
    throw Error(ErrorKind::MissingField, "field 'id' empty in " + row_label(row));
  }
  if (text::is_blank(original)) {
    throw Error(ErrorKind::MissingField, "field 'original' empty in " + row_label(row));
  }
  return Document::make(std::move(id), std::move(original), text_field("adapted", false),
                        text_field("origin", false), text_field("topic", false));
}

std::vector<Document> parse_jsonl(std::string_view data) {
  std::vector<Document> docs;
  std::size_t row = 0;
  for (auto line : text::split_lines(data)) {
    if (text::trim(line).empty()) continue;
    ++row;
    nlohmann::json obj;
    try {
      obj = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      throw Error(ErrorKind::ParseError, row_label(row) + ": " + e.what());
    }
    docs.push_back(document_from_json(obj, row));
  }
  return docs;
}

std::vector<Document> parse_csv_corpus(std::string_view data) {
  const auto records = csv::parse(data);
  if (records.empty()) return {};
  const auto& header = records.front();
  std::map<std::string, std::size_t> column;
  for (std::size_t i = 0; i < header.size(); ++i) {
    column.emplace(std::string(text::trim(header[i])), i);
  }
  for (const char* required : {"id", "original"}) {
    if (!column.count(required)) {
      throw Error(ErrorKind::MissingField,
                  std::string("CSV header lacks column '") + required + "'");
    }
  }
  std::vector<Document> docs;
  for (std::size_t r = 1; r < records.size(); ++r) {
    const auto& rec = records[r];
    if (rec.size() != header.size()) {
      throw Error(ErrorKind::ParseError,
                  row_label(r) + " has " + std::to_string(rec.size()) +
                      " fields, header has " + std::to_string(header.size()));
    }
    auto get = [&](const char* key) -> std::optional<std::string> {
      const auto it = column.find(key);
      if (it == column.end()) return std::nullopt;
      return rec[it->second];
    };
    auto id = *get("id");
    auto original = *get("original");
    if (id.empty()) {
      throw Error(ErrorKind::MissingField, "field 'id' empty in " + row_label(r));
    }
    if (text::is_blank(original)) {
      throw Error(ErrorKind::MissingField, "field 'original' empty in " + row_label(r));
    }
    docs.push_back(Document::make(std::move(id), std::move(original), get("adapted"),
                                  get("origin"), get("topic")));
  }
  return docs;
}

}  // namespace

Document Document::make(std::string id, std::string original,
                        std::optional<std::string> adapted,
                        std::optional<std::string> origin,
                        std::optional<std::string> topic) {
  if (id.empty()) throw Error(ErrorKind::InvalidArgument, "document id is empty");
  if (text::is_blank(original)) {
    throw Error(ErrorKind::InvalidArgument, "document '" + id + "' has empty original text");
  }
  Document d;
  d.word_count = text::count_words(original);
  d.id = std::move(id);
  d.original = std::move(original);
  d.adapted = non_empty(std::move(adapted));
  d.origin = non_empty(std::move(origin));
  d.topic = non_empty(std::move(topic));
  return d;
}

Corpus::Corpus(std::vector<Document> documents, std::optional<std::string> source_path)
    : documents_(std::move(documents)), source_path_(std::move(source_path)) {
  std::unordered_set<std::string_view> seen;
  for (const auto& d : documents_) {
    if (!seen.insert(d.id).second) {
      throw Error(ErrorKind::DuplicateId, "id '" + d.id + "' appears more than once");
    }
  }
}

const Document* Corpus::find(std::string_view id) const {
  for (const auto& d : documents_) {
    if (d.id == id) return &d;
  }
  return nullptr;
}

CorpusFormat parse_corpus_format(std::string_view name) {
  if (name == "csv") return CorpusFormat::Csv;
  if (name == "jsonl") return CorpusFormat::Jsonl;
  throw Error(ErrorKind::InvalidArgument, "unknown corpus format '" + std::string(name) + "'");
}

CorpusFormat corpus_format_from_path(const std::filesystem::path& path) {
  const auto ext = path.extension().string();
  if (ext == ".csv") return CorpusFormat::Csv;
  if (ext == ".jsonl" || ext == ".json" || ext == ".ndjson") return CorpusFormat::Jsonl;
  throw Error(ErrorKind::InvalidArgument,
              "cannot infer corpus format from '" + path.string() + "'");
}

Corpus parse_corpus(std::string_view data, CorpusFormat format) {
  if (data.substr(0, 3) == "\xEF\xBB\xBF") data.remove_prefix(3);
  if (!text::is_valid_utf8(data)) {
    throw Error(ErrorKind::EncodingError, "input is not valid UTF-8");
  }
  auto docs = format == CorpusFormat::Csv ? parse_csv_corpus(data) : parse_jsonl(data);
  if (docs.empty()) throw Error(ErrorKind::EmptyCorpus, "no documents");
  return Corpus(std::move(docs));
}

Corpus load_corpus(const std::filesystem::path& path, CorpusFormat format) {
  const std::string data = io::read_file(path);
  try {
    Corpus c = parse_corpus(data, format);
    return Corpus(c.documents(), path.string());
  } catch (const Error& e) {
    throw Error(e.kind(), path.string() + ": " + e.detail());
  }
}

std::string serialize_corpus(const Corpus& corpus, CorpusFormat format) {
  std::string out;
  if (format == CorpusFormat::Csv) {
    out += csv::format_record({"id", "original", "adapted", "origin", "topic"});
    for (const auto& d : corpus.documents()) {
      out += csv::format_record({d.id, d.original, d.adapted.value_or(""),
                                 d.origin.value_or(""), d.topic.value_or("")});
    }
    return out;
  }
  for (const auto& d : corpus.documents()) {
    ordered_json obj;
    obj["id"] = d.id;
    obj["original"] = d.original;
    if (d.adapted) obj["adapted"] = *d.adapted;
    if (d.origin) obj["origin"] = *d.origin;
    if (d.topic) obj["topic"] = *d.topic;
    out += obj.dump();
    out.push_back('\n');
  }
  return out;
}

void write_corpus(const Corpus& corpus, const std::filesystem::path& path,
                  CorpusFormat format) {
  io::write_file(path, serialize_corpus(corpus, format));
}

CorpusStats corpus_stats(const Corpus& corpus, TextField field) {
  CorpusStats stats;
  stats.n_samples = corpus.size();
  if (corpus.empty()) return stats;

  std::size_t total_words = 0;
  std::size_t total_lines = 0;
  std::size_t total_chars = 0;
  for (const auto& d : corpus.documents()) {
    const std::string* body = &d.original;
    if (field == TextField::Adapted) {
      if (!d.adapted) {
        throw Error(ErrorKind::MissingAdaptation, "document '" + d.id + "' has no adaptation");
      }
      body = &*d.adapted;
    }
    const auto tokens = text::tokenize_words(*body);
    total_words += tokens.size();
    for (const auto& t : tokens) total_chars += text::char_length(t);
    total_lines += text::count_nonempty_lines(*body);
  }
  const auto n = static_cast<double>(corpus.size());
  stats.avg_words = static_cast<double>(total_words) / n;
  stats.avg_lines = static_cast<double>(total_lines) / n;
  stats.avg_word_length_chars =
      total_words ? static_cast<double>(total_chars) / static_cast<double>(total_words) : 0.0;
  return stats;
}

bool id_less(std::string_view a, std::string_view b) {
  if (all_digits(a) && all_digits(b)) {
    auto strip = [](std::string_view s) {
      const auto nz = s.find_first_not_of('0');
      return nz == std::string_view::npos ? std::string_view{} : s.substr(nz);
    };
    const auto sa = strip(a), sb = strip(b);
    if (sa.size() != sb.size()) return sa.size() < sb.size();
    if (sa != sb) return sa < sb;
    return a < b;  // "007" vs "7"
  }
  return a < b;
}

Corpus build_subset(const Corpus& corpus, const SubsetSpec& spec) {
  if (spec.size == 0) {
    throw Error(ErrorKind::InvalidArgument, "subset size must be positive");
  }
  if (spec.size > corpus.size()) {
    throw Error(ErrorKind::SizeExceedsCorpus,
                "subset size " + std::to_string(spec.size) + " exceeds corpus size " +
                    std::to_string(corpus.size()));
  }
  const auto& docs = corpus.documents();
  std::vector<Document> picked;
  picked.reserve(spec.size);

  switch (spec.kind) {
    case SubsetKind::Smallest: {
      std::vector<const Document*> order;
      for (const auto& d : docs) order.push_back(&d);
      std::sort(order.begin(), order.end(), [](const Document* a, const Document* b) {
        if (a->word_count != b->word_count) return a->word_count < b->word_count;
        return id_less(a->id, b->id);
      });
      for (std::size_t i = 0; i < spec.size; ++i) picked.push_back(*order[i]);
      break;
    }
    case SubsetKind::Random: {
      if (!spec.seed) throw Error(ErrorKind::MissingSeed, "random subset requires a seed");
      std::vector<std::size_t> by_id(docs.size());
      for (std::size_t i = 0; i < docs.size(); ++i) by_id[i] = i;
      std::sort(by_id.begin(), by_id.end(), [&](std::size_t a, std::size_t b) {
        return id_less(docs[a].id, docs[b].id);
      });
      std::mt19937_64 rng(*spec.seed);
      // Partial Fisher-Yates: the first `size` slots become the sample.
      for (std::size_t i = 0; i < spec.size; ++i) {
        const auto j = i + uniform_below(rng, by_id.size() - i);
        std::swap(by_id[i], by_id[j]);
      }
      std::vector<std::size_t> chosen(by_id.begin(), by_id.begin() + spec.size);
      std::sort(chosen.begin(), chosen.end());
      for (auto idx : chosen) picked.push_back(docs[idx]);
      break;
    }
    case SubsetKind::Categories: {
      if (!spec.group_key) {
        throw Error(ErrorKind::MissingGroupKey, "categories subset requires a group key");
      }
      std::map<std::string, std::vector<const Document*>> groups;
      for (const auto& d : docs) {
        const auto& value = group_value(d, *spec.group_key);
        if (!value) {
          throw Error(ErrorKind::MissingGroupKey,
                      "document '" + d.id + "' has no " +
                          std::string(to_string(*spec.group_key)));
        }
        groups[*value].push_back(&d);
      }
      for (auto& [_, members] : groups) {
        std::sort(members.begin(), members.end(), [](const Document* a, const Document* b) {
          return id_less(a->id, b->id);
        });
      }
      for (std::size_t round = 0; picked.size() < spec.size; ++round) {
        for (const auto& [_, members] : groups) {
          if (round < members.size() && picked.size() < spec.size) {
            picked.push_back(*members[round]);
          }
        }
      }
      break;
    }
  }
  return Corpus(std::move(picked), corpus.source_path());
}

std::string_view to_string(SubsetKind kind) {
  switch (kind) {
    case SubsetKind::Smallest: return "smallest";
    case SubsetKind::Random: return "random";
    case SubsetKind::Categories: return "categories";
  }
  return "?";
}

std::string_view to_string(GroupKey key) {
  return key == GroupKey::Origin ? "origin" : "topic";
}

SubsetKind parse_subset_kind(std::string_view name) {
  if (name == "smallest") return SubsetKind::Smallest;
  if (name == "random") return SubsetKind::Random;
  if (name == "categories") return SubsetKind::Categories;
  throw Error(ErrorKind::InvalidArgument, "unknown subset kind '" + std::string(name) + "'");
}

GroupKey parse_group_key(std::string_view name) {
  if (name == "origin") return GroupKey::Origin;
  if (name == "topic") return GroupKey::Topic;
  throw Error(ErrorKind::InvalidArgument, "unknown group key '" + std::string(name) + "'");
}

}  // namespace llano
