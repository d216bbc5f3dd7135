#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "llano/corpus.hpp"
#include "llano/embedder.hpp"
#include "llano/llm.hpp"
#include "llano/metrics.hpp"
#include "llano/prompts.hpp"
#include "llano/textnorm.hpp"

namespace llano::pipeline {

enum class BackendKind { Live, Replay };
enum class EmbedderKind { Http, OfflineFake, None };

struct BackendConfig {
  BackendKind kind = BackendKind::Replay;
  std::string model = "default";
  int max_output_tokens = 1024;
  std::filesystem::path replay_store;
  // live only
  std::string base_url;
  bool record = false;
  int timeout_s = 120;
  int max_retries = 3;
};

struct EmbedderConfig {
  EmbedderKind kind = EmbedderKind::None;
  std::string base_url;
  std::string model;
  std::size_t dimension = 256;
  bool strict = false;
};

// JSON config file (--config). Relative paths are resolved against the
// config file's directory.
struct RunConfig {
  std::optional<std::filesystem::path> corpus_path;
  std::optional<CorpusFormat> corpus_format;
  prompts::Strategy strategy = prompts::Strategy::P2;
  BackendConfig backend;
  textnorm::NormalizationConfig normalization;
  EmbedderConfig embedder;
  std::filesystem::path prompts_dir;
  std::filesystem::path output_dir = "out";
  std::size_t concurrency = 4;
  std::optional<std::uint64_t> seed;
  std::string system_name = "llano";
  std::size_t short_news_max_words = 60;

  // SHA-256 of the canonical (key-sorted) config JSON as written.
  std::string digest;
};

// Throws ConfigError.
RunConfig parse_config(const nlohmann::json& doc, const std::filesystem::path& base_dir);
RunConfig load_config(const std::filesystem::path& path);
RunConfig default_config();

std::unique_ptr<Embedder> make_embedder(const EmbedderConfig& config);
std::shared_ptr<llm::Backend> make_backend(const RunConfig& config);

struct DocumentFailure {
  std::string id;
  std::string error;
};

struct BatchResult {
  std::vector<llm::AdaptationResult> successes;  // corpus order
  std::vector<DocumentFailure> failures;         // corpus order
  std::size_t backend_calls = 0;
};

// Runs simplify_document over the corpus with at most `concurrency`
// documents in flight. Failed documents are reported, not fatal.
BatchResult simplify_corpus(const Corpus& corpus, prompts::Strategy strategy,
                            llm::Backend& backend, const textnorm::NormalizationConfig& norm,
                            const prompts::TemplateSet& templates,
                            const llm::GenerationSettings& settings, std::size_t concurrency);

std::string adaptation_jsonl(const std::vector<llm::AdaptationResult>& results);

struct Aggregates {
  std::size_t documents = 0;
  double avg_sim_bow = 0.0;
  std::optional<double> avg_sim_embedding;
  double avg_sim_combined = 0.0;
  double avg_fh = 0.0;
  double avg_fh_raw = 0.0;
};

struct EvalReport {
  std::string system_name;
  std::vector<metrics::PairReport> documents;  // sorted by id
  Aggregates aggregates;
  bool degraded = false;
  std::vector<std::string> failed_ids;
  std::vector<std::string> unmatched_output_ids;
  std::vector<std::string> unmatched_reference_ids;
  nlohmann::ordered_json manifest = nlohmann::ordered_json::object();
};

// Joins on id. Throws NoOverlap when nothing joins.
EvalReport evaluate(const std::map<std::string, std::string>& outputs,
                    const std::map<std::string, std::string>& references, Embedder* embedder,
                    bool strict, std::string system_name);

// Arithmetic means over the per-document section.
Aggregates aggregate(const std::vector<metrics::PairReport>& documents);

nlohmann::ordered_json to_json(const EvalReport& report);
// Throws ParseError.
EvalReport report_from_json(const nlohmann::json& doc);

// id -> output text from a JSONL/CSV file with an id column and one of
// final/output/text/adapted.
std::map<std::string, std::string> load_outputs(const std::filesystem::path& path);
// id -> reference adaptation for every document that has one.
std::map<std::string, std::string> load_references(const std::filesystem::path& path);

enum class ReportFormat { Text, Markdown, Csv };
enum class RankMetric { Sim, Fh };

ReportFormat parse_report_format(std::string_view name);
RankMetric parse_rank_metric(std::string_view name);

// Sorted by the chosen metric descending, ties by system name.
std::string render_ranking(std::vector<EvalReport> reports, RankMetric metric,
                           ReportFormat format);

std::string render_stats(const CorpusStats& original, const std::optional<CorpusStats>& adapted);

// <stem>.manifest.json next to `artifact`.
std::filesystem::path manifest_path_for(const std::filesystem::path& artifact);
// ISO-8601 UTC; honours SOURCE_DATE_EPOCH for reproducible artifacts.
std::string manifest_timestamp();

}  // namespace llano::pipeline
