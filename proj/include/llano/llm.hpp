#pragma once

// Chat-model backends. Generation is always deterministic (temperature 0
// on the wire). The replay store keys recorded responses by a fingerprint
// of model + canonicalized messages, so offline runs are reproducible.

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>
#include <string_view>
#include <vector>

#include "llano/corpus.hpp"
#include "llano/prompts.hpp"
#include "llano/textnorm.hpp"

namespace llano::llm {

struct GenerationRequest {
  prompts::MessageSet messages;
  std::string model_name;
  int max_output_tokens = 1024;
  bool deterministic = true;

  // Throws InvalidArgument.
  void validate() const;
};

struct Usage {
  std::int64_t input_tokens = 0;
  std::int64_t output_tokens = 0;

  bool operator==(const Usage&) const = default;
};

struct GenerationResponse {
  std::string text;  // assistant content only
  Usage usage;
  std::int64_t latency_ms = 0;
  std::string backend_id;

  bool operator==(const GenerationResponse&) const = default;
};

// CRLF/CR -> LF, trailing whitespace removed.
std::string canonicalize(std::string_view content);
// SHA-256 hex over model name and canonicalized role/content pairs.
std::string fingerprint(const GenerationRequest& request);

class Backend {
 public:
  virtual ~Backend() = default;
  virtual GenerationResponse complete(const GenerationRequest& request) = 0;
  virtual std::string id() const = 0;
};

// Validates the request, then delegates.
GenerationResponse complete(Backend& backend, const GenerationRequest& request);

struct LiveOptions {
  std::string base_url;  // e.g. https://api.example.com/v1
  std::string api_key_env = "LLANO_API_KEY";
  std::chrono::milliseconds timeout{120'000};
  // Retries apply to 5xx and timeouts only; delay doubles each time.
  int max_retries = 3;
  std::chrono::milliseconds initial_backoff{1000};
  std::function<void(std::chrono::milliseconds)> sleep;  // default: this_thread::sleep_for
};

// OpenAI-style chat completions client: POST {base_url}/chat/completions.
class LiveBackend final : public Backend {
 public:
  explicit LiveBackend(LiveOptions options);
  // Throws AuthMissing before any network I/O when the key is unset.
  GenerationResponse complete(const GenerationRequest& request) override;
  std::string id() const override;

 private:
  LiveOptions options_;
};

struct ReplayEntry {
  std::string fingerprint;
  std::string model_name;
  std::vector<prompts::Message> messages;
  GenerationResponse response;
};

// File-backed fingerprint -> response map, one JSON object per line.
// Thread-safe; writes are serialized.
class ReplayStore {
 public:
  ReplayStore() = default;
  // Missing file -> empty store bound to `path`. Later lines override
  // earlier ones with the same fingerprint.
  static std::unique_ptr<ReplayStore> open(const std::filesystem::path& path);

  std::optional<GenerationResponse> find(std::string_view fingerprint) const;
  // Inserts and, when bound to a file, appends the line.
  void put(const GenerationRequest& request, const GenerationResponse& response);
  std::size_t size() const;
  std::vector<ReplayEntry> entries() const;  // sorted by fingerprint
  // Rewrites the whole file sorted by fingerprint.
  void save(const std::filesystem::path& path) const;

  static std::string serialize(const ReplayEntry& entry);
  static ReplayEntry deserialize(std::string_view line);

 private:
  mutable std::shared_mutex mu_;
  std::map<std::string, ReplayEntry, std::less<>> entries_;
  std::optional<std::filesystem::path> path_;
};

class ReplayBackend final : public Backend {
 public:
  explicit ReplayBackend(std::shared_ptr<const ReplayStore> store);
  // Throws ReplayMiss.
  GenerationResponse complete(const GenerationRequest& request) override;
  std::string id() const override { return "replay"; }

 private:
  std::shared_ptr<const ReplayStore> store_;
};

// Calls the live backend and persists every response.
GenerationResponse record(Backend& live, ReplayStore& store, const GenerationRequest& request);

class RecordingBackend final : public Backend {
 public:
  RecordingBackend(std::shared_ptr<Backend> live, std::shared_ptr<ReplayStore> store);
  GenerationResponse complete(const GenerationRequest& request) override;
  std::string id() const override;

 private:
  std::shared_ptr<Backend> live_;
  std::shared_ptr<ReplayStore> store_;
};

struct GenerationSettings {
  std::string model_name;
  int max_output_tokens = 1024;
  prompts::ClassifierOptions classifier;
};

struct AdaptationResult {
  std::string doc_id;
  std::string final_text;
  std::vector<std::string> steps;  // raw model output per step
  std::optional<prompts::Category> category;
  std::vector<std::string> warnings;
  // User messages sent, one per step (after preprocessing).
  std::vector<std::string> prompts_sent;
};

// preprocess -> plan -> one backend call per step (P1 feeds step 1's
// output into step 2) -> postprocess. Backend errors are rethrown with
// the document id in the message.
AdaptationResult simplify_document(const Document& doc, prompts::Strategy strategy,
                                   Backend& backend,
                                   const textnorm::NormalizationConfig& norm,
                                   const prompts::TemplateSet& templates,
                                   const GenerationSettings& settings);

}  // namespace llano::llm
