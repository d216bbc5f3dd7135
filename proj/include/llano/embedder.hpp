#pragma once

#include <chrono>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace llano {

using Embedding = std::vector<double>;

// Maps texts to fixed-dimension vectors. Implementations must tolerate
// concurrent calls.
class Embedder {
 public:
  virtual ~Embedder() = default;
  // One vector per input, same order. Throws EmbedderUnavailable.
  virtual std::vector<Embedding> embed(std::span<const std::string> texts) = 0;
  virtual std::string id() const = 0;
};

// Offline stand-in: lowercased character trigrams hashed (FNV-1a) into
// `dimension` signed buckets. Deterministic across platforms.
class HashedTrigramEmbedder final : public Embedder {
 public:
  explicit HashedTrigramEmbedder(std::size_t dimension = 256);
  std::vector<Embedding> embed(std::span<const std::string> texts) override;
  std::string id() const override;

 private:
  std::size_t dimension_;
};

struct HttpEmbedderOptions {
  std::string base_url;  // e.g. https://api.example.com/v1
  std::string model;
  std::string api_key_env = "LLANO_API_KEY";  // optional for embeddings
  std::chrono::seconds timeout{60};
};

// POST {base_url}/embeddings with {"model", "input": [...]}, reading
// data[i].embedding from the response.
class HttpEmbedder final : public Embedder {
 public:
  explicit HttpEmbedder(HttpEmbedderOptions options);
  std::vector<Embedding> embed(std::span<const std::string> texts) override;
  std::string id() const override;

 private:
  HttpEmbedderOptions options_;
};

}  // namespace llano
