#pragma once

// Test-only backends and helpers shared by the unit tests, the acceptance
// suite and the golden-data tool.

#include <deque>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "llano/error.hpp"
#include "llano/llm.hpp"

namespace llano::testing {

// Returns canned replies in order; counts calls.
class ScriptedBackend final : public llm::Backend {
 public:
  explicit ScriptedBackend(std::vector<std::string> replies) : replies_(replies.begin(), replies.end()) {}

  llm::GenerationResponse complete(const llm::GenerationRequest& request) override {
    std::lock_guard lock(mu_);
    requests.push_back(request);
    if (replies_.empty()) throw Error(ErrorKind::HttpError, "script exhausted");
    llm::GenerationResponse r;
    r.text = replies_.front();
    replies_.pop_front();
    r.backend_id = "scripted";
    r.usage = {static_cast<std::int64_t>(request.messages.user.size() / 4),
               static_cast<std::int64_t>(r.text.size() / 4)};
    return r;
  }
  std::string id() const override { return "scripted"; }

  std::vector<llm::GenerationRequest> requests;

 private:
  std::mutex mu_;
  std::deque<std::string> replies_;
};

// Replies with a function of the request.
class FunctionBackend final : public llm::Backend {
 public:
  using Fn = std::function<std::string(const llm::GenerationRequest&)>;
  explicit FunctionBackend(Fn fn) : fn_(std::move(fn)) {}
  llm::GenerationResponse complete(const llm::GenerationRequest& request) override {
    llm::GenerationResponse r;
    r.text = fn_(request);
    r.backend_id = "function";
    return r;
  }
  std::string id() const override { return "function"; }

 private:
  Fn fn_;
};

// Records `replies[id]` for each document through simplify_document so the
// stored fingerprints are exactly those a replay run will look up.
inline void seed_store(const Corpus& corpus, const std::map<std::string, std::vector<std::string>>& replies,
                       prompts::Strategy strategy, const textnorm::NormalizationConfig& norm,
                       const prompts::TemplateSet& templates, const llm::GenerationSettings& settings,
                       llm::ReplayStore& store) {
  for (const auto& doc : corpus.documents()) {
    const auto it = replies.find(doc.id);
    if (it == replies.end()) continue;
    auto scripted = std::make_shared<ScriptedBackend>(it->second);
    std::shared_ptr<llm::ReplayStore> sink(&store, [](llm::ReplayStore*) {});
    llm::RecordingBackend recording(scripted, sink);
    llm::simplify_document(doc, strategy, recording, norm, templates, settings);
  }
}

}  // namespace llano::testing
