#include "llano/llm.hpp"

#include <cstdlib>
#include <thread>

#include "json.hpp"

#include "http.hpp"
#include "llano/digest.hpp"
#include "llano/error.hpp"
#include "llano/io.hpp"
#include "llano/text.hpp"

namespace llano::llm {
namespace {

using nlohmann::ordered_json;

bool transient(const Error& e) {
  return e.kind() == ErrorKind::Timeout;
}

ordered_json messages_json(const std::vector<prompts::Message>& messages) {
  ordered_json arr = ordered_json::array();
  for (const auto& m : messages) arr.push_back({{"role", m.role}, {"content", m.content}});
  return arr;
}

}  // namespace

void GenerationRequest::validate() const {
  if (!deterministic) {
    throw Error(ErrorKind::InvalidArgument, "generation must be deterministic");
  }
  if (max_output_tokens <= 0) {
    throw Error(ErrorKind::InvalidArgument, "max_output_tokens must be positive");
  }
  if (model_name.empty()) throw Error(ErrorKind::InvalidArgument, "model name is empty");
  if (text::is_blank(messages.user)) {
    throw Error(ErrorKind::InvalidArgument, "user message is empty");
  }
}

std::string canonicalize(std::string_view content) {
  std::string out;
  out.reserve(content.size());
  for (std::size_t i = 0; i < content.size(); ++i) {
    if (content[i] == '\r') {
      out.push_back('\n');
      if (i + 1 < content.size() && content[i + 1] == '\n') ++i;
    } else {
      out.push_back(content[i]);
    }
  }
  while (!out.empty() && (out.back() == ' ' || out.back() == '\t' || out.back() == '\n')) {
    out.pop_back();
  }
  return out;
}

std::string fingerprint(const GenerationRequest& request) {
  // Fields are joined with ASCII record/unit separators.
  std::string buf = request.model_name;
  for (const auto& m : request.messages.messages()) {
    buf += '\x1e';
    buf += m.role;
    buf += '\x1f';
    buf += canonicalize(m.content);
  }
  return digest::sha256_hex(buf);
}

GenerationResponse complete(Backend& backend, const GenerationRequest& request) {
  request.validate();
  return backend.complete(request);
}

LiveBackend::LiveBackend(LiveOptions options) : options_(std::move(options)) {
  http::parse_url(options_.base_url);
  if (!options_.sleep) {
    options_.sleep = [](std::chrono::milliseconds d) { std::this_thread::sleep_for(d); };
  }
}

std::string LiveBackend::id() const { return "live:" + options_.base_url; }

GenerationResponse LiveBackend::complete(const GenerationRequest& request) {
  const char* key = std::getenv(options_.api_key_env.c_str());
  if (!key || !*key) {
    throw Error(ErrorKind::AuthMissing, "environment variable " + options_.api_key_env +
                                            " is not set");
  }
  ordered_json body;
  body["model"] = request.model_name;
  body["messages"] = messages_json(request.messages.messages());
  body["temperature"] = 0;
  body["max_tokens"] = request.max_output_tokens;
  const std::string payload = body.dump();
  const http::Headers headers{{"Authorization", std::string("Bearer ") + key}};
  const auto endpoint = http::parse_url(options_.base_url);

  auto delay = options_.initial_backoff;
  for (int attempt = 0;; ++attempt) {
    const auto started = std::chrono::steady_clock::now();
    const bool can_retry = attempt < options_.max_retries;
    http::Response res;
    try {
      res = http::post_json(endpoint, "/chat/completions", payload, headers, options_.timeout);
    } catch (const Error& e) {
      if (!transient(e) || !can_retry) throw;
      options_.sleep(delay);
      delay *= 2;
      continue;
    }
    if (res.status >= 500 && can_retry) {
      options_.sleep(delay);
      delay *= 2;
      continue;
    }
    if (res.status < 200 || res.status >= 300) {
      throw Error(ErrorKind::HttpError,
                  "status " + std::to_string(res.status) + ": " + res.body.substr(0, 300));
    }
    GenerationResponse out;
    try {
      const auto doc = nlohmann::json::parse(res.body);
      out.text = doc.at("choices").at(0).at("message").at("content").get<std::string>();
      if (doc.contains("usage")) {
        const auto& u = doc["usage"];
        out.usage.input_tokens = u.value("prompt_tokens", 0);
        out.usage.output_tokens = u.value("completion_tokens", 0);
      }
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorKind::HttpError,
                  std::string("unexpected chat completion payload: ") + e.what());
    }
    out.latency_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                         std::chrono::steady_clock::now() - started)
                         .count();
    out.backend_id = id();
    return out;
  }
}

std::unique_ptr<ReplayStore> ReplayStore::open(const std::filesystem::path& path) {
  auto store = std::make_unique<ReplayStore>();
  store->path_ = path;
  if (!std::filesystem::exists(path)) return store;
  const std::string data = io::read_file(path);
  std::size_t row = 0;
  for (auto line : text::split_lines(data)) {
    ++row;
    if (text::trim(line).empty()) continue;
    try {
      auto entry = deserialize(line);
      store->entries_.insert_or_assign(entry.fingerprint, std::move(entry));
    } catch (const Error& e) {
      throw Error(e.kind(), path.string() + " line " + std::to_string(row) + ": " + e.detail());
    }
  }
  return store;
}

std::optional<GenerationResponse> ReplayStore::find(std::string_view fingerprint) const {
  std::shared_lock lock(mu_);
  const auto it = entries_.find(fingerprint);
  if (it == entries_.end()) return std::nullopt;
  return it->second.response;
}

void ReplayStore::put(const GenerationRequest& request, const GenerationResponse& response) {
  ReplayEntry entry{fingerprint(request), request.model_name, request.messages.messages(),
                    response};
  const std::string line = serialize(entry) + "\n";
  std::unique_lock lock(mu_);
  if (path_) io::append_file(*path_, line);
  entries_.insert_or_assign(entry.fingerprint, std::move(entry));
}

std::size_t ReplayStore::size() const {
  std::shared_lock lock(mu_);
  return entries_.size();
}

std::vector<ReplayEntry> ReplayStore::entries() const {
  std::shared_lock lock(mu_);
  std::vector<ReplayEntry> out;
  for (const auto& [_, e] : entries_) out.push_back(e);
  return out;
}

void ReplayStore::save(const std::filesystem::path& path) const {
  std::string data;
  for (const auto& e : entries()) data += serialize(e) + "\n";
  io::write_file(path, data);
}

std::string ReplayStore::serialize(const ReplayEntry& entry) {
  ordered_json j;
  j["fingerprint"] = entry.fingerprint;
  j["model"] = entry.model_name;
  j["messages"] = messages_json(entry.messages);
  j["response"] = {
      {"text", entry.response.text},
      {"usage",
       {{"input_tokens", entry.response.usage.input_tokens},
        {"output_tokens", entry.response.usage.output_tokens}}},
      {"latency_ms", entry.response.latency_ms},
      {"backend_id", entry.response.backend_id},
  };
  return j.dump();
}

ReplayEntry ReplayStore::deserialize(std::string_view line) {
  try {
    const auto j = nlohmann::json::parse(line);
    ReplayEntry e;
    e.fingerprint = j.at("fingerprint").get<std::string>();
    e.model_name = j.at("model").get<std::string>();
    for (const auto& m : j.at("messages")) {
      e.messages.push_back({m.at("role").get<std::string>(), m.at("content").get<std::string>()});
    }
    const auto& r = j.at("response");
    e.response.text = r.at("text").get<std::string>();
    if (r.contains("usage")) {
      e.response.usage.input_tokens = r["usage"].value("input_tokens", std::int64_t{0});
      e.response.usage.output_tokens = r["usage"].value("output_tokens", std::int64_t{0});
    }
    e.response.latency_ms = r.value("latency_ms", std::int64_t{0});
    e.response.backend_id = r.value("backend_id", std::string{});
    return e;
  } catch (const nlohmann::json::exception& ex) {
    throw Error(ErrorKind::ParseError, std::string("bad replay entry: ") + ex.what());
  }
}

ReplayBackend::ReplayBackend(std::shared_ptr<const ReplayStore> store) : store_(std::move(store)) {}

GenerationResponse ReplayBackend::complete(const GenerationRequest& request) {
  const auto fp = fingerprint(request);
  auto hit = store_->find(fp);
  if (!hit) throw Error(ErrorKind::ReplayMiss, "no recorded response for fingerprint " + fp);
  return *hit;
}

GenerationResponse record(Backend& live, ReplayStore& store, const GenerationRequest& request) {
  auto response = complete(live, request);
  store.put(request, response);
  return response;
}

RecordingBackend::RecordingBackend(std::shared_ptr<Backend> live,
                                   std::shared_ptr<ReplayStore> store)
    : live_(std::move(live)), store_(std::move(store)) {}

GenerationResponse RecordingBackend::complete(const GenerationRequest& request) {
  return record(*live_, *store_, request);
}

std::string RecordingBackend::id() const { return "record:" + live_->id(); }

AdaptationResult simplify_document(const Document& doc, prompts::Strategy strategy,
                                   Backend& backend,
                                   const textnorm::NormalizationConfig& norm,
                                   const prompts::TemplateSet& templates,
                                   const GenerationSettings& settings) {
  auto tag = [&](const Error& e) { return Error(e.kind(), "doc " + doc.id + ": " + e.detail()); };
  try {
    const auto pre = textnorm::preprocess(doc.original, norm);
    const auto p = prompts::plan(templates, strategy, pre.text, settings.classifier);

    AdaptationResult result;
    result.doc_id = doc.id;
    result.category = p.category;
    std::string working = pre.text;
    for (std::size_t i = 0; i < p.steps.size(); ++i) {
      GenerationRequest request;
      request.messages = prompts::render_pending_step(templates, p, i, working);
      request.model_name = settings.model_name;
      request.max_output_tokens = settings.max_output_tokens;
      result.prompts_sent.push_back(request.messages.user);
      auto response = complete(backend, request);
      working = response.text;
      result.steps.push_back(std::move(response.text));
    }
    auto post = textnorm::postprocess(working, pre.spans, norm);
    result.final_text = std::move(post.text);
    result.warnings = std::move(post.warnings);
    if (text::is_blank(result.final_text)) result.warnings.push_back("EmptyOutput");
    return result;
  } catch (const Error& e) {
    throw tag(e);
  }
}

}  // namespace llano::llm
