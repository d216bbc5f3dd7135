#include <chrono>
#include <cstdlib>
#include <filesystem>

#include "doctest.h"
#include "json.hpp"
#include "llano/error.hpp"
#include "llano/io.hpp"
#include "llano/embedder.hpp"
#include "llano/llm.hpp"
#include "mock_server.hpp"
#include "scripted.hpp"

using namespace llano;
using namespace llano::llm;
using namespace std::chrono_literals;

namespace {

ErrorKind kind_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected an llano::Error");
  return ErrorKind::InvalidArgument;
}

const prompts::TemplateSet& templates() {
  static const auto t = prompts::TemplateSet::load(LLANO_PROMPTS_DIR);
  return t;
}

GenerationRequest request(std::string user, std::string model = "m") {
  GenerationRequest r;
  r.messages = {"Sistema.", std::move(user)};
  r.model_name = std::move(model);
  return r;
}

std::filesystem::path tmp(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / "llano_llm_test";
  std::filesystem::create_directories(dir);
  const auto p = dir / name;
  std::filesystem::remove(p);
  return p;
}

std::string chat_reply(const std::string& content) {
  return nlohmann::json{{"choices", {{{"message", {{"role", "assistant"}, {"content", content}}}}}},
                        {"usage", {{"prompt_tokens", 12}, {"completion_tokens", 3}}}}
      .dump();
}

struct KeyGuard {
  explicit KeyGuard(const char* value) {
    if (value) {
      setenv("LLANO_TEST_KEY", value, 1);
    } else {
      unsetenv("LLANO_TEST_KEY");
    }
  }
  ~KeyGuard() { unsetenv("LLANO_TEST_KEY"); }
};

LiveOptions live_options(const std::string& url, std::vector<std::chrono::milliseconds>* sleeps) {
  LiveOptions o;
  o.base_url = url;
  o.api_key_env = "LLANO_TEST_KEY";
  o.timeout = 2s;
  o.sleep = [sleeps](std::chrono::milliseconds d) { sleeps->push_back(d); };
  return o;
}

}  // namespace

TEST_CASE("request validation") {
  auto r = request("hola");
  CHECK_NOTHROW(r.validate());
  r.deterministic = false;
  CHECK(kind_of([&] { r.validate(); }) == ErrorKind::InvalidArgument);
  r = request("hola");
  r.max_output_tokens = 0;
  CHECK(kind_of([&] { r.validate(); }) == ErrorKind::InvalidArgument);
}

TEST_CASE("fingerprint canonicalization") {
  CHECK(fingerprint(request("a\r\nb  \n")) == fingerprint(request("a\nb")));
  CHECK(fingerprint(request("a\rb")) == fingerprint(request("a\nb")));
  CHECK(fingerprint(request("a b")) != fingerprint(request("a  b")));
  CHECK(fingerprint(request("a", "m1")) != fingerprint(request("a", "m2")));
  CHECK(fingerprint(request("x")).size() == 64);
}

TEST_CASE("replay hit and miss") {
  auto store = std::make_shared<ReplayStore>();
  GenerationResponse resp{"Texto simple.", {5, 2}, 10, "live:x"};
  store->put(request("uno"), resp);
  ReplayBackend replay(store);
  CHECK(complete(replay, request("uno")).text == "Texto simple.");
  CHECK(complete(replay, request("uno")) == resp);
  CHECK(kind_of([&] { complete(replay, request("dos")); }) == ErrorKind::ReplayMiss);
}

TEST_CASE("record then replay, persisted to disk") {
  const auto path = tmp("store.jsonl");
  auto live = std::make_shared<testing::ScriptedBackend>(std::vector<std::string>{"R1", "R2"});
  {
    std::shared_ptr<ReplayStore> store = ReplayStore::open(path);
    RecordingBackend rec(live, store);
    CHECK(rec.complete(request("uno")).text == "R1");
    CHECK(record(*live, *store, request("dos")).text == "R2");
    CHECK(store->size() == 2);
  }
  std::shared_ptr<const ReplayStore> reloaded = ReplayStore::open(path);
  CHECK(reloaded->size() == 2);
  ReplayBackend replay(reloaded);
  CHECK(replay.complete(request("uno")).text == "R1");
  CHECK(replay.complete(request("dos")).text == "R2");
  CHECK(reloaded->entries().size() == 2);
}

TEST_CASE("store serialization round trip") {
  ReplayEntry e;
  e.model_name = "m";
  e.messages = {{"system", "s"}, {"user", "ñandú ⟦NUM0⟧\n\"x\""}};
  e.fingerprint = fingerprint(request("ñandú ⟦NUM0⟧\n\"x\""));
  e.response = {"salida\n", {3, 4}, 7, "live:u"};
  const auto back = ReplayStore::deserialize(ReplayStore::serialize(e));
  CHECK(back.fingerprint == e.fingerprint);
  CHECK(back.messages == e.messages);
  CHECK(back.response == e.response);
  CHECK(kind_of([] { ReplayStore::deserialize("{oops"); }) == ErrorKind::ParseError);
}

TEST_CASE("store save is sorted and stable") {
  ReplayStore s;
  for (const char* u : {"c", "a", "b"}) s.put(request(u), {std::string("r") + u, {}, 0, "x"});
  const auto p1 = tmp("s1.jsonl"), p2 = tmp("s2.jsonl");
  s.save(p1);
  ReplayStore::open(p1)->save(p2);
  CHECK(io::read_file(p1) == io::read_file(p2));
}

TEST_CASE("simplify_document with P2 replay") {
  const auto doc = Document::make("d1", "El acto es a las 20:00 horas en 2025.");
  auto store = std::make_shared<ReplayStore>();
  const textnorm::NormalizationConfig norm;
  const GenerationSettings settings{"m", 1024, {}};
  testing::seed_store(Corpus({doc}), {{"d1", {"Es a las 20:00 en ⟦NUM0⟧.\n\n\n"}}},
                      prompts::Strategy::P2, norm, templates(), settings, *store);
  ReplayBackend replay(store);
  const auto r = simplify_document(doc, prompts::Strategy::P2, replay, norm, templates(), settings);
  CHECK(r.final_text == "Es a las 8 de la tarde en 2025.");
  CHECK(r.steps.size() == 1);
  CHECK(r.warnings.empty());
  CHECK(r.prompts_sent[0] == "El acto es a las 8 de la tarde en ⟦NUM0⟧.");
}

TEST_CASE("simplify_document P1 chains two calls") {
  const auto doc = Document::make("d2", "Texto original largo con 20:00 horas.");
  testing::ScriptedBackend b({"Texto reducido.", "Texto final."});
  const auto r = simplify_document(doc, prompts::Strategy::P1, b, {}, templates(), {"m", 256, {}});
  REQUIRE(b.requests.size() == 2);
  CHECK(b.requests[0].messages.user.find("las 8 de la tarde") != std::string::npos);
  CHECK(b.requests[0].messages.user.find("20:00") == std::string::npos);
  CHECK(b.requests[1].messages.user.find("Texto reducido.") != std::string::npos);
  CHECK(b.requests[1].max_output_tokens == 256);
  CHECK(r.final_text == "Texto final.");
  CHECK(r.steps == std::vector<std::string>{"Texto reducido.", "Texto final."});
}

TEST_CASE("simplify_document P3 records the category") {
  const auto doc = Document::make("d3", "Se aprueba un presupuesto de 20.000 euros.");
  testing::ScriptedBackend b({"Hay un presupuesto de ⟦NUM0⟧ euros."});
  const auto r = simplify_document(doc, prompts::Strategy::P3, b, {}, templates(), {"m", 64, {}});
  CHECK(r.category == prompts::Category::EconomicNotice);
  CHECK(r.final_text == "Hay un presupuesto de 20.000 euros.");
}

TEST_CASE("simplify_document errors carry the doc id") {
  const auto doc = Document::make("doc-9", "Texto.");
  ReplayBackend empty(std::make_shared<ReplayStore>());
  try {
    simplify_document(doc, prompts::Strategy::P2, empty, {}, templates(), {"m", 64, {}});
    FAIL("expected ReplayMiss");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::ReplayMiss);
    CHECK(std::string(e.what()).find("doc-9") != std::string::npos);
  }
}

TEST_CASE("simplify_document warnings") {
  const auto doc = Document::make("w", "Del 25% al 30% en 2024.");
  testing::ScriptedBackend b({"Sube del ⟦NUM0⟧ al ⟦NUM5⟧."});
  const auto r = simplify_document(doc, prompts::Strategy::P2, b, {}, templates(), {"m", 64, {}});
  CHECK(r.final_text == "Sube del 25% al ⟦NUM5⟧.");
  CHECK(r.warnings ==
        std::vector<std::string>{"OrphanSentinel(5)", "DroppedSentinel(1)", "DroppedSentinel(2)"});
}

TEST_CASE("live backend without key fails before any request") {
  testing::MockServer server("/v1/chat/completions",
                             [](const auto&, auto& res) { res.set_content(chat_reply("x"), "application/json"); });
  KeyGuard key(nullptr);
  std::vector<std::chrono::milliseconds> sleeps;
  LiveBackend live(live_options(server.base_url(), &sleeps));
  CHECK(kind_of([&] { live.complete(request("hola")); }) == ErrorKind::AuthMissing);
  CHECK(server.hits == 0);
}

TEST_CASE("live backend success and wire format") {
  testing::MockServer server("/v1/chat/completions", [](const auto&, auto& res) {
    res.set_content(chat_reply("Texto claro."), "application/json");
  });
  KeyGuard key("secreto");
  std::vector<std::chrono::milliseconds> sleeps;
  LiveBackend live(live_options(server.base_url(), &sleeps));
  auto req = request("hola");
  req.max_output_tokens = 77;
  const auto r = live.complete(req);
  CHECK(r.text == "Texto claro.");
  CHECK(r.usage == Usage{12, 3});
  CHECK(r.latency_ms >= 0);
  CHECK(server.hits == 1);
  CHECK(server.last_auth == "Bearer secreto");
  const auto body = nlohmann::json::parse(server.last_body);
  CHECK(body["temperature"] == 0);
  CHECK(body["max_tokens"] == 77);
  CHECK(body["model"] == "m");
  CHECK(body["messages"][0]["role"] == "system");
  CHECK(body["messages"][1]["content"] == "hola");
  CHECK(sleeps.empty());
}

TEST_CASE("live backend retries 5xx with doubling backoff") {
  std::atomic<int> calls{0};
  testing::MockServer server("/v1/chat/completions", [&](const auto&, auto& res) {
    if (++calls < 3) {
      res.status = 503;
      res.set_content("busy", "text/plain");
    } else {
      res.set_content(chat_reply("ok"), "application/json");
    }
  });
  KeyGuard key("k");
  std::vector<std::chrono::milliseconds> sleeps;
  LiveBackend live(live_options(server.base_url(), &sleeps));
  CHECK(live.complete(request("hola")).text == "ok");
  CHECK(sleeps == std::vector<std::chrono::milliseconds>{1000ms, 2000ms});
}

TEST_CASE("live backend gives up after max retries") {
  testing::MockServer server("/v1/chat/completions", [](const auto&, auto& res) {
    res.status = 500;
    res.set_content("boom", "text/plain");
  });
  KeyGuard key("k");
  std::vector<std::chrono::milliseconds> sleeps;
  LiveBackend live(live_options(server.base_url(), &sleeps));
  try {
    live.complete(request("hola"));
    FAIL("expected HttpError");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::HttpError);
    CHECK(std::string(e.what()).find("500") != std::string::npos);
    CHECK(std::string(e.what()).find("boom") != std::string::npos);
  }
  CHECK(server.hits == 4);
  CHECK(sleeps == std::vector<std::chrono::milliseconds>{1000ms, 2000ms, 4000ms});
}

TEST_CASE("live backend fails fast on 4xx") {
  testing::MockServer server("/v1/chat/completions", [](const auto&, auto& res) {
    res.status = 401;
    res.set_content("{\"error\":\"bad key\"}", "application/json");
  });
  KeyGuard key("k");
  std::vector<std::chrono::milliseconds> sleeps;
  LiveBackend live(live_options(server.base_url(), &sleeps));
  CHECK(kind_of([&] { live.complete(request("hola")); }) == ErrorKind::HttpError);
  CHECK(server.hits == 1);
  CHECK(sleeps.empty());
}

TEST_CASE("live backend timeout is retried then surfaced") {
  testing::MockServer server("/v1/chat/completions", [](const auto&, auto& res) {
    std::this_thread::sleep_for(400ms);
    res.set_content(chat_reply("tarde"), "application/json");
  });
  KeyGuard key("k");
  std::vector<std::chrono::milliseconds> sleeps;
  auto opts = live_options(server.base_url(), &sleeps);
  opts.timeout = 100ms;
  opts.max_retries = 1;
  LiveBackend live(opts);
  CHECK(kind_of([&] { live.complete(request("hola")); }) == ErrorKind::Timeout);
  CHECK(sleeps.size() == 1);
}

TEST_CASE("live backend rejects malformed payloads and urls") {
  testing::MockServer server("/v1/chat/completions",
                             [](const auto&, auto& res) { res.set_content("{}", "application/json"); });
  KeyGuard key("k");
  std::vector<std::chrono::milliseconds> sleeps;
  LiveBackend live(live_options(server.base_url(), &sleeps));
  CHECK(kind_of([&] { live.complete(request("hola")); }) == ErrorKind::HttpError);
  CHECK(kind_of([&] { LiveBackend bad(live_options("ftp://x", &sleeps)); }) == ErrorKind::ConfigError);
}

TEST_CASE("http embedder") {
  testing::MockServer server("/v1/embeddings", [](const httplib::Request& req, httplib::Response& res) {
    const auto in = nlohmann::json::parse(req.body);
    nlohmann::json data = nlohmann::json::array();
    for (std::size_t i = 0; i < in["input"].size(); ++i) {
      data.push_back({{"index", i}, {"embedding", {1.0, static_cast<double>(i)}}});
    }
    res.set_content(nlohmann::json{{"data", data}}.dump(), "application/json");
  });
  HttpEmbedder e({server.base_url(), "emb"});
  const auto v = e.embed(std::vector<std::string>{"a", "b"});
  REQUIRE(v.size() == 2);
  CHECK(v[1] == Embedding{1.0, 1.0});
  CHECK(nlohmann::json::parse(server.last_body)["model"] == "emb");

  HttpEmbedder down({"http://127.0.0.1:1/v1", "emb"});
  CHECK(kind_of([&] { down.embed(std::vector<std::string>{"a"}); }) == ErrorKind::EmbedderUnavailable);
}

// Set LLANO_LIVE_BASE_URL, LLANO_LIVE_MODEL and LLANO_API_KEY to run.
TEST_CASE("live endpoint integration" * doctest::skip(std::getenv("LLANO_LIVE_BASE_URL") == nullptr)) {
  LiveOptions o;
  o.base_url = std::getenv("LLANO_LIVE_BASE_URL");
  LiveBackend live(o);
  const char* model = std::getenv("LLANO_LIVE_MODEL");
  auto req = request("Responde solo con la palabra: hola", model ? model : "default");
  req.max_output_tokens = 16;
  const auto r = complete(live, req);
  CHECK_FALSE(r.text.empty());
}
