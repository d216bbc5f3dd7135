#include "llano/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <set>
#include <sstream>
#include <thread>

#include "llano/csv.hpp"
#include "llano/digest.hpp"
#include "llano/error.hpp"
#include "llano/io.hpp"
#include "llano/text.hpp"

#ifndef LLANO_DEFAULT_PROMPTS_DIR
#define LLANO_DEFAULT_PROMPTS_DIR "prompts"
#endif

namespace llano::pipeline {
namespace {

using nlohmann::json;
using nlohmann::ordered_json;

[[noreturn]] void config_error(const std::string& what) {
  throw Error(ErrorKind::ConfigError, what);
}

void reject_unknown(const json& obj, std::initializer_list<std::string_view> known,
                    std::string_view where) {
  for (const auto& [key, _] : obj.items()) {
    if (std::find(known.begin(), known.end(), key) == known.end()) {
      config_error("unknown key '" + key + "' in " + std::string(where));
    }
  }
}

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& p) {
  std::filesystem::path path(p);
  return path.is_absolute() ? path : base / path;
}

// Counts calls that reach the wrapped backend.
class CountingBackend final : public llm::Backend {
 public:
  explicit CountingBackend(llm::Backend& inner) : inner_(inner) {}
  llm::GenerationResponse complete(const llm::GenerationRequest& request) override {
    ++calls_;
    return inner_.complete(request);
  }
  std::string id() const override { return inner_.id(); }
  std::size_t calls() const { return calls_.load(); }

 private:
  llm::Backend& inner_;
  std::atomic<std::size_t> calls_{0};
};

std::string fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

std::string pad(const std::string& s, std::size_t width) {
  const std::size_t len = text::char_length(s);
  return len >= width ? s : s + std::string(width - len, ' ');
}

std::string render_table(const std::vector<std::string>& header,
                         const std::vector<std::vector<std::string>>& rows, ReportFormat format) {
  std::string out;
  if (format == ReportFormat::Csv) {
    out += csv::format_record(header);
    for (const auto& r : rows) out += csv::format_record(r);
    return out;
  }
  if (format == ReportFormat::Markdown) {
    auto line = [](const std::vector<std::string>& cells) {
      std::string l = "|";
      for (const auto& c : cells) l += " " + c + " |";
      return l + "\n";
    };
    out += line(header);
    std::string sep = "|";
    for (std::size_t i = 0; i < header.size(); ++i) sep += i < 2 ? " --- |" : " ---: |";
    out += sep + "\n";
    for (const auto& r : rows) out += line(r);
    return out;
  }
  std::vector<std::size_t> widths(header.size());
  for (std::size_t i = 0; i < header.size(); ++i) widths[i] = text::char_length(header[i]);
  for (const auto& r : rows) {
    for (std::size_t i = 0; i < r.size(); ++i) {
      widths[i] = std::max(widths[i], text::char_length(r[i]));
    }
  }
  auto line = [&](const std::vector<std::string>& cells) {
    std::string l;
    for (std::size_t i = 0; i < cells.size(); ++i) {
      l += i + 1 == cells.size() ? cells[i] : pad(cells[i], widths[i] + 2);
    }
    return l + "\n";
  };
  out += line(header);
  std::size_t total = 0;
  for (std::size_t i = 0; i < widths.size(); ++i) total += widths[i] + (i + 1 < widths.size() ? 2 : 0);
  out += std::string(total, '-') + "\n";
  for (const auto& r : rows) out += line(r);
  return out;
}

std::map<std::string, std::string> outputs_from_records(const std::vector<json>& records,
                                                        const std::string& where) {
  std::map<std::string, std::string> out;
  std::size_t row = 0;
  for (const auto& rec : records) {
    ++row;
    const std::string label = where + " row " + std::to_string(row);
    if (!rec.contains("id") || rec["id"].is_null()) {
      throw Error(ErrorKind::MissingField, "field 'id' missing in " + label);
    }
    const std::string id =
        rec["id"].is_string() ? rec["id"].get<std::string>() : rec["id"].dump();
    std::optional<std::string> body;
    for (const char* key : {"final", "output", "text", "adapted"}) {
      if (rec.contains(key) && rec[key].is_string()) {
        body = rec[key].get<std::string>();
        break;
      }
    }
    if (!body) throw Error(ErrorKind::MissingField, "no output text field in " + label);
    if (!out.emplace(id, *body).second) {
      throw Error(ErrorKind::DuplicateId, "id '" + id + "' appears more than once in " + where);
    }
  }
  return out;
}

}  // namespace

RunConfig default_config() {
  RunConfig c;
  c.prompts_dir = LLANO_DEFAULT_PROMPTS_DIR;
  c.digest = digest::sha256_hex(json::object().dump());
  return c;
}

RunConfig parse_config(const json& doc, const std::filesystem::path& base_dir) {
  if (!doc.is_object()) config_error("config must be a JSON object");
  RunConfig c = default_config();
  try {
    reject_unknown(doc,
                   {"corpus", "strategy", "backend", "normalization", "embedder", "prompts_dir",
                    "output_dir", "concurrency", "seed", "system_name", "short_news_max_words"},
                   "config");
    if (doc.contains("corpus")) {
      const auto& cj = doc["corpus"];
      if (cj.is_string()) {
        c.corpus_path = resolve(base_dir, cj.get<std::string>());
      } else {
        reject_unknown(cj, {"path", "format"}, "corpus");
        c.corpus_path = resolve(base_dir, cj.at("path").get<std::string>());
        if (cj.contains("format")) {
          c.corpus_format = parse_corpus_format(cj["format"].get<std::string>());
        }
      }
    }
    if (doc.contains("strategy")) {
      c.strategy = prompts::parse_strategy(doc["strategy"].get<std::string>());
    }
    if (doc.contains("backend")) {
      const auto& b = doc["backend"];
      reject_unknown(b,
                     {"kind", "model", "max_output_tokens", "replay_store", "base_url", "record",
                      "timeout_s", "max_retries"},
                     "backend");
      const auto kind = b.value("kind", std::string("replay"));
      if (kind == "replay") {
        c.backend.kind = BackendKind::Replay;
      } else if (kind == "live") {
        c.backend.kind = BackendKind::Live;
      } else {
        config_error("unknown backend kind '" + kind + "'");
      }
      c.backend.model = b.value("model", c.backend.model);
      c.backend.max_output_tokens = b.value("max_output_tokens", c.backend.max_output_tokens);
      if (b.contains("replay_store")) {
        c.backend.replay_store = resolve(base_dir, b["replay_store"].get<std::string>());
      }
      c.backend.base_url = b.value("base_url", std::string());
      c.backend.record = b.value("record", false);
      c.backend.timeout_s = b.value("timeout_s", c.backend.timeout_s);
      c.backend.max_retries = b.value("max_retries", c.backend.max_retries);
      if (c.backend.kind == BackendKind::Replay) {
        for (const char* live_only : {"base_url", "record", "timeout_s", "max_retries"}) {
          if (b.contains(live_only)) {
            config_error(std::string("replay backend does not accept '") + live_only + "'");
          }
        }
        if (c.backend.replay_store.empty()) config_error("replay backend needs replay_store");
      } else {
        if (c.backend.base_url.empty()) config_error("live backend needs base_url");
        if (c.backend.record && c.backend.replay_store.empty()) {
          config_error("record mode needs replay_store");
        }
      }
      if (c.backend.max_output_tokens <= 0) config_error("max_output_tokens must be positive");
    }
    if (doc.contains("normalization")) {
      const auto& n = doc["normalization"];
      reject_unknown(n, {"enable_time", "enable_money", "enable_protection", "period_map"},
                     "normalization");
      c.normalization.enable_time = n.value("enable_time", true);
      c.normalization.enable_money = n.value("enable_money", true);
      c.normalization.enable_protection = n.value("enable_protection", true);
      if (n.contains("period_map")) {
        c.normalization.period_map.clear();
        for (const auto& r : n["period_map"]) {
          c.normalization.period_map.push_back(
              {r.at("from").get<int>(), r.at("to").get<int>(), r.at("label").get<std::string>()});
        }
      }
      c.normalization.validate();
    }
    if (doc.contains("embedder")) {
      const auto& e = doc["embedder"];
      reject_unknown(e, {"kind", "base_url", "model", "dimension", "strict"}, "embedder");
      const auto kind = e.value("kind", std::string("none"));
      if (kind == "http") {
        c.embedder.kind = EmbedderKind::Http;
      } else if (kind == "offline-fake") {
        c.embedder.kind = EmbedderKind::OfflineFake;
      } else if (kind == "none") {
        c.embedder.kind = EmbedderKind::None;
      } else {
        config_error("unknown embedder kind '" + kind + "'");
      }
      c.embedder.base_url = e.value("base_url", std::string());
      c.embedder.model = e.value("model", std::string());
      c.embedder.dimension = e.value("dimension", c.embedder.dimension);
      c.embedder.strict = e.value("strict", false);
      if (c.embedder.kind == EmbedderKind::Http && c.embedder.base_url.empty()) {
        config_error("http embedder needs base_url");
      }
      if (c.embedder.dimension == 0) config_error("embedder dimension must be positive");
    }
    if (doc.contains("prompts_dir")) {
      c.prompts_dir = resolve(base_dir, doc["prompts_dir"].get<std::string>());
    }
    if (doc.contains("output_dir")) {
      c.output_dir = resolve(base_dir, doc["output_dir"].get<std::string>());
    }
    c.concurrency = doc.value("concurrency", c.concurrency);
    if (c.concurrency == 0) config_error("concurrency must be at least 1");
    if (doc.contains("seed")) c.seed = doc["seed"].get<std::uint64_t>();
    c.system_name = doc.value("system_name", c.system_name);
    c.short_news_max_words = doc.value("short_news_max_words", c.short_news_max_words);
  } catch (const json::exception& e) {
    config_error(std::string("bad config value: ") + e.what());
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::ConfigError) throw;
    config_error(e.detail());
  }
  c.digest = digest::sha256_hex(doc.dump());
  return c;
}

RunConfig load_config(const std::filesystem::path& path) {
  const std::string data = io::read_file(path);
  json doc;
  try {
    doc = json::parse(data);
  } catch (const json::parse_error& e) {
    config_error(path.string() + ": " + e.what());
  }
  return parse_config(doc, path.parent_path());
}

std::unique_ptr<Embedder> make_embedder(const EmbedderConfig& config) {
  switch (config.kind) {
    case EmbedderKind::Http:
      return std::make_unique<HttpEmbedder>(HttpEmbedderOptions{config.base_url, config.model});
    case EmbedderKind::OfflineFake:
      return std::make_unique<HashedTrigramEmbedder>(config.dimension);
    case EmbedderKind::None:
      return nullptr;
  }
  return nullptr;
}

std::shared_ptr<llm::Backend> make_backend(const RunConfig& config) {
  const auto& b = config.backend;
  if (b.kind == BackendKind::Replay) {
    if (!std::filesystem::exists(b.replay_store)) {
      throw Error(ErrorKind::ConfigError, "replay store not found: " + b.replay_store.string());
    }
    std::shared_ptr<const llm::ReplayStore> store = llm::ReplayStore::open(b.replay_store);
    return std::make_shared<llm::ReplayBackend>(std::move(store));
  }
  llm::LiveOptions opts;
  opts.base_url = b.base_url;
  opts.timeout = std::chrono::seconds(b.timeout_s);
  opts.max_retries = b.max_retries;
  auto live = std::make_shared<llm::LiveBackend>(std::move(opts));
  if (!b.record) return live;
  std::shared_ptr<llm::ReplayStore> store = llm::ReplayStore::open(b.replay_store);
  return std::make_shared<llm::RecordingBackend>(live, std::move(store));
}

BatchResult simplify_corpus(const Corpus& corpus, prompts::Strategy strategy,
                            llm::Backend& backend, const textnorm::NormalizationConfig& norm,
                            const prompts::TemplateSet& templates,
                            const llm::GenerationSettings& settings, std::size_t concurrency) {
  const auto& docs = corpus.documents();
  std::vector<std::optional<llm::AdaptationResult>> done(docs.size());
  std::vector<std::optional<std::string>> errors(docs.size());
  CountingBackend counting(backend);
  std::atomic<std::size_t> next{0};

  auto worker = [&] {
    for (std::size_t i = next++; i < docs.size(); i = next++) {
      try {
        done[i] = llm::simplify_document(docs[i], strategy, counting, norm, templates, settings);
      } catch (const Error& e) {
        errors[i] = e.what();
      } catch (const std::exception& e) {
        errors[i] = std::string("doc ") + docs[i].id + ": " + e.what();
      }
    }
  };
  const std::size_t n_threads = std::max<std::size_t>(1, std::min(concurrency, docs.size()));
  {
    std::vector<std::jthread> pool;
    for (std::size_t t = 1; t < n_threads; ++t) pool.emplace_back(worker);
    worker();
  }

  BatchResult result;
  for (std::size_t i = 0; i < docs.size(); ++i) {
    if (done[i]) {
      result.successes.push_back(std::move(*done[i]));
    } else {
      result.failures.push_back({docs[i].id, errors[i].value_or("unknown error")});
    }
  }
  result.backend_calls = counting.calls();
  return result;
}

std::string adaptation_jsonl(const std::vector<llm::AdaptationResult>& results) {
  std::string out;
  for (const auto& r : results) {
    ordered_json j;
    j["id"] = r.doc_id;
    j["final"] = r.final_text;
    j["steps"] = r.steps;
    j["category"] = r.category ? ordered_json(std::string(prompts::to_string(*r.category)))
                               : ordered_json(nullptr);
    j["warnings"] = r.warnings;
    out += j.dump() + "\n";
  }
  return out;
}

Aggregates aggregate(const std::vector<metrics::PairReport>& documents) {
  Aggregates a;
  a.documents = documents.size();
  if (documents.empty()) return a;
  double bow = 0, combined = 0, fh = 0, fh_raw = 0, emb = 0;
  std::size_t n_emb = 0;
  for (const auto& d : documents) {
    bow += d.sim.bow;
    combined += d.sim.combined;
    fh += d.fh;
    fh_raw += d.fh_raw;
    if (d.sim.embedding) {
      emb += *d.sim.embedding;
      ++n_emb;
    }
  }
  const auto n = static_cast<double>(documents.size());
  a.avg_sim_bow = bow / n;
  a.avg_sim_combined = combined / n;
  a.avg_fh = fh / n;
  a.avg_fh_raw = fh_raw / n;
  if (n_emb) a.avg_sim_embedding = emb / static_cast<double>(n_emb);
  return a;
}

EvalReport evaluate(const std::map<std::string, std::string>& outputs,
                    const std::map<std::string, std::string>& references, Embedder* embedder,
                    bool strict, std::string system_name) {
  EvalReport report;
  report.system_name = std::move(system_name);
  std::vector<std::pair<std::string, std::pair<const std::string*, const std::string*>>> joined;
  for (const auto& [id, out] : outputs) {
    const auto ref = references.find(id);
    if (ref == references.end()) {
      report.unmatched_output_ids.push_back(id);
    } else {
      joined.push_back({id, {&out, &ref->second}});
    }
  }
  for (const auto& [id, _] : references) {
    if (!outputs.count(id)) report.unmatched_reference_ids.push_back(id);
  }
  if (joined.empty()) {
    throw Error(ErrorKind::NoOverlap, "outputs and references share no document id");
  }
  std::sort(joined.begin(), joined.end(),
            [](const auto& a, const auto& b) { return id_less(a.first, b.first); });
  auto by_id = [](std::vector<std::string>& ids) {
    std::sort(ids.begin(), ids.end(), [](const auto& a, const auto& b) { return id_less(a, b); });
  };
  by_id(report.unmatched_output_ids);
  by_id(report.unmatched_reference_ids);

  for (const auto& [id, texts] : joined) {
    try {
      report.documents.push_back(
          metrics::evaluate_pair(id, *texts.first, *texts.second, embedder, strict));
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::NoWords) throw;
      report.failed_ids.push_back(id);
    }
  }
  report.aggregates = aggregate(report.documents);
  report.degraded = std::any_of(report.documents.begin(), report.documents.end(),
                                [](const auto& d) { return d.sim.degraded; });
  return report;
}

ordered_json to_json(const EvalReport& report) {
  ordered_json j;
  j["system"] = report.system_name;
  const auto& a = report.aggregates;
  j["aggregates"] = {
      {"documents", a.documents},
      {"avg_sim_bow", a.avg_sim_bow},
      {"avg_sim_embedding",
       a.avg_sim_embedding ? ordered_json(*a.avg_sim_embedding) : ordered_json(nullptr)},
      {"avg_sim_combined", a.avg_sim_combined},
      {"avg_fh", a.avg_fh},
      {"avg_fh_raw", a.avg_fh_raw},
  };
  j["degraded"] = report.degraded;
  ordered_json docs = ordered_json::array();
  for (const auto& d : report.documents) {
    docs.push_back({
        {"id", d.doc_id},
        {"sim_bow", d.sim.bow},
        {"sim_embedding", d.sim.embedding ? ordered_json(*d.sim.embedding) : ordered_json(nullptr)},
        {"sim_combined", d.sim.combined},
        {"degraded", d.sim.degraded},
        {"fh", d.fh},
        {"fh_raw", d.fh_raw},
        {"output_words", d.output_words},
        {"reference_words", d.reference_words},
    });
  }
  j["documents"] = std::move(docs);
  j["failed_ids"] = report.failed_ids;
  j["unmatched_output_ids"] = report.unmatched_output_ids;
  j["unmatched_reference_ids"] = report.unmatched_reference_ids;
  j["manifest"] = report.manifest;
  return j;
}

EvalReport report_from_json(const json& doc) {
  try {
    EvalReport r;
    r.system_name = doc.at("system").get<std::string>();
    for (const auto& d : doc.at("documents")) {
      metrics::PairReport p;
      p.doc_id = d.at("id").get<std::string>();
      p.sim.bow = d.at("sim_bow").get<double>();
      if (!d.at("sim_embedding").is_null()) p.sim.embedding = d["sim_embedding"].get<double>();
      p.sim.combined = d.at("sim_combined").get<double>();
      p.sim.degraded = d.at("degraded").get<bool>();
      p.fh = d.at("fh").get<double>();
      p.fh_raw = d.at("fh_raw").get<double>();
      p.output_words = d.at("output_words").get<std::size_t>();
      p.reference_words = d.at("reference_words").get<std::size_t>();
      r.documents.push_back(std::move(p));
    }
    const auto& a = doc.at("aggregates");
    r.aggregates.documents = a.at("documents").get<std::size_t>();
    r.aggregates.avg_sim_bow = a.at("avg_sim_bow").get<double>();
    if (!a.at("avg_sim_embedding").is_null()) {
      r.aggregates.avg_sim_embedding = a["avg_sim_embedding"].get<double>();
    }
    r.aggregates.avg_sim_combined = a.at("avg_sim_combined").get<double>();
    r.aggregates.avg_fh = a.at("avg_fh").get<double>();
    r.aggregates.avg_fh_raw = a.at("avg_fh_raw").get<double>();
    r.degraded = doc.at("degraded").get<bool>();
    r.failed_ids = doc.value("failed_ids", std::vector<std::string>{});
    r.unmatched_output_ids = doc.value("unmatched_output_ids", std::vector<std::string>{});
    r.unmatched_reference_ids = doc.value("unmatched_reference_ids", std::vector<std::string>{});
    if (doc.contains("manifest")) r.manifest = doc["manifest"];
    return r;
  } catch (const json::exception& e) {
    throw Error(ErrorKind::ParseError, std::string("not an evaluation report: ") + e.what());
  }
}

std::map<std::string, std::string> load_outputs(const std::filesystem::path& path) {
  const std::string data = io::read_file(path);
  if (!text::is_valid_utf8(data)) {
    throw Error(ErrorKind::EncodingError, path.string() + " is not valid UTF-8");
  }
  std::vector<json> records;
  if (path.extension() == ".csv") {
    const auto rows = csv::parse(data);
    if (rows.empty()) throw Error(ErrorKind::EmptyCorpus, path.string() + " is empty");
    for (std::size_t r = 1; r < rows.size(); ++r) {
      json rec = json::object();
      for (std::size_t c = 0; c < rows[0].size() && c < rows[r].size(); ++c) {
        rec[rows[0][c]] = rows[r][c];
      }
      records.push_back(std::move(rec));
    }
  } else {
    std::size_t row = 0;
    for (auto line : text::split_lines(data)) {
      ++row;
      if (text::trim(line).empty()) continue;
      try {
        records.push_back(json::parse(line));
      } catch (const json::parse_error& e) {
        throw Error(ErrorKind::ParseError,
                    path.string() + " line " + std::to_string(row) + ": " + e.what());
      }
    }
  }
  return outputs_from_records(records, path.string());
}

std::map<std::string, std::string> load_references(const std::filesystem::path& path) {
  const auto corpus = load_corpus(path, corpus_format_from_path(path));
  std::map<std::string, std::string> out;
  for (const auto& d : corpus.documents()) {
    if (d.adapted) out.emplace(d.id, *d.adapted);
  }
  return out;
}

ReportFormat parse_report_format(std::string_view name) {
  if (name == "text") return ReportFormat::Text;
  if (name == "markdown") return ReportFormat::Markdown;
  if (name == "csv") return ReportFormat::Csv;
  throw Error(ErrorKind::InvalidArgument, "unknown report format '" + std::string(name) + "'");
}

RankMetric parse_rank_metric(std::string_view name) {
  if (name == "sim") return RankMetric::Sim;
  if (name == "fh") return RankMetric::Fh;
  throw Error(ErrorKind::InvalidArgument, "unknown ranking metric '" + std::string(name) + "'");
}

std::string render_ranking(std::vector<EvalReport> reports, RankMetric metric,
                           ReportFormat format) {
  auto key = [metric](const EvalReport& r) {
    return metric == RankMetric::Sim ? r.aggregates.avg_sim_combined : r.aggregates.avg_fh;
  };
  std::stable_sort(reports.begin(), reports.end(), [&](const EvalReport& a, const EvalReport& b) {
    if (key(a) != key(b)) return key(a) > key(b);
    return a.system_name < b.system_name;
  });
  const bool csv_out = format == ReportFormat::Csv;
  const int digits = csv_out ? 6 : 2;
  std::vector<std::string> header =
      csv_out ? std::vector<std::string>{"rank", "system", "documents", "avg_sim_bow",
                                         "avg_sim_embedding", "avg_sim_combined", "avg_fh",
                                         "degraded"}
              : std::vector<std::string>{"Rank", "System", "Docs", "BoW", "Embedding",
                                         "Avg. Cosine Similarity",
                                         "Avg. Fernández-Huerta index"};
  std::vector<std::vector<std::string>> rows;
  for (std::size_t i = 0; i < reports.size(); ++i) {
    const auto& r = reports[i];
    const auto& a = r.aggregates;
    const std::string emb = a.avg_sim_embedding ? fixed(*a.avg_sim_embedding, digits)
                                                : std::string(csv_out ? "" : "n/a");
    std::vector<std::string> row{std::to_string(i + 1), r.system_name, std::to_string(a.documents),
                                 fixed(a.avg_sim_bow, digits), emb,
                                 fixed(a.avg_sim_combined, digits), fixed(a.avg_fh, digits)};
    if (csv_out) {
      row.push_back(r.degraded ? "true" : "false");
    } else if (r.degraded) {
      row[5] += " (BoW only)";
    }
    rows.push_back(std::move(row));
  }
  return render_table(header, rows, format);
}

std::string render_stats(const CorpusStats& original, const std::optional<CorpusStats>& adapted) {
  std::vector<std::string> header{"Description", "Original Texts"};
  if (adapted) header.push_back("Adaptations");
  std::vector<std::vector<std::string>> rows;
  auto add = [&](std::string label, auto get, int digits) {
    std::vector<std::string> row{std::move(label), digits ? fixed(get(original), digits)
                                                          : std::to_string(static_cast<std::size_t>(get(original)))};
    if (adapted) {
      row.push_back(digits ? fixed(get(*adapted), digits)
                           : std::to_string(static_cast<std::size_t>(get(*adapted))));
    }
    rows.push_back(std::move(row));
  };
  add("No. of samples", [](const CorpusStats& s) { return static_cast<double>(s.n_samples); }, 0);
  add("Avg. no. of words", [](const CorpusStats& s) { return s.avg_words; }, 2);
  add("Avg. no. of lines", [](const CorpusStats& s) { return s.avg_lines; }, 2);
  add("Avg. word length (characters)", [](const CorpusStats& s) { return s.avg_word_length_chars; },
      2);
  return render_table(header, rows, ReportFormat::Text);
}

std::filesystem::path manifest_path_for(const std::filesystem::path& artifact) {
  auto p = artifact;
  p.replace_extension(".manifest.json");
  return p;
}

std::string manifest_timestamp() {
  std::time_t t = std::time(nullptr);
  if (const char* epoch = std::getenv("SOURCE_DATE_EPOCH"); epoch && *epoch) {
    t = static_cast<std::time_t>(std::strtoll(epoch, nullptr, 10));
  }
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace llano::pipeline
