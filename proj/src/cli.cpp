#include "llano/cli.hpp"

#include <filesystem>
#include <ostream>

#include "CLI11.hpp"
#include "json.hpp"
#include "llano/digest.hpp"
#include "llano/error.hpp"
#include "llano/io.hpp"
#include "llano/pipeline.hpp"

namespace llano::cli {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;
using nlohmann::ordered_json;
using namespace llano::pipeline;

struct Options {
  std::string config_path;
  std::string corpus;
  std::string corpus_format;

  std::string subset_kind;
  std::size_t subset_size = 0;
  std::optional<std::uint64_t> subset_seed;
  std::string group_key;
  std::string subset_out;

  std::string strategy;
  std::string output_dir;
  std::string replay_store;
  std::size_t concurrency = 0;

  std::string outputs;
  std::string references;
  std::string embedder;
  std::string system_name;
  std::string report_out;
  bool strict = false;

  std::vector<std::string> reports;
  std::string format = "text";
  std::string rank_by = "sim";
};

RunConfig effective_config(const Options& o) {
  RunConfig c = o.config_path.empty() ? default_config() : load_config(o.config_path);
  if (!o.corpus.empty()) c.corpus_path = fs::path(o.corpus);
  if (!o.corpus_format.empty()) c.corpus_format = parse_corpus_format(o.corpus_format);
  if (!o.strategy.empty()) c.strategy = prompts::parse_strategy(o.strategy);
  if (!o.output_dir.empty()) c.output_dir = o.output_dir;
  if (!o.replay_store.empty()) {
    c.backend.kind = BackendKind::Replay;
    c.backend.replay_store = o.replay_store;
  }
  if (o.concurrency) c.concurrency = o.concurrency;
  if (!o.embedder.empty()) {
    if (o.embedder == "none") {
      c.embedder.kind = EmbedderKind::None;
    } else if (o.embedder == "offline-fake") {
      c.embedder.kind = EmbedderKind::OfflineFake;
    } else if (o.embedder == "http") {
      if (c.embedder.base_url.empty()) {
        throw Error(ErrorKind::ConfigError, "http embedder needs base_url in the config file");
      }
      c.embedder.kind = EmbedderKind::Http;
    } else {
      throw Error(ErrorKind::ConfigError, "unknown embedder '" + o.embedder + "'");
    }
  }
  if (o.strict) c.embedder.strict = true;
  if (!o.system_name.empty()) c.system_name = o.system_name;
  return c;
}

Corpus load_configured_corpus(const RunConfig& c) {
  if (!c.corpus_path) throw Error(ErrorKind::ConfigError, "no corpus given (--corpus or config)");
  const auto format = c.corpus_format.value_or(corpus_format_from_path(*c.corpus_path));
  return load_corpus(*c.corpus_path, format);
}

ordered_json base_manifest(const RunConfig& c, const std::map<std::string, std::string>& checksums) {
  ordered_json m;
  m["tool"] = "llano";
  m["created_at"] = manifest_timestamp();
  m["config_digest"] = c.digest;
  m["template_checksums"] = checksums;
  return m;
}

std::map<std::string, std::string> checksums_or_empty(const RunConfig& c) {
  try {
    return prompts::TemplateSet::load(c.prompts_dir).checksums();
  } catch (const Error&) {
    return {};
  }
}

void write_manifest(const fs::path& artifact, const ordered_json& manifest) {
  io::write_file(manifest_path_for(artifact), manifest.dump(2) + "\n");
}

int cmd_stats(const Options& o, std::ostream& out) {
  const RunConfig c = effective_config(o);
  const Corpus corpus = load_configured_corpus(c);
  const auto original = corpus_stats(corpus, TextField::Original);
  std::optional<CorpusStats> adapted;
  const bool any_adapted = std::any_of(corpus.documents().begin(), corpus.documents().end(),
                                       [](const Document& d) { return d.adapted.has_value(); });
  if (any_adapted) adapted = corpus_stats(corpus, TextField::Adapted);
  out << render_stats(original, adapted);
  return 0;
}

int cmd_subset(const Options& o, std::ostream& out, std::ostream& err) {
  const RunConfig c = effective_config(o);
  const Corpus corpus = load_configured_corpus(c);
  SubsetSpec spec;
  spec.kind = parse_subset_kind(o.subset_kind);
  spec.size = o.subset_size;
  spec.seed = o.subset_seed ? o.subset_seed : c.seed;
  if (!o.group_key.empty()) spec.group_key = parse_group_key(o.group_key);
  const Corpus subset = build_subset(corpus, spec);

  const fs::path dest = o.subset_out;
  write_corpus(subset, dest, corpus_format_from_path(dest));
  ordered_json m = base_manifest(c, checksums_or_empty(c));
  m["subset"] = {{"kind", to_string(spec.kind)},
                 {"size", spec.size},
                 {"seed", spec.seed ? ordered_json(*spec.seed) : ordered_json(nullptr)},
                 {"group_key", spec.group_key ? ordered_json(std::string(to_string(*spec.group_key)))
                                              : ordered_json(nullptr)}};
  m["source_sha256"] = digest::sha256_hex(io::read_file(*c.corpus_path));
  m["documents"] = subset.size();
  write_manifest(dest, m);
  out << "wrote " << subset.size() << " documents to " << dest.string() << "\n";
  (void)err;
  return 0;
}

int cmd_simplify(const Options& o, std::ostream& out, std::ostream& err) {
  const RunConfig c = effective_config(o);
  const Corpus corpus = load_configured_corpus(c);
  const auto templates = prompts::TemplateSet::load(c.prompts_dir);
  const auto backend = make_backend(c);

  llm::GenerationSettings settings;
  settings.model_name = c.backend.model;
  settings.max_output_tokens = c.backend.max_output_tokens;
  settings.classifier.short_news_max_words = c.short_news_max_words;

  err << "simplifying " << corpus.size() << " documents with "
      << prompts::to_string(c.strategy) << " (" << backend->id() << ")\n";
  const BatchResult result = simplify_corpus(corpus, c.strategy, *backend, c.normalization,
                                             templates, settings, c.concurrency);

  const fs::path dest = c.output_dir / "adaptations.jsonl";
  io::write_file(dest, adaptation_jsonl(result.successes));

  ordered_json m = base_manifest(c, templates.checksums());
  m["strategy"] = prompts::to_string(c.strategy);
  m["model"] = c.backend.model;
  m["backend"] = backend->id();
  m["documents"] = corpus.size();
  m["succeeded"] = result.successes.size();
  m["backend_calls"] = result.backend_calls;
  ordered_json failures = ordered_json::array();
  for (const auto& f : result.failures) failures.push_back({{"id", f.id}, {"error", f.error}});
  m["failures"] = std::move(failures);
  write_manifest(dest, m);

  err << result.successes.size() << " succeeded, " << result.failures.size() << " failed\n";
  for (const auto& f : result.failures) err << "  failed: " << f.error << "\n";
  out << dest.string() << "\n";
  return result.successes.empty() && !corpus.empty() ? 1 : 0;
}

int cmd_evaluate(const Options& o, std::ostream& out) {
  const RunConfig c = effective_config(o);
  const auto outputs = load_outputs(o.outputs);
  const auto references = load_references(o.references);
  const auto embedder = make_embedder(c.embedder);

  EvalReport report = evaluate(outputs, references, embedder.get(), c.embedder.strict,
                               c.system_name);
  ordered_json m = base_manifest(c, checksums_or_empty(c));
  m["embedder"] = embedder ? ordered_json(embedder->id()) : ordered_json(nullptr);
  m["outputs"] = {{"file", fs::path(o.outputs).filename().string()},
                  {"sha256", digest::sha256_hex(io::read_file(o.outputs))}};
  m["references"] = {{"file", fs::path(o.references).filename().string()},
                     {"sha256", digest::sha256_hex(io::read_file(o.references))}};
  const fs::path gen_manifest = manifest_path_for(o.outputs);
  if (fs::exists(gen_manifest)) {
    try {
      const auto g = json::parse(io::read_file(gen_manifest));
      m["generation"] = {{"config_digest", g.value("config_digest", "")},
                         {"template_checksums", g.value("template_checksums", json::object())}};
    } catch (const json::exception&) {
      // Not ours; ignore.
    }
  }
  report.manifest = std::move(m);

  const fs::path dest =
      o.report_out.empty() ? c.output_dir / "report.json" : fs::path(o.report_out);
  io::write_file(dest, to_json(report).dump(2) + "\n");

  out << render_ranking({report}, RankMetric::Sim, ReportFormat::Text);
  if (report.degraded) out << "note: SIM is BoW only (no embedder)\n";
  if (!report.failed_ids.empty()) {
    out << "failed ids:";
    for (const auto& id : report.failed_ids) out << " " << id;
    out << "\n";
  }
  if (!report.unmatched_output_ids.empty() || !report.unmatched_reference_ids.empty()) {
    out << "unmatched: " << report.unmatched_output_ids.size() << " outputs, "
        << report.unmatched_reference_ids.size() << " references\n";
  }
  out << "report: " << dest.string() << "\n";
  return 0;
}

int cmd_report(const Options& o, std::ostream& out) {
  const auto format = parse_report_format(o.format);
  const auto metric = parse_rank_metric(o.rank_by);
  std::vector<EvalReport> reports;
  for (const auto& path : o.reports) {
    json doc;
    try {
      doc = json::parse(io::read_file(path));
    } catch (const json::parse_error& e) {
      throw Error(ErrorKind::ParseError, path + ": " + e.what());
    }
    reports.push_back(report_from_json(doc));
  }
  out << render_ranking(std::move(reports), metric, format);
  return 0;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Spanish plain-language simplification toolkit", "llano"};
  app.require_subcommand(1);
  Options o;
  app.add_option("--config", o.config_path, "JSON run configuration")->check(CLI::ExistingFile);

  auto corpus_opts = [&o](CLI::App* sub) {
    sub->add_option("--corpus", o.corpus, "Corpus file (.csv or .jsonl)");
    sub->add_option("--corpus-format", o.corpus_format, "csv or jsonl")
        ->check(CLI::IsMember({"csv", "jsonl"}));
  };

  auto* stats = app.add_subcommand("stats", "Corpus statistics table");
  corpus_opts(stats);

  auto* subset = app.add_subcommand("subset", "Write a corpus subset");
  corpus_opts(subset);
  subset->add_option("--kind", o.subset_kind, "smallest, random or categories")
      ->required()
      ->check(CLI::IsMember({"smallest", "random", "categories"}));
  subset->add_option("--size", o.subset_size, "Number of documents")->required();
  subset->add_option("--seed", o.subset_seed, "Seed for random subsets");
  subset->add_option("--group-key", o.group_key, "origin or topic")
      ->check(CLI::IsMember({"origin", "topic"}));
  subset->add_option("--out", o.subset_out, "Output corpus path")->required();

  auto* simplify = app.add_subcommand("simplify", "Generate adaptations");
  corpus_opts(simplify);
  simplify->add_option("--strategy", o.strategy, "P1, P2 or P3")
      ->check(CLI::IsMember({"P1", "P2", "P3"}));
  simplify->add_option("--output-dir", o.output_dir, "Directory for adaptations.jsonl");
  simplify->add_option("--replay-store", o.replay_store, "Use this replay store");
  simplify->add_option("--concurrency", o.concurrency, "Parallel requests")->check(CLI::PositiveNumber);

  auto* evaluate_cmd = app.add_subcommand("evaluate", "Score outputs against references");
  evaluate_cmd->add_option("--outputs", o.outputs, "Adaptations JSONL or CSV")->required();
  evaluate_cmd->add_option("--references", o.references, "Corpus with reference adaptations")
      ->required();
  evaluate_cmd->add_option("--embedder", o.embedder, "none, offline-fake or http");
  evaluate_cmd->add_option("--system-name", o.system_name, "Name shown in rankings");
  evaluate_cmd->add_option("--output-dir", o.output_dir, "Directory for report.json");
  evaluate_cmd->add_option("--out", o.report_out, "Report JSON path");
  evaluate_cmd->add_flag("--strict", o.strict, "Fail instead of degrading when the embedder is down");

  auto* report = app.add_subcommand("report", "Render one or more evaluation reports");
  report->add_option("reports", o.reports, "Report JSON files")->required();
  report->add_option("--format", o.format, "text, markdown or csv")
      ->check(CLI::IsMember({"text", "markdown", "csv"}));
  report->add_option("--rank-by", o.rank_by, "sim or fh")->check(CLI::IsMember({"sim", "fh"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  try {
    if (stats->parsed()) return cmd_stats(o, out);
    if (subset->parsed()) return cmd_subset(o, out, err);
    if (simplify->parsed()) return cmd_simplify(o, out, err);
    if (evaluate_cmd->parsed()) return cmd_evaluate(o, out);
    if (report->parsed()) return cmd_report(o, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return is_usage_error(e.kind()) ? 2 : 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}

}  // namespace llano::cli
