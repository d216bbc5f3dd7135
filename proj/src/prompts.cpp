#include "llano/prompts.hpp"

#include <regex>

#include "llano/digest.hpp"
#include "llano/error.hpp"
#include "llano/io.hpp"
#include "llano/text.hpp"

namespace llano::prompts {
namespace {

constexpr std::string_view kPlaceholder = "{{TEXT}}";

std::size_t count_occurrences(std::string_view haystack, std::string_view needle) {
  std::size_t n = 0;
  for (auto pos = haystack.find(needle); pos != std::string_view::npos;
       pos = haystack.find(needle, pos + needle.size())) {
    ++n;
  }
  return n;
}

void require_text(std::string_view text) {
  if (text::is_blank(text)) throw Error(ErrorKind::EmptyText, "working text is empty");
}

std::string fill(std::string_view user_template, std::string_view text) {
  std::string out;
  const auto pos = user_template.find(kPlaceholder);
  out.append(user_template.substr(0, pos));
  out.append(text);
  out.append(user_template.substr(pos + kPlaceholder.size()));
  return out;
}

MessageSet render_full(const Template& t, std::string_view text) {
  require_text(text);
  return {t.system, fill(*t.user, text)};
}

std::string_view category_template(Category c) {
  switch (c) {
    case Category::EventListing: return "p3_event_listing";
    case Category::EconomicNotice: return "p3_economic_notice";
    case Category::ShortNews: return "p3_short_news";
    case Category::InstitutionalNote: return "p3_institutional_note";
  }
  return "";
}

// Lowercase, collapse horizontal whitespace, trim lines, drop blank ones.
std::string canonical_for_classifier(std::string_view input) {
  std::string out;
  for (auto line : text::split_lines(input)) {
    std::string collapsed;
    bool space = false;
    for (char32_t c : text::decode_utf8(text::trim(line))) {
      if (text::is_space(c)) {
        space = true;
        continue;
      }
      if (space && !collapsed.empty()) collapsed.push_back(' ');
      space = false;
      text::append_utf8(collapsed, text::to_lower(c));
    }
    if (collapsed.empty()) continue;
    if (!out.empty()) out.push_back('\n');
    out += collapsed;
  }
  return out;
}

std::size_t count_matches(const std::string& s, const std::regex& re) {
  return static_cast<std::size_t>(
      std::distance(std::sregex_iterator(s.begin(), s.end(), re), std::sregex_iterator()));
}

}  // namespace

std::string_view to_string(Strategy s) {
  switch (s) {
    case Strategy::P1: return "P1";
    case Strategy::P2: return "P2";
    case Strategy::P3: return "P3";
  }
  return "?";
}

std::string_view to_string(Category c) {
  switch (c) {
    case Category::EventListing: return "event_listing";
    case Category::EconomicNotice: return "economic_notice";
    case Category::ShortNews: return "short_news";
    case Category::InstitutionalNote: return "institutional_note";
  }
  return "?";
}

Strategy parse_strategy(std::string_view name) {
  if (name == "P1" || name == "p1") return Strategy::P1;
  if (name == "P2" || name == "p2") return Strategy::P2;
  if (name == "P3" || name == "p3") return Strategy::P3;
  throw Error(ErrorKind::InvalidArgument, "unknown strategy '" + std::string(name) + "'");
}

Category parse_category(std::string_view name) {
  for (auto c : {Category::EventListing, Category::EconomicNotice, Category::ShortNews,
                 Category::InstitutionalNote}) {
    if (to_string(c) == name) return c;
  }
  throw Error(ErrorKind::InvalidArgument, "unknown category '" + std::string(name) + "'");
}

Template parse_template(std::string name, std::string_view source) {
  Template t;
  t.name = std::move(name);
  t.checksum = digest::sha256_hex(source);
  auto fail = [&](const std::string& why) {
    throw Error(ErrorKind::TemplateError, "template '" + t.name + "': " + why);
  };

  const auto lines = text::split_lines(source);
  std::size_t i = 0;
  if (lines.empty() || text::trim(lines[0]) != "---") fail("missing front matter");
  for (i = 1; i < lines.size() && text::trim(lines[i]) != "---"; ++i) {
    const auto line = text::trim(lines[i]);
    if (line.empty()) continue;
    const auto colon = line.find(':');
    if (colon == std::string_view::npos) fail("bad front matter line '" + std::string(line) + "'");
    t.front_matter[std::string(text::trim(line.substr(0, colon)))] =
        std::string(text::trim(line.substr(colon + 1)));
  }
  if (i == lines.size()) fail("unterminated front matter");

  std::string* section = nullptr;
  std::string system, user;
  bool has_user = false, has_system = false;
  for (++i; i < lines.size(); ++i) {
    const auto line = lines[i];
    if (text::trim(line) == "[system]") {
      section = &system;
      has_system = true;
      continue;
    }
    if (text::trim(line) == "[user]") {
      section = &user;
      has_user = true;
      continue;
    }
    if (!section) {
      if (!text::trim(line).empty()) fail("text outside a section");
      continue;
    }
    section->append(line);
    section->push_back('\n');
  }
  if (!has_system) fail("no [system] section");
  t.system = std::string(text::trim(system));
  if (t.system.empty()) fail("empty [system] section");
  if (count_occurrences(t.system, kPlaceholder) != 0) fail("{{TEXT}} inside [system]");
  if (has_user) {
    t.user = std::string(text::trim(user));
    if (count_occurrences(*t.user, kPlaceholder) != 1) {
      fail("[user] must contain exactly one {{TEXT}}");
    }
  }
  return t;
}

const std::vector<std::string>& TemplateSet::required_names() {
  static const std::vector<std::string> kNames = {
      "p1_reduce",        "p1_rewrite",         "p2_unified",
      "p3_common",        "p3_event_listing",   "p3_economic_notice",
      "p3_short_news",    "p3_institutional_note",
  };
  return kNames;
}

TemplateSet TemplateSet::from_sources(const std::map<std::string, std::string>& sources) {
  TemplateSet set;
  for (const auto& name : required_names()) {
    const auto it = sources.find(name);
    if (it == sources.end()) {
      throw Error(ErrorKind::TemplateError, "missing template '" + name + "'");
    }
    Template t = parse_template(name, it->second);
    const bool fragment = name.rfind("p3_", 0) == 0 && name != "p3_common";
    if (fragment && t.user) {
      throw Error(ErrorKind::TemplateError, "category block '" + name + "' must not have [user]");
    }
    if (!fragment && !t.user) {
      throw Error(ErrorKind::TemplateError, "template '" + name + "' needs a [user] section");
    }
    set.templates_.emplace(name, std::move(t));
  }
  return set;
}

TemplateSet TemplateSet::load(const std::filesystem::path& dir) {
  std::map<std::string, std::string> sources;
  for (const auto& name : required_names()) {
    sources[name] = io::read_file(dir / (name + ".prompt"));
  }
  return from_sources(sources);
}

const Template& TemplateSet::get(std::string_view name) const {
  const auto it = templates_.find(name);
  if (it == templates_.end()) {
    throw Error(ErrorKind::TemplateError, "unknown template '" + std::string(name) + "'");
  }
  return it->second;
}

std::map<std::string, std::string> TemplateSet::checksums() const {
  std::map<std::string, std::string> out;
  for (const auto& [name, t] : templates_) out[name + ".prompt"] = t.checksum;
  return out;
}

MessageSet render_p1(const TemplateSet& templates, std::string_view text, P1Stage stage) {
  return render_full(templates.get(stage == P1Stage::Reduce ? "p1_reduce" : "p1_rewrite"), text);
}

MessageSet render_p2(const TemplateSet& templates, std::string_view text) {
  return render_full(templates.get("p2_unified"), text);
}

MessageSet render_p3(const TemplateSet& templates, std::string_view text, Category category) {
  MessageSet m = render_full(templates.get("p3_common"), text);
  m.system += "\n\n";
  m.system += templates.get(category_template(category)).system;
  return m;
}

CategoryScores category_scores(std::string_view input) {
  static const std::regex economic(
      "\\b(presupuestos?|presupuestari[oa]s?|subvenci\xC3\xB3n|subvenciones|"
      "ayudas? econ\xC3\xB3micas?|tasas?|impuestos?|licitaci\xC3\xB3n|importe|"
      "bonificaci\xC3\xB3n|financiaci\xC3\xB3n|inversi\xC3\xB3n|euros?|eur)\\b|\xE2\x82\xAC");
  static const std::regex clock("\\b[0-9]{1,2}:[0-9]{2}\\b");
  static const std::regex spoken_time(
      "\\blas? [0-9]{1,2}( y (cuarto|media|[0-9]+ minutos?))? "
      "(de la (ma\xC3\xB1" "ana|tarde|noche|madrugada)|del mediod\xC3\xAD" "a)");
  static const std::regex day_month(
      "\\b[0-9]{1,2} de (enero|febrero|marzo|abril|mayo|junio|julio|agosto|septiembre|"
      "setiembre|octubre|noviembre|diciembre)\\b");
  static const std::regex weekday(
      "\\b(lunes|martes|mi\xC3\xA9rcoles|jueves|viernes|s\xC3\xA1" "bado|domingo)\\b");
  static const std::regex list_marker(
      "(^|\\n)(- |\xE2\x80\xA2 ?|\\* |[0-9]{1,2}[.)] )");
  static const std::regex venue(
      "\\b(biblioteca|teatro|auditorio|museo|plaza|parque|pabell\xC3\xB3n|polideportivo|"
      "centro cultural|casa de cultura|sala|sal\xC3\xB3n|recinto|explanada|estadio)\\b");

  const std::string s = canonical_for_classifier(input);
  CategoryScores sc;
  sc.economic = count_matches(s, economic);
  sc.time_date = count_matches(s, clock) + count_matches(s, spoken_time) +
                 count_matches(s, day_month) + count_matches(s, weekday);
  sc.list_markers = count_matches(s, list_marker);
  sc.venues = count_matches(s, venue);
  sc.words = text::count_words(s);
  return sc;
}

Category classify_category(std::string_view text, const ClassifierOptions& options) {
  const auto sc = category_scores(text);
  const bool event = sc.time_date >= 2 || (sc.list_markers >= 1 && sc.venues >= 1);
  const bool econ = sc.economic >= 1;
  const std::size_t event_score = sc.time_date + sc.list_markers + sc.venues;
  if (event && (!econ || event_score >= sc.economic)) return Category::EventListing;
  if (econ) return Category::EconomicNotice;
  if (sc.words < options.short_news_max_words) return Category::ShortNews;
  return Category::InstitutionalNote;
}

PromptPlan plan(const TemplateSet& templates, Strategy strategy, std::string_view text,
                const ClassifierOptions& options) {
  require_text(text);
  PromptPlan p;
  p.strategy = strategy;
  switch (strategy) {
    case Strategy::P1:
      p.steps.push_back({"p1_reduce", render_p1(templates, text, P1Stage::Reduce)});
      p.steps.push_back({"p1_rewrite", std::nullopt});
      break;
    case Strategy::P2:
      p.steps.push_back({"p2_unified", render_p2(templates, text)});
      break;
    case Strategy::P3: {
      const auto category = classify_category(text, options);
      p.category = category;
      p.steps.push_back({"p3_common+" + std::string(category_template(category)),
                         render_p3(templates, text, category)});
      break;
    }
  }
  return p;
}

MessageSet render_pending_step(const TemplateSet& templates, const PromptPlan& plan,
                               std::size_t step, std::string_view working_text) {
  if (step >= plan.steps.size()) {
    throw Error(ErrorKind::InvalidArgument, "plan has no step " + std::to_string(step));
  }
  if (!plan.steps[step].pending()) return *plan.steps[step].messages;
  if (plan.strategy == Strategy::P1 && step == 1) {
    return render_p1(templates, working_text, P1Stage::Rewrite);
  }
  throw Error(ErrorKind::InvalidArgument, "step " + std::to_string(step) + " cannot be pending");
}

}  // namespace llano::prompts
