#pragma once

// Prompt strategies rendered into chat-message plans:
//   P1  two steps, structural reduction then plain-language rewrite
//   P2  one unified reduction + rewrite prompt
//   P3  one prompt: shared rules plus a block for the text's category
//
// Prompt wording lives in template files (see prompts/ in the repo), one
// per step or category block:
//
//   ---
//   strategy: P2
//   step: unified
//   category: none
//   ---
//   [system]
//   ...instructions...
//   [user]
//   {{TEXT}}
//
// Full templates carry exactly one {{TEXT}} placeholder, in [user]. P3
// category blocks only have a [system] section that is appended to the
// shared P3 system prompt.

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace llano::prompts {

enum class Strategy { P1, P2, P3 };
enum class Category { EventListing, EconomicNotice, ShortNews, InstitutionalNote };
enum class P1Stage { Reduce, Rewrite };

std::string_view to_string(Strategy s);
std::string_view to_string(Category c);
Strategy parse_strategy(std::string_view name);
Category parse_category(std::string_view name);

struct Message {
  std::string role;
  std::string content;

  bool operator==(const Message&) const = default;
};

struct MessageSet {
  std::string system;
  std::string user;

  std::vector<Message> messages() const { return {{"system", system}, {"user", user}}; }
  bool operator==(const MessageSet&) const = default;
};

struct Template {
  std::string name;
  std::map<std::string, std::string> front_matter;
  std::string system;
  std::optional<std::string> user;  // absent for P3 category blocks
  std::string checksum;             // SHA-256 of the file bytes
};

class TemplateSet {
 public:
  // Loads every template the strategies need from `dir` (<name>.prompt).
  // Throws TemplateError / IoError.
  static TemplateSet load(const std::filesystem::path& dir);
  // name -> file contents; same validation as load().
  static TemplateSet from_sources(const std::map<std::string, std::string>& sources);

  static const std::vector<std::string>& required_names();

  const Template& get(std::string_view name) const;
  // name -> checksum, for run manifests.
  std::map<std::string, std::string> checksums() const;

 private:
  std::map<std::string, Template, std::less<>> templates_;
};

Template parse_template(std::string name, std::string_view source);

MessageSet render_p1(const TemplateSet& templates, std::string_view text, P1Stage stage);
MessageSet render_p2(const TemplateSet& templates, std::string_view text);
MessageSet render_p3(const TemplateSet& templates, std::string_view text, Category category);

// Keyword/pattern scorer, evaluated on lowercased text with whitespace
// runs collapsed and blank lines dropped:
//
//   economic  +1 per: presupuesto(s)/presupuestario, subvención(es),
//             ayuda(s) económica(s), tasa(s), impuesto(s), licitación,
//             importe, bonificación, financiación, inversión, euro(s),
//             EUR, €
//   time/date +1 per: HH:MM, "las N [y ...] de la mañana|tarde|noche|
//             madrugada" / "del mediodía", "N de <mes>", weekday name
//   list      +1 per line starting with "-", "•", "*" or "N." / "N)"
//   venue     +1 per: biblioteca, teatro, auditorio, museo, plaza,
//             parque, pabellón, polideportivo, centro cultural,
//             casa de cultura, sala, salón, recinto, explanada, estadio
//
// EventListing qualifies with time/date >= 2, or list >= 1 and
// venue >= 1; its score is time/date + list + venue. EconomicNotice
// qualifies with economic >= 1; its score is the economic count. The
// higher qualifying score wins, ties going to EventListing. Otherwise
// fewer than short_news_max_words words gives ShortNews, else
// InstitutionalNote.
struct ClassifierOptions {
  std::size_t short_news_max_words = 60;
};

struct CategoryScores {
  std::size_t economic = 0;
  std::size_t time_date = 0;
  std::size_t list_markers = 0;
  std::size_t venues = 0;
  std::size_t words = 0;
};

CategoryScores category_scores(std::string_view text);
Category classify_category(std::string_view text, const ClassifierOptions& options = {});

struct PlanStep {
  std::string template_name;
  std::optional<MessageSet> messages;  // nullopt until the previous step ran

  bool pending() const { return !messages.has_value(); }
};

struct PromptPlan {
  Strategy strategy = Strategy::P2;
  std::vector<PlanStep> steps;
  std::optional<Category> category;  // P3 only
};

PromptPlan plan(const TemplateSet& templates, Strategy strategy, std::string_view text,
                const ClassifierOptions& options = {});

// Renders a pending step with the output of the step before it.
MessageSet render_pending_step(const TemplateSet& templates, const PromptPlan& plan,
                               std::size_t step, std::string_view working_text);

}  // namespace llano::prompts
