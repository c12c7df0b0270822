#include "csp/agents/prompts.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>

#include "csp/util/errors.hpp"

namespace csp {

namespace {

constexpr const char* kSystemTemplate =
    "You are {persona}.\n"
    "\n"
    "You are taking part in a ranking contest. Every participant submits one "
    "document each round, and a search engine whose inner workings are not "
    "disclosed ranks all submitted documents for the query \"{query}\". Your "
    "goal is to have your document ranked first.\n"
    "\n"
    "Rules:\n"
    "- Your document must contain at most {word_limit} words.\n"
    "- Your document must stay faithful to your original document: keep its "
    "topic and maintain similarity to it.\n"
    "- Reply with the text of your revised document only, with no headers, "
    "prefixes, or explanations.\n"
    "\n"
    "Your current document:\n"
    "{current_document}\n";

constexpr const char* kSystemNoCopyTemplate =
    "You are {persona}.\n"
    "\n"
    "You are taking part in a ranking contest. Every participant submits one "
    "document each round, and a search engine whose inner workings are not "
    "disclosed ranks all submitted documents for the query \"{query}\". Your "
    "goal is to have your document ranked first.\n"
    "\n"
    "Rules:\n"
    "- Your document must contain at most {word_limit} words.\n"
    "- Your document must stay faithful to your original document: keep its "
    "topic and maintain similarity to it.\n"
    "- Do not copy content from the documents of other participants; copied "
    "content is penalized.\n"
    "- Reply with the text of your revised document only, with no headers, "
    "prefixes, or explanations.\n"
    "\n"
    "Your current document:\n"
    "{current_document}\n";

constexpr const char* kCleanTemplate =
    "The text below may start with a header or prefix (for example \"Here is "
    "the modified document:\") that is not part of the document itself. "
    "Remove any such header or prefix and return the document text exactly as "
    "it is otherwise.\n"
    "\n"
    "{document}\n";

constexpr const char* kListwiseTemplate =
    "Ranking feedback from previous rounds follows.\n"
    "\n"
    "Most recent round, the other participants' documents ranked from highest "
    "to lowest (your own document is excluded):\n"
    "{ranked_list_t}\n"
    "\n"
    "Second-to-last round, all documents ranked from highest to lowest:\n"
    "{ranked_list_t_minus_1}\n"
    "\n"
    "Revise your document so that it is ranked first in the next round. Reply "
    "with the revised document text only.\n";

constexpr const char* kPairwiseTemplate =
    "Ranking feedback from previous rounds follows. From each of the listed "
    "rounds, two documents were sampled together with the ranks the search "
    "engine gave them.\n"
    "\n"
    "{pairs}\n"
    "\n"
    "Revise your document so that it is ranked first in the next round. Reply "
    "with the revised document text only.\n";

using Values = std::map<std::string, std::optional<std::string>>;

// Substitutes {name} placeholders paragraph by paragraph; a paragraph
// referencing a placeholder whose value is absent is dropped entirely
// (this is how the listwise prompt loses its second section in round 1).
std::string render(const std::string& templ, const Values& values) {
  std::vector<std::string> paragraphs;
  size_t pos = 0;
  while (pos <= templ.size()) {
    size_t next = templ.find("\n\n", pos);
    if (next == std::string::npos) {
      paragraphs.push_back(templ.substr(pos));
      break;
    }
    paragraphs.push_back(templ.substr(pos, next - pos));
    pos = next + 2;
  }

  std::vector<std::string> kept;
  for (auto& para : paragraphs) {
    bool drop = false;
    std::string out;
    size_t i = 0;
    while (i < para.size()) {
      if (para[i] == '{') {
        size_t close = para.find('}', i);
        if (close != std::string::npos) {
          const std::string name = para.substr(i + 1, close - i - 1);
          auto it = values.find(name);
          if (it != values.end()) {
            if (!it->second) {
              drop = true;
              break;
            }
            out += *it->second;
            i = close + 1;
            continue;
          }
        }
      }
      out.push_back(para[i++]);
    }
    if (!drop) kept.push_back(std::move(out));
  }

  std::string result;
  for (size_t i = 0; i < kept.size(); ++i) {
    if (i) result += "\n\n";
    result += kept[i];
  }
  return result;
}

std::string format_ranked_list(const std::vector<VisibleRound>& history,
                               size_t index, const std::string& exclude_player) {
  const VisibleRound& vr = history[index];
  std::vector<RankEntry> order = vr.ranking;
  std::sort(order.begin(), order.end(),
            [](const RankEntry& a, const RankEntry& b) { return a.rank < b.rank; });
  std::string out;
  bool first = true;
  for (const auto& e : order) {
    if (e.player_id == exclude_player) continue;
    if (!first) out += "\n";
    first = false;
    out += "Rank " + std::to_string(e.rank) + ":\n";
    out += doc_of(vr.documents, e.player_id).text;
  }
  return out;
}

}  // namespace

PromptTemplates default_prompt_templates() {
  return {kSystemTemplate, kSystemNoCopyTemplate, kCleanTemplate,
          kListwiseTemplate, kPairwiseTemplate};
}

PromptTemplates load_prompt_templates(const std::string& dir) {
  PromptTemplates t = default_prompt_templates();
  auto load = [&](const char* name, std::string& slot) {
    const auto path = std::filesystem::path(dir) / (std::string(name) + ".txt");
    std::ifstream in(path);
    if (!in) return;
    std::stringstream ss;
    ss << in.rdbuf();
    slot = ss.str();
  };
  load("system", t.system);
  load("system_no_copy", t.system_no_copy);
  load("clean", t.clean);
  load("listwise", t.listwise);
  load("pairwise", t.pairwise);
  return t;
}

std::string build_system_prompt(const Player& player, const Query& query,
                                const Document& own_doc,
                                const PromptVariant& variant, int token_limit,
                                const PromptTemplates& templates) {
  Values values;
  values["persona"] = player.persona.empty()
                          ? std::optional<std::string>("a participant")
                          : std::optional<std::string>(player.persona);
  values["query"] = query.text;
  values["word_limit"] = std::to_string(token_limit);
  values["current_document"] = own_doc.text;
  const std::string& templ =
      variant.no_copy_clause ? templates.system_no_copy : templates.system;
  return render(templ, values);
}

PromptBundle build_listwise_prompt(const GameView& view, const Player& player,
                                   const PromptVariant& variant,
                                   int token_limit,
                                   const PromptTemplates& templates) {
  if (view.history.empty())
    throw ParameterError("listwise prompt needs at least one past round");
  Values values;
  values["ranked_list_t"] =
      format_ranked_list(view.history, view.history.size() - 1, player.id);
  if (view.history.size() >= 2) {
    values["ranked_list_t_minus_1"] =
        format_ranked_list(view.history, view.history.size() - 2, "");
  } else {
    values["ranked_list_t_minus_1"] = std::nullopt;
  }
  PromptBundle bundle;
  bundle.system_prompt = build_system_prompt(
      player, view.query, view.own_current_doc, variant, token_limit, templates);
  bundle.user_prompt = render(templates.listwise, values);
  return bundle;
}

PromptBundle build_pairwise_prompt(GameView& view, const Player& player,
                                   const PromptVariant& variant,
                                   int token_limit,
                                   const PromptTemplates& templates) {
  if (view.history.empty())
    throw ParameterError("pairwise prompt needs at least one past round");
  const size_t take = std::min<size_t>(3, view.history.size());
  std::string pairs;
  bool first_block = true;
  for (size_t idx = view.history.size() - take; idx < view.history.size();
       ++idx) {
    const VisibleRound& vr = view.history[idx];
    std::vector<RankEntry> order = vr.ranking;
    std::sort(order.begin(), order.end(), [](const RankEntry& a,
                                             const RankEntry& b) {
      return a.rank < b.rank;
    });
    if (!view.allow_own_in_pair) {
      order.erase(std::remove_if(order.begin(), order.end(),
                                 [&](const RankEntry& e) {
                                   return e.player_id == player.id;
                                 }),
                  order.end());
    }
    const size_t n = order.size();
    if (n < 2) continue;  // not enough documents to form a pair
    size_t i = view.rng_stream.below(n);
    size_t j = view.rng_stream.below(n - 1);
    if (j >= i) ++j;
    if (i > j) std::swap(i, j);  // present lower rank number first
    std::string block = "Round " + std::to_string(vr.round) + ":";
    for (size_t pick : {i, j}) {
      const RankEntry& e = order[pick];
      block += "\nDocument ranked " + std::to_string(e.rank) + ":\n";
      block += doc_of(vr.documents, e.player_id).text;
    }
    if (!first_block) pairs += "\n\n";
    first_block = false;
    pairs += block;
  }
  Values values;
  values["pairs"] = pairs;
  PromptBundle bundle;
  bundle.system_prompt = build_system_prompt(
      player, view.query, view.own_current_doc, variant, token_limit, templates);
  bundle.user_prompt = render(templates.pairwise, values);
  return bundle;
}

std::string build_clean_prompt(const std::string& document,
                               const PromptTemplates& templates) {
  Values values;
  values["document"] = document;
  return render(templates.clean, values);
}

}  // namespace csp
