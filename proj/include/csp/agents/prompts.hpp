#pragma once

#include <string>
#include <vector>

#include "csp/core/types.hpp"
#include "csp/util/rng.hpp"

namespace csp {

// One past round as visible to an agent: the full document texts plus the
// ranking induced for them. Round 0 is the ranked initial documents.
struct VisibleRound {
  int round = 0;
  std::vector<Document> documents;
  std::vector<RankEntry> ranking;
};

struct GameView {
  std::string competition_id;
  Query query;
  Document own_current_doc;
  std::vector<VisibleRound> history;  // rounds 0..round_number-1, ascending
  int round_number = 1;               // round being played
  Rng rng_stream{0};                  // scoped to (game, round, player)
  bool allow_own_in_pair = true;
};

struct PromptBundle {
  std::string system_prompt;
  std::string user_prompt;
};

// Template texts. Defaults are compiled in; load_prompt_templates
// overrides from a directory of {system,system_no_copy,clean,listwise,
// pairwise}.txt files with {persona}/{query}/{current_document}/
// {word_limit}/{ranked_list_t}/{ranked_list_t_minus_1}/{pairs} placeholders.
struct PromptTemplates {
  std::string system;
  std::string system_no_copy;
  std::string clean;
  std::string listwise;
  std::string pairwise;
};

PromptTemplates default_prompt_templates();
PromptTemplates load_prompt_templates(const std::string& dir);

std::string build_system_prompt(const Player& player, const Query& query,
                                const Document& own_doc,
                                const PromptVariant& variant, int token_limit,
                                const PromptTemplates& templates);

// Most recent round: everyone else's documents, highest to lowest rank;
// second-to-last round: all documents. With a single history round only
// the most-recent section is emitted.
PromptBundle build_listwise_prompt(const GameView& view, const Player& player,
                                   const PromptVariant& variant,
                                   int token_limit,
                                   const PromptTemplates& templates);

// One uniformly sampled pair of distinct documents from each of the last
// min(3, |history|) rounds; rounds with fewer than two documents are
// skipped. Sampling consumes view.rng_stream only.
PromptBundle build_pairwise_prompt(GameView& view, const Player& player,
                                   const PromptVariant& variant,
                                   int token_limit,
                                   const PromptTemplates& templates);

std::string build_clean_prompt(const std::string& document,
                               const PromptTemplates& templates);

}  // namespace csp
