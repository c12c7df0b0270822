#include <doctest.h>

#include <string>

#include "csp/agents/prompts.hpp"
#include "csp/util/errors.hpp"

using namespace csp;

namespace {

Document doc(const std::string& pid, const std::string& text, int round) {
  Document d;
  d.player_id = pid;
  d.round = round;
  d.text = text;
  d.doc_id = make_doc_id("c", "q1", round, pid);
  return d;
}

VisibleRound round_of(int r, std::initializer_list<std::pair<const char*, const char*>> docs_by_rank) {
  VisibleRound vr;
  vr.round = r;
  int rank = 1;
  for (const auto& [pid, text] : docs_by_rank) {
    vr.documents.push_back(doc(pid, text, r));
    vr.ranking.push_back({pid, rank++, 0.0});
  }
  return vr;
}

GameView toy_view(int history_rounds) {
  GameView view;
  view.competition_id = "c";
  view.query = {"q1", "solar power"};
  view.own_current_doc = doc("p1", "my own document", history_rounds - 1);
  view.round_number = history_rounds;
  view.rng_stream = stream_for(7, "q1", history_rounds, "p1");
  view.history.push_back(round_of(0, {{"p2", "round zero best"},
                                      {"p1", "my own document"},
                                      {"p3", "round zero worst"}}));
  if (history_rounds >= 2)
    view.history.push_back(round_of(1, {{"p1", "my own document"},
                                        {"p3", "second round middle"},
                                        {"p2", "second round last"}}));
  return view;
}

int count_occurrences(const std::string& haystack, const std::string& needle) {
  int n = 0;
  for (size_t pos = haystack.find(needle); pos != std::string::npos;
       pos = haystack.find(needle, pos + 1))
    ++n;
  return n;
}

}  // namespace

TEST_CASE("system prompt fills persona, query, limit, and document") {
  Player player{"p1", "a marketing specialist", {}};
  const std::string sys =
      build_system_prompt(player, {"q1", "solar power"},
                          doc("p1", "my own document", 1), PromptVariant{}, 256,
                          default_prompt_templates());
  CHECK(sys.find("You are a marketing specialist.") != std::string::npos);
  CHECK(sys.find("\"solar power\"") != std::string::npos);
  CHECK(sys.find("at most 256 words") != std::string::npos);
  CHECK(sys.find("my own document") != std::string::npos);
  CHECK(sys.find('{') == std::string::npos);  // no unfilled placeholders
}

TEST_CASE("empty persona falls back to a neutral one") {
  Player player{"p1", "", {}};
  const std::string sys =
      build_system_prompt(player, {"q1", "x"}, doc("p1", "d", 1),
                          PromptVariant{}, 10, default_prompt_templates());
  CHECK(sys.find("You are a participant.") != std::string::npos);
}

TEST_CASE("no-copy variant adds exactly one extra rule") {
  Player player{"p1", "", {}};
  PromptVariant plain, nocopy;
  nocopy.no_copy_clause = true;
  const auto t = default_prompt_templates();
  const std::string a = build_system_prompt(player, {"q1", "x"},
                                            doc("p1", "d", 1), plain, 10, t);
  const std::string b = build_system_prompt(player, {"q1", "x"},
                                            doc("p1", "d", 1), nocopy, 10, t);
  CHECK(a.find("Do not copy") == std::string::npos);
  CHECK(b.find("Do not copy") != std::string::npos);
}

TEST_CASE("listwise prompt excludes own doc from the latest round only") {
  GameView view = toy_view(2);
  Player player{"p1", "", {}};
  const PromptBundle bundle = build_listwise_prompt(
      view, player, PromptVariant{}, 256, default_prompt_templates());
  const std::string& u = bundle.user_prompt;

  // latest round (round 1): others only, in rank order with own p1 excluded
  CHECK(u.find("Rank 2:\nsecond round middle") != std::string::npos);
  CHECK(u.find("Rank 3:\nsecond round last") != std::string::npos);
  CHECK(u.find("Rank 1:\nmy own document") == std::string::npos);
  // second-to-last round (round 0): all three documents
  CHECK(u.find("Rank 1:\nround zero best") != std::string::npos);
  CHECK(u.find("Rank 2:\nmy own document") != std::string::npos);
  CHECK(u.find("Rank 3:\nround zero worst") != std::string::npos);
  CHECK(count_occurrences(u, "Rank ") == 5);
}

TEST_CASE("listwise prompt with a single past round drops the second section") {
  GameView view = toy_view(1);
  Player player{"p1", "", {}};
  const PromptBundle bundle = build_listwise_prompt(
      view, player, PromptVariant{}, 256, default_prompt_templates());
  const std::string& u = bundle.user_prompt;
  CHECK(u.find("Second-to-last round") == std::string::npos);
  CHECK(u.find("Most recent round") != std::string::npos);
  CHECK(count_occurrences(u, "Rank ") == 2);  // p2 and p3 only
  CHECK(u.find("my own document") == std::string::npos);
}

TEST_CASE("pairwise prompt draws one pair from each of min(3, history) rounds") {
  for (int rounds : {1, 2}) {
    GameView view = toy_view(rounds);
    Player player{"p1", "", {}};
    const PromptBundle bundle = build_pairwise_prompt(
        view, player, PromptVariant{}, 256, default_prompt_templates());
    CHECK(count_occurrences(bundle.user_prompt, "Round ") == rounds);
    CHECK(count_occurrences(bundle.user_prompt, "Document ranked ") ==
          2 * rounds);
  }
}

TEST_CASE("pairwise sampling is reproducible under a fixed stream") {
  GameView a = toy_view(2), b = toy_view(2);
  Player player{"p1", "", {}};
  const auto t = default_prompt_templates();
  CHECK(build_pairwise_prompt(a, player, PromptVariant{}, 256, t).user_prompt ==
        build_pairwise_prompt(b, player, PromptVariant{}, 256, t).user_prompt);
}

TEST_CASE("pairwise pairs are distinct and listed better rank first") {
  GameView view = toy_view(2);
  Player player{"p1", "", {}};
  const PromptBundle bundle = build_pairwise_prompt(
      view, player, PromptVariant{}, 256, default_prompt_templates());
  const std::string& u = bundle.user_prompt;
  size_t pos = 0;
  while ((pos = u.find("Round ", pos)) != std::string::npos) {
    const size_t r1 = u.find("Document ranked ", pos);
    const size_t r2 = u.find("Document ranked ", r1 + 1);
    REQUIRE(r1 != std::string::npos);
    REQUIRE(r2 != std::string::npos);
    const int a = u[r1 + 16] - '0';
    const int b = u[r2 + 16] - '0';
    CHECK(a < b);
    pos = r2 + 1;
  }
}

TEST_CASE("excluding own documents can make a round unpairable") {
  GameView view = toy_view(1);
  view.allow_own_in_pair = false;
  view.history[0].documents.resize(2);  // p2 (rank 1) and p1 (rank 2) only
  view.history[0].ranking.resize(2);
  Player player{"p1", "", {}};
  const PromptBundle bundle = build_pairwise_prompt(
      view, player, PromptVariant{}, 256, default_prompt_templates());
  CHECK(count_occurrences(bundle.user_prompt, "Document ranked ") == 0);
}

TEST_CASE("prompt builders require history") {
  GameView view = toy_view(1);
  view.history.clear();
  Player player{"p1", "", {}};
  const auto t = default_prompt_templates();
  CHECK_THROWS_AS(build_listwise_prompt(view, player, PromptVariant{}, 256, t),
                  ParameterError);
  CHECK_THROWS_AS(build_pairwise_prompt(view, player, PromptVariant{}, 256, t),
                  ParameterError);
}

TEST_CASE("clean prompt embeds the document verbatim") {
  const std::string p =
      build_clean_prompt("Some text.", default_prompt_templates());
  CHECK(p.find("Some text.") != std::string::npos);
  CHECK(p.find("{document}") == std::string::npos);
}

TEST_CASE("template files override the compiled-in defaults") {
  PromptTemplates t = load_prompt_templates("no_such_directory");
  CHECK(t.system == default_prompt_templates().system);
}
