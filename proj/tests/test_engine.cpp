#include <doctest.h>

#include <cstdio>
#include <string>

#include "csp/engine/engine.hpp"
#include "csp/util/errors.hpp"

using namespace csp;

namespace {

CompetitionConfig scripted_config(int rounds = 3) {
  CompetitionConfig c;
  c.competition_id = "eng";
  c.rounds = rounds;
  c.rng_seed = 21;
  Player p1{"p1", "", {}};
  Player p2{"p2", "", {}};
  Player p3{"p3", "", {}};
  c.players = {p1, p2, p3};
  QuerySetup q1;
  q1.query = {"q1", "solar panel efficiency"};
  q1.initial_documents = {
      {"p1", "solar panels convert sunlight with high efficiency"},
      {"p2", "home batteries store energy from the grid"},
      {"p3", "wind turbines also make renewable electricity"}};
  QuerySetup q2;
  q2.query = {"q2", "roman aqueducts"};
  q2.initial_documents = {{"p1", "roman engineering built many aqueducts"},
                          {"p2", "medieval castles had moats"},
                          {"p3", "aqueducts carried water to roman cities"}};
  c.queries = {q1, q2};
  return c;
}

BackgroundCorpus corpus_for(const CompetitionConfig& c) {
  CorpusBuilder b;
  for (const auto& q : c.queries) {
    b.add_text(q.query.text);
    for (const auto& [pid, text] : q.initial_documents) b.add_text(text);
  }
  return b.build();
}

struct Fixture {
  CompetitionConfig config;
  BackgroundCorpus corpus;
  MockTransport transport;
  EngineServices services;

  explicit Fixture(CompetitionConfig c)
      : config(std::move(c)), corpus(corpus_for(config)) {
    services.corpus = &corpus;
    services.transport = &transport;
    services.templates = default_prompt_templates();
    services.backoff_base_ms = 0;
  }
};

}  // namespace

TEST_CASE("run_competition refuses invalid configs") {
  Fixture f(scripted_config());
  f.config.rounds = 0;
  CHECK_THROWS_AS(run_competition(f.config, f.services), ParameterError);
}

TEST_CASE("all-noop competition is a fixed point") {
  Fixture f(scripted_config(4));
  const RunResult r = run_competition(f.config, f.services);
  CHECK(r.completed);
  CHECK(r.completed_rounds == 4);
  for (const auto& game : r.dataset.games) {
    REQUIRE(game.rounds.size() == 4);
    REQUIRE(game.initial_ranking.size() == 3);
    for (const auto& rr : game.rounds) {
      for (const auto& d : rr.documents) {
        CHECK(d.text == game.initial_documents.at(d.player_id).text);
        CHECK_FALSE(d.fallback);
      }
      // ranking identical to round 0 (scores tie-broken by previous rank)
      for (size_t i = 0; i < rr.ranking.size(); ++i) {
        CHECK(rr.ranking[i].player_id == game.initial_ranking[i].player_id);
        CHECK(rr.ranking[i].rank == game.initial_ranking[i].rank);
      }
    }
  }
}

TEST_CASE("round-0 ranking is stored and scored") {
  Fixture f(scripted_config(1));
  const RunResult r = run_competition(f.config, f.services);
  const GameRecord& g = r.dataset.games[0];
  REQUIRE(g.initial_ranking.size() == 3);
  // p1's doc matches the q1 query terms; it must outrank the others
  CHECK(g.initial_ranking[0].player_id == "p1");
  CHECK(g.initial_ranking[0].score > g.initial_ranking[1].score);
}

TEST_CASE("identical config and seed produce byte-identical datasets") {
  Fixture a(scripted_config()), b(scripted_config());
  const std::string da = dataset_to_string(run_competition(a.config, a.services).dataset);
  const std::string db = dataset_to_string(run_competition(b.config, b.services).dataset);
  CHECK(da == db);

  Fixture c(scripted_config());
  c.config.rng_seed = 22;
  const std::string dc = dataset_to_string(run_competition(c.config, c.services).dataset);
  CHECK(dc != da);  // the digest differs even when scripted play coincides
}

TEST_CASE("worker count does not change the outcome") {
  Fixture a(scripted_config()), b(scripted_config());
  b.services.workers = 4;
  CHECK(dataset_to_string(run_competition(a.config, a.services).dataset) ==
        dataset_to_string(run_competition(b.config, b.services).dataset));
}

TEST_CASE("stop-after-round checkpoints and resume reproduces the full run") {
  const std::string cp_path = "engine_test_cp.jsonl";
  Fixture full(scripted_config(5));
  const std::string want =
      dataset_to_string(run_competition(full.config, full.services).dataset);

  Fixture part(scripted_config(5));
  RunControl control;
  control.stop_after_round = 2;
  control.checkpoint_path = cp_path;
  const RunResult stopped = run_competition(part.config, part.services, control);
  CHECK_FALSE(stopped.completed);
  CHECK(stopped.completed_rounds == 2);

  Fixture rest(scripted_config(5));
  const Checkpoint cp = load_checkpoint(cp_path);
  CHECK(cp.completed_rounds == 2);
  const RunResult resumed = resume_competition(cp, rest.config, rest.services);
  CHECK(resumed.completed);
  CHECK(dataset_to_string(resumed.dataset) == want);
  std::remove(cp_path.c_str());
}

TEST_CASE("resume rejects a checkpoint from a different config") {
  const std::string cp_path = "engine_test_cp2.jsonl";
  Fixture part(scripted_config(3));
  RunControl control;
  control.stop_after_round = 1;
  control.checkpoint_path = cp_path;
  run_competition(part.config, part.services, control);
  const Checkpoint cp = load_checkpoint(cp_path);

  Fixture other(scripted_config(3));
  other.config.rng_seed = 99;
  CHECK_THROWS_AS(resume_competition(cp, other.config, other.services),
                  SchemaError);
  std::remove(cp_path.c_str());
}

TEST_CASE("resuming a finished run is a no-op") {
  const std::string cp_path = "engine_test_cp3.jsonl";
  Fixture f(scripted_config(2));
  RunControl control;
  control.checkpoint_path = cp_path;
  const RunResult done = run_competition(f.config, f.services, control);
  const Checkpoint cp = load_checkpoint(cp_path);
  CHECK(cp.completed_rounds == 2);
  Fixture g(scripted_config(2));
  const RunResult again = resume_competition(cp, g.config, g.services);
  CHECK(again.completed);
  CHECK(dataset_to_string(again.dataset) == dataset_to_string(done.dataset));
  std::remove(cp_path.c_str());
}

TEST_CASE("term_injector overtakes noop opponents") {
  CompetitionConfig c;
  c.competition_id = "inj";
  c.rounds = 6;
  c.rng_seed = 1;
  Player winner{"p1", "", {}};  // starts on-topic, never changes
  Player chaser{"p2", "", {}};
  chaser.agent.script = ScriptedKind::term_injector;
  c.players = {winner, chaser};
  QuerySetup q;
  q.query = {"q1", "solar panel efficiency rating"};
  q.initial_documents = {
      {"p1", "solar panel efficiency is explained here in detail"},
      {"p2", "this page discusses home improvement topics broadly"}};
  c.queries = {q};
  Fixture f(c);
  const RunResult r = run_competition(f.config, f.services);
  const GameRecord& g = r.dataset.games[0];
  CHECK(top_of(g.initial_ranking).player_id == "p1");
  CHECK(top_of(g.rounds.back().ranking).player_id == "p2");
}

TEST_CASE("copycat adopts the previous winner's text") {
  CompetitionConfig c = scripted_config(2);
  c.players[1].agent.script = ScriptedKind::copycat;
  c.players[2].agent.script = ScriptedKind::copycat;
  Fixture f(c);
  const RunResult r = run_competition(f.config, f.services);
  for (const auto& g : r.dataset.games) {
    const std::string& w0 =
        g.initial_documents.at(top_of(g.initial_ranking).player_id).text;
    CHECK(doc_of(g.rounds[0].documents, "p2").text == w0);
    CHECK(doc_of(g.rounds[0].documents, "p3").text == w0);
  }
}

TEST_CASE("copy penalty demotes everyone holding a duplicated text") {
  CompetitionConfig c = scripted_config(2);
  c.players[1].agent.script = ScriptedKind::copycat;
  c.players[2].agent.script = ScriptedKind::copycat;
  c.penalties.copy.enabled = true;
  c.penalties.copy.similarity_threshold = 1.0;
  Fixture f(c);
  const RunResult r = run_competition(f.config, f.services);
  for (const auto& g : r.dataset.games) {
    const std::string winner0 = top_of(g.initial_ranking).player_id;
    const auto& rr = g.rounds[0];
    // the copy pool covers the others' current round too, so the copied
    // original is flagged along with both copycats; the previous-rank
    // tie-break still leaves the original on top of the demoted block
    CHECK(rr.penalties.size() == 3);
    CHECK(top_of(rr.ranking).player_id == winner0);
  }
}

TEST_CASE("llm agents receive only strictly earlier rounds (causality audit)") {
  CompetitionConfig c = scripted_config(3);
  for (auto& p : c.players) {
    p.agent.kind = AgentSpec::Kind::llm;
    p.agent.model = "m";
  }
  Fixture f(c);
  // each agent emits a marker naming its player and round
  f.transport.set_fallback([](const ChatRequest&, const CallContext& ctx) {
    return "marker " + ctx.player_id + " r" + std::to_string(ctx.round) +
           " content";
  });
  run_competition(f.config, f.services);

  for (const auto& req : f.transport.seen()) {
    const std::string prompt = req.req.system + "\n" + req.req.user;
    for (int r = req.ctx.round; r <= c.rounds; ++r) {
      for (const auto& p : c.players) {
        if (p.id == req.ctx.player_id && r == req.ctx.round) continue;
        const std::string marker = "marker " + p.id + " r" + std::to_string(r);
        CHECK_MESSAGE(prompt.find(marker) == std::string::npos,
                      "round-" << req.ctx.round << " prompt for "
                               << req.ctx.player_id << " leaks " << marker);
      }
    }
  }
}

TEST_CASE("llm transport failures surface as fallback documents") {
  CompetitionConfig c = scripted_config(1);
  c.players[0].agent.kind = AgentSpec::Kind::llm;
  c.players[0].agent.model = "m";
  Fixture f(c);
  f.services.retries = 1;
  f.transport.fail_next(1000);
  const RunResult r = run_competition(f.config, f.services);
  for (const auto& g : r.dataset.games) {
    const Document& d = doc_of(g.rounds[0].documents, "p1");
    CHECK(d.fallback);
    CHECK(d.text == g.initial_documents.at("p1").text);
  }
}
