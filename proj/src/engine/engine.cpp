#include "csp/engine/engine.hpp"

#include <algorithm>
#include <future>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

#include "csp/util/errors.hpp"
#include "csp/util/rng.hpp"

namespace csp {

namespace {

Document initial_document(const CompetitionConfig& config,
                          const QuerySetup& setup, const Player& player) {
  Document d;
  d.player_id = player.id;
  d.round = 0;
  d.text = setup.initial_documents.at(player.id);
  d.token_count = static_cast<int>(tokenize(d.text).size());
  d.doc_id =
      make_doc_id(config.competition_id, setup.query.id, 0, player.id);
  return d;
}

RankerResources ranker_resources(const EngineServices& services) {
  RankerResources res;
  res.corpus = services.corpus;
  res.transport = services.transport;
  return res;
}

GameRecord init_game(const CompetitionConfig& config, const QuerySetup& setup,
                     const EngineServices& services) {
  GameRecord game;
  game.query = setup.query;
  std::vector<Document> docs;
  for (const auto& player : config.players) {
    Document d = initial_document(config, setup, player);
    game.initial_documents[player.id] = d;
    docs.push_back(std::move(d));
  }
  // round-0 ranking gives agents their round-1 signal; no penalties apply
  RankedList ranked = rank_round(setup.query, docs, config.ranker,
                                 PenaltySpec{}, PriorRoundInfo{},
                                 ranker_resources(services));
  for (const auto& e : ranked.entries)
    game.initial_ranking.push_back({e.player_id, e.rank, e.score});
  return game;
}

const std::vector<RankEntry>& ranking_before(const GameRecord& game,
                                             int round) {
  if (round <= 1 || game.rounds.empty()) return game.initial_ranking;
  return game.rounds[round - 2].ranking;
}

std::vector<VisibleRound> history_before(const GameRecord& game, int round) {
  std::vector<VisibleRound> out;
  VisibleRound r0;
  r0.round = 0;
  for (const auto& [pid, doc] : game.initial_documents)
    r0.documents.push_back(doc);
  r0.ranking = game.initial_ranking;
  out.push_back(std::move(r0));
  for (const auto& rr : game.rounds) {
    if (rr.round >= round) break;
    VisibleRound vr;
    vr.round = rr.round;
    vr.documents = rr.documents;
    vr.ranking = rr.ranking;
    out.push_back(std::move(vr));
  }
  return out;
}

const Document& current_doc_of(const GameRecord& game, int round,
                               const std::string& player_id) {
  if (round <= 1 || game.rounds.empty())
    return game.initial_documents.at(player_id);
  return doc_of(game.rounds[round - 2].documents, player_id);
}

Document run_agent(const CompetitionConfig& config, const GameRecord& game,
                   const Player& player, int round,
                   const EngineServices& services) {
  GameView view;
  view.competition_id = config.competition_id;
  view.query = game.query;
  view.own_current_doc = current_doc_of(game, round, player.id);
  view.history = history_before(game, round);
  view.round_number = round;
  view.rng_stream =
      stream_for(config.rng_seed, game.query.id, round, player.id);
  view.allow_own_in_pair = config.pairwise_allow_own;

  if (player.agent.kind == AgentSpec::Kind::scripted) {
    ScriptedContext ctx;
    ctx.corpus = services.corpus;
    return scripted_agent_step(player.agent.script, view, ctx);
  }
  if (!services.transport)
    throw ParameterError("llm agent requires a transport");
  LlmParams params;
  params.temperature = config.temperature;
  params.top_p = config.top_p;
  params.token_limit = config.token_limit;
  params.retries = services.retries;
  params.backoff_base_ms = services.backoff_base_ms;
  return llm_agent_step(view, player, player.agent.variant,
                        *services.transport, params, services.templates);
}

// One round of one game: all agent steps (possibly concurrent), then rank.
void play_round(const CompetitionConfig& config, GameRecord& game, int round,
                const EngineServices& services) {
  const size_t n = config.players.size();
  std::vector<Document> docs(n);
  if (services.workers > 1 && n > 1) {
    std::vector<std::future<Document>> futs;
    futs.reserve(n);
    for (size_t i = 0; i < n; ++i) {
      futs.push_back(std::async(std::launch::async, [&, i] {
        return run_agent(config, game, config.players[i], round, services);
      }));
    }
    for (size_t i = 0; i < n; ++i) docs[i] = futs[i].get();
  } else {
    for (size_t i = 0; i < n; ++i)
      docs[i] = run_agent(config, game, config.players[i], round, services);
  }

  PriorRoundInfo prior;
  prior.previous_ranking = ranking_before(game, round);
  if (config.penalties.copy.enabled) {
    std::map<std::string, int> prev_rank;
    for (const auto& e : prior.previous_ranking)
      prev_rank[e.player_id] = e.rank;
    auto by_prev_rank = [&](const Document& a, const Document& b) {
      const int ra = prev_rank.count(a.player_id) ? prev_rank[a.player_id] : 0;
      const int rb = prev_rank.count(b.player_id) ? prev_rank[b.player_id] : 0;
      if (ra != rb) return ra < rb;
      return a.player_id < b.player_id;
    };
    for (const auto& player : config.players) {
      std::vector<Document> pool;
      for (const auto& d : docs)
        if (d.player_id != player.id) pool.push_back(d);
      if (round == 1) {
        for (const auto& [pid, d] : game.initial_documents)
          if (pid != player.id) pool.push_back(d);
      } else if (!game.rounds.empty()) {
        for (const auto& d : game.rounds.back().documents)
          if (d.player_id != player.id) pool.push_back(d);
      }
      std::stable_sort(pool.begin(), pool.end(), by_prev_rank);
      prior.copy_pools[player.id] = std::move(pool);
    }
  }
  if (config.penalties.stagnation.enabled) {
    for (const auto& player : config.players) {
      std::vector<Document> hist;
      hist.push_back(game.initial_documents.at(player.id));
      for (const auto& rr : game.rounds)
        hist.push_back(doc_of(rr.documents, player.id));
      hist.push_back(doc_of(docs, player.id));  // includes this round
      prior.own_histories[player.id] = std::move(hist);
    }
  }

  RankedList ranked = rank_round(game.query, docs, config.ranker,
                                 config.penalties, prior,
                                 ranker_resources(services));
  RoundRecord rr;
  rr.round = round;
  rr.documents = std::move(docs);
  for (const auto& e : ranked.entries)
    rr.ranking.push_back({e.player_id, e.rank, e.score});
  rr.penalties = ranked.penalties;
  game.rounds.push_back(std::move(rr));

  if (services.log) {
    std::ostringstream line;
    line << "game " << game.query.id << " round " << round << " winner "
         << top_of(game.rounds.back().ranking).player_id;
    services.log(line.str());
  }
}

std::map<std::string, std::string> dataset_metadata(
    const CompetitionConfig& config) {
  std::map<std::string, std::string> meta;
  meta["rng_seed"] = std::to_string(config.rng_seed);
  meta["ranker"] = config.ranker.kind == RankerSpec::Kind::okapi
                       ? "okapi"
                       : "embedding_cosine";
  std::set<std::string> models;
  for (const auto& p : config.players)
    if (p.agent.kind == AgentSpec::Kind::llm && !p.agent.model.empty())
      models.insert(p.agent.model);
  std::string joined;
  for (const auto& m : models) {
    if (!joined.empty()) joined += ",";
    joined += m;
  }
  meta["models"] = joined;
  return meta;
}

void require_valid(const CompetitionConfig& config) {
  const auto violations = validate_config(config);
  if (!violations.empty()) {
    std::string msg = "invalid config:";
    for (const auto& v : violations) msg += "\n  " + v;
    throw ParameterError(msg);
  }
}

RunResult run_from(CompetitionDataset dataset, int start_round,
                   const CompetitionConfig& config,
                   const EngineServices& services, const RunControl& control) {
  const int target = config.rounds;
  const int stop = control.stop_after_round > 0
                       ? std::min(control.stop_after_round, target)
                       : target;

  auto write_cp = [&](int completed) {
    if (!control.checkpoint_path) return;
    Checkpoint cp;
    cp.completed_rounds = completed;
    cp.rng_state = config.rng_seed;
    cp.config_digest = dataset.config_digest;
    cp.partial = dataset;
    save_checkpoint(cp, *control.checkpoint_path);
  };

  for (int round = start_round; round <= stop; ++round) {
    for (auto& game : dataset.games) play_round(config, game, round, services);
    write_cp(round);
  }

  RunResult result;
  result.completed_rounds = std::max(stop, start_round - 1);
  result.completed = result.completed_rounds >= target;
  result.dataset = std::move(dataset);
  return result;
}

}  // namespace

GameRecord run_game(const CompetitionConfig& config, const QuerySetup& setup,
                    const EngineServices& services) {
  require_valid(config);
  GameRecord game = init_game(config, setup, services);
  for (int round = 1; round <= config.rounds; ++round)
    play_round(config, game, round, services);
  return game;
}

RunResult run_competition(const CompetitionConfig& config,
                          const EngineServices& services,
                          const RunControl& control) {
  require_valid(config);
  CompetitionDataset dataset;
  dataset.competition_id = config.competition_id;
  dataset.config_digest = config_digest(config);
  dataset.metadata = dataset_metadata(config);
  for (const auto& setup : config.queries)
    dataset.games.push_back(init_game(config, setup, services));
  return run_from(std::move(dataset), 1, config, services, control);
}

RunResult resume_competition(const Checkpoint& checkpoint,
                             const CompetitionConfig& config,
                             const EngineServices& services,
                             const RunControl& control) {
  require_valid(config);
  const std::string digest = config_digest(config);
  if (checkpoint.config_digest != digest)
    throw SchemaError("checkpoint digest " + checkpoint.config_digest +
                      " does not match config digest " + digest);

  CompetitionDataset dataset = checkpoint.partial;
  dataset.metadata = dataset_metadata(config);
  // re-rank round 0 when a checkpoint predates the initial ranking
  for (size_t i = 0; i < dataset.games.size(); ++i) {
    if (dataset.games[i].initial_ranking.empty() &&
        dataset.games[i].rounds.empty())
      dataset.games[i] = init_game(config, config.queries[i], services);
  }
  return run_from(std::move(dataset), checkpoint.completed_rounds + 1, config,
                  services, control);
}

}  // namespace csp
