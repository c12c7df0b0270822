#include "csp/core/dataset_io.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>

#include <json.hpp>

#include "csp/text/tokenize.hpp"
#include "csp/util/errors.hpp"

namespace csp {

using nlohmann::json;

namespace {

json record_json(const CompetitionDataset& ds, const GameRecord& game,
                 int round, const Document& doc, const RankEntry* rank,
                 const std::string& penalty) {
  json j;
  j["competition_id"] = ds.competition_id;
  j["query_id"] = game.query.id;
  j["query_text"] = game.query.text;
  j["round"] = round;
  j["player_id"] = doc.player_id;
  j["doc_id"] = doc.doc_id;
  j["text"] = doc.text;
  j["fallback"] = doc.fallback;
  if (rank) {
    j["rank"] = rank->rank;
    j["score"] = rank->score;
  } else {
    j["rank"] = nullptr;
    j["score"] = nullptr;
  }
  j["penalty"] = penalty;
  return j;
}

const RankEntry* find_rank(const std::vector<RankEntry>& ranking,
                           const std::string& player_id) {
  for (const auto& e : ranking)
    if (e.player_id == player_id) return &e;
  return nullptr;
}

std::string penalty_of(const RoundRecord& rr, const std::string& player_id) {
  for (const auto& p : rr.penalties)
    if (p.player_id == player_id) return penalty_kind_name(p.kind);
  return "";
}

void write_records(const CompetitionDataset& ds, std::ostream& out) {
  for (const auto& game : ds.games) {
    // round 0: initial documents in player-id order (map order)
    for (const auto& [pid, doc] : game.initial_documents) {
      const RankEntry* re = find_rank(game.initial_ranking, pid);
      out << record_json(ds, game, 0, doc, re, "").dump() << "\n";
    }
    for (const auto& rr : game.rounds) {
      for (const auto& doc : rr.documents) {
        const RankEntry* re = find_rank(rr.ranking, doc.player_id);
        out << record_json(ds, game, rr.round, doc, re, penalty_of(rr, doc.player_id))
                   .dump()
            << "\n";
      }
    }
  }
}

json header_json(const CompetitionDataset& ds, const char* type) {
  json j;
  j["type"] = type;
  j["version"] = kDatasetFormatVersion;
  j["competition_id"] = ds.competition_id;
  j["config_digest"] = ds.config_digest;
  json meta = json::object();
  for (const auto& [k, v] : ds.metadata) meta[k] = v;
  j["metadata"] = meta;
  return j;
}

struct RawRecord {
  int line = 0;
  json j;
};

void validate_game(const GameRecord& game, int n_players) {
  std::set<std::string> players;
  for (const auto& [pid, _] : game.initial_documents) players.insert(pid);
  if (static_cast<int>(players.size()) != n_players)
    throw SchemaError("game " + game.query.id +
                      ": inconsistent player set at round 0");
  int expected_round = 1;
  for (const auto& rr : game.rounds) {
    if (rr.round != expected_round++)
      throw SchemaError("game " + game.query.id +
                        ": rounds must be numbered consecutively from 1");
    std::set<std::string> round_players;
    std::set<int> ranks;
    for (const auto& d : rr.documents)
      if (!round_players.insert(d.player_id).second)
        throw SchemaError("game " + game.query.id + " round " +
                          std::to_string(rr.round) +
                          ": more than one document for player " + d.player_id);
    if (round_players != players)
      throw SchemaError("game " + game.query.id + " round " +
                        std::to_string(rr.round) + ": player set differs");
    for (const auto& e : rr.ranking) {
      if (e.rank < 1 || e.rank > static_cast<int>(rr.documents.size()) ||
          !ranks.insert(e.rank).second)
        throw SchemaError("game " + game.query.id + " round " +
                          std::to_string(rr.round) +
                          ": ranks must be a permutation of 1..n");
      if (!round_players.count(e.player_id))
        throw SchemaError("game " + game.query.id + " round " +
                          std::to_string(rr.round) +
                          ": ranked player " + e.player_id +
                          " has no document");
    }
    if (rr.ranking.size() != rr.documents.size())
      throw SchemaError("game " + game.query.id + " round " +
                        std::to_string(rr.round) +
                        ": ranks must be a permutation of 1..n");
  }
}

}  // namespace

void save_dataset(const CompetitionDataset& ds, std::ostream& sink) {
  sink << header_json(ds, "dataset").dump() << "\n";
  write_records(ds, sink);
}

std::string dataset_to_string(const CompetitionDataset& ds) {
  std::ostringstream out;
  save_dataset(ds, out);
  return out.str();
}

void save_dataset_file(const CompetitionDataset& ds, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParameterError("cannot open for writing: " + path);
  save_dataset(ds, out);
}

namespace {

CompetitionDataset load_records(std::istream& source, const char* expect_type,
                                json* header_out) {
  CompetitionDataset ds;
  std::string line;
  int line_no = 0;
  bool saw_header = false;
  // query_id -> index into ds.games, in first-appearance order
  std::map<std::string, size_t> game_index;

  while (std::getline(source, line)) {
    ++line_no;
    if (line.empty()) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::exception& e) {
      throw SchemaError("line " + std::to_string(line_no) +
                        ": invalid JSON record: " + e.what());
    }
    if (!saw_header) {
      if (!j.contains("type"))
        throw SchemaError("line 1: missing header record");
      const std::string type = j["type"];
      if (type != expect_type)
        throw SchemaError("line 1: expected a " + std::string(expect_type) +
                          " header, got " + type);
      const int version = j.value("version", -1);
      if (version != kDatasetFormatVersion)
        throw VersionError("unsupported dataset format version " +
                           std::to_string(version) + " (expected " +
                           std::to_string(kDatasetFormatVersion) + ")");
      ds.competition_id = j.value("competition_id", "");
      ds.config_digest = j.value("config_digest", "");
      const json meta = j.value("metadata", json::object());
      for (const auto& [k, v] : meta.items()) ds.metadata[k] = v.get<std::string>();
      if (header_out) *header_out = j;
      saw_header = true;
      continue;
    }
    try {
      const std::string query_id = j.at("query_id");
      auto [it, inserted] = game_index.try_emplace(query_id, ds.games.size());
      if (inserted) {
        GameRecord g;
        g.query.id = query_id;
        g.query.text = j.value("query_text", "");
        ds.games.push_back(std::move(g));
      }
      GameRecord& game = ds.games[it->second];

      Document doc;
      doc.player_id = j.at("player_id");
      doc.round = j.at("round");
      doc.text = j.at("text");
      doc.doc_id = j.value("doc_id", "");
      doc.fallback = j.value("fallback", false);
      doc.token_count = static_cast<int>(tokenize(doc.text).size());

      const bool has_rank = j.contains("rank") && !j["rank"].is_null();
      RankEntry re;
      if (has_rank) {
        re.player_id = doc.player_id;
        re.rank = j["rank"].get<int>();
        re.score = j.contains("score") && !j["score"].is_null()
                       ? j["score"].get<double>()
                       : 0.0;
        if (re.rank < 1)
          throw SchemaError("line " + std::to_string(line_no) +
                            ": ranks must be a permutation of 1..n");
      }

      if (doc.round == 0) {
        game.initial_documents[doc.player_id] = doc;
        if (has_rank) game.initial_ranking.push_back(re);
      } else {
        if (game.rounds.empty() || game.rounds.back().round != doc.round) {
          RoundRecord rr;
          rr.round = doc.round;
          game.rounds.push_back(std::move(rr));
        }
        RoundRecord& rr = game.rounds.back();
        rr.documents.push_back(doc);
        if (!has_rank)
          throw SchemaError("line " + std::to_string(line_no) +
                            ": round >= 1 record without a rank");
        rr.ranking.push_back(re);
        const std::string pen = j.value("penalty", "");
        if (!pen.empty())
          rr.penalties.push_back({doc.player_id, penalty_kind_from(pen)});
      }
    } catch (const json::exception& e) {
      throw SchemaError("line " + std::to_string(line_no) +
                        ": malformed record: " + e.what());
    }
  }
  if (!saw_header) throw SchemaError("empty input: missing header record");

  // cross-game invariants
  std::optional<size_t> n_rounds;
  std::optional<size_t> n_players;
  for (const auto& game : ds.games) {
    if (!n_players) n_players = game.initial_documents.size();
    validate_game(game, static_cast<int>(*n_players));
    if (!n_rounds) n_rounds = game.rounds.size();
    if (game.rounds.size() != *n_rounds)
      throw SchemaError("game " + game.query.id +
                        ": round count differs from other games");
  }
  return ds;
}

}  // namespace

CompetitionDataset load_dataset(std::istream& source) {
  return load_records(source, "dataset", nullptr);
}

CompetitionDataset load_dataset_string(const std::string& text) {
  std::istringstream in(text);
  return load_dataset(in);
}

CompetitionDataset load_dataset_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParameterError("cannot open dataset file: " + path);
  return load_dataset(in);
}

void save_checkpoint(const Checkpoint& cp, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParameterError("cannot open for writing: " + path);
  json h = header_json(cp.partial, "checkpoint");
  h["completed_rounds"] = cp.completed_rounds;
  h["rng_state"] = cp.rng_state;
  h["config_digest"] = cp.config_digest;
  out << h.dump() << "\n";
  write_records(cp.partial, out);
}

Checkpoint load_checkpoint(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParameterError("cannot open checkpoint file: " + path);
  Checkpoint cp;
  json header;
  cp.partial = load_records(in, "checkpoint", &header);
  cp.completed_rounds = header.value("completed_rounds", 0);
  cp.rng_state = header.value("rng_state", uint64_t{0});
  cp.config_digest = header.value("config_digest", "");
  return cp;
}

}  // namespace csp
