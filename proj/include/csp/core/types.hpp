#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace csp {

struct Query {
  std::string id;
  std::string text;
};

enum class ScriptedKind { noop, copycat, term_injector };

enum class PromptKind { listwise, pairwise };

struct PromptVariant {
  PromptKind kind = PromptKind::listwise;
  bool no_copy_clause = false;
};

struct AgentSpec {
  enum class Kind { scripted, llm } kind = Kind::scripted;
  // scripted
  ScriptedKind script = ScriptedKind::noop;
  // llm
  std::string model;
  PromptVariant variant;
};

struct Player {
  std::string id;
  std::string persona;
  AgentSpec agent;
};

struct Document {
  std::string doc_id;  // competition_id/query_id/round/player_id
  std::string player_id;
  int round = 0;
  std::string text;
  int token_count = 0;
  bool fallback = false;  // set when an LLM agent fell back to its previous doc
};

std::string make_doc_id(const std::string& competition_id,
                        const std::string& query_id, int round,
                        const std::string& player_id);

enum class PenaltyKind { copy, stagnation };

struct RankEntry {
  std::string player_id;
  int rank = 0;  // 1..n
  double score = 0.0;
};

struct PenaltyEntry {
  std::string player_id;
  PenaltyKind kind;
};

struct RoundRecord {
  int round = 0;  // >= 1 for played rounds; 0 is used for the initial ranking
  std::vector<Document> documents;  // one per player
  std::vector<RankEntry> ranking;   // permutation of 1..n
  std::vector<PenaltyEntry> penalties;
};

struct GameRecord {
  Query query;
  std::map<std::string, Document> initial_documents;  // player_id -> round-0 doc
  std::vector<RankEntry> initial_ranking;             // ranking of the round-0 docs
  std::vector<RoundRecord> rounds;                    // rounds 1..R
};

struct CompetitionDataset {
  std::string competition_id;
  std::string config_digest;
  std::vector<GameRecord> games;
  std::map<std::string, std::string> metadata;
};

std::string penalty_kind_name(PenaltyKind k);
PenaltyKind penalty_kind_from(const std::string& s);

// Rank-1 entry of a ranking.
const RankEntry& top_of(const std::vector<RankEntry>& ranking);

// Document of a given player within a document list.
const Document& doc_of(const std::vector<Document>& docs,
                       const std::string& player_id);

}  // namespace csp
