#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "csp/core/types.hpp"
#include "csp/llm/client.hpp"
#include "csp/rank/spec.hpp"
#include "csp/text/idf.hpp"

namespace csp {

struct RankedEntry {
  std::string player_id;
  double score = 0.0;
  int rank = 0;
  bool penalized = false;
};

struct RankedList {
  std::vector<RankedEntry> entries;  // rank == position + 1
  std::vector<PenaltyEntry> penalties;
};

// Resources the scoring back ends need. `transport` is only required for
// embedding_cosine with provider "http"; the mock provider is built in.
struct RankerResources {
  const BackgroundCorpus* corpus = nullptr;  // okapi
  Transport* transport = nullptr;            // embedding provider binding
  size_t mock_embed_dim = 64;
};

std::map<std::string, double> score_documents(const Query& query,
                                              const std::vector<Document>& docs,
                                              const RankerSpec& ranker,
                                              const RankerResources& res);

// First pool document (ascending rank, then player_id) whose normalized
// text equals doc's or whose TF.IDF cosine reaches the threshold. The
// pool must already exclude the author's own documents.
std::optional<std::string> detect_copy(const Document& doc,
                                       const std::vector<Document>& pool,
                                       double threshold, const IdfTable& idf);

// True iff the last k+1 documents of the (round-ordered) history have
// identical normalized text.
bool detect_stagnation(const std::vector<Document>& history, int k);

// Previous ranking used for tie-breaking; empty for the first ranking.
struct PriorRoundInfo {
  std::vector<RankEntry> previous_ranking;
  // Per player: docs visible to copy detection (others' current +
  // previous round) and the player's full own history for stagnation.
  std::map<std::string, std::vector<Document>> copy_pools;
  std::map<std::string, std::vector<Document>> own_histories;
};

// Scores, applies penalties, and sorts: non-penalized by score desc with
// ties broken by previous rank then player_id; penalized entries take the
// bottom positions keeping their relative order.
RankedList rank_round(const Query& query, const std::vector<Document>& docs,
                      const RankerSpec& ranker, const PenaltySpec& penalties,
                      const PriorRoundInfo& prior, const RankerResources& res);

}  // namespace csp
