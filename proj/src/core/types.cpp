#include "csp/core/types.hpp"

#include <algorithm>

#include "csp/util/errors.hpp"

namespace csp {

std::string make_doc_id(const std::string& competition_id,
                        const std::string& query_id, int round,
                        const std::string& player_id) {
  return competition_id + "/" + query_id + "/" + std::to_string(round) + "/" +
         player_id;
}

std::string penalty_kind_name(PenaltyKind k) {
  switch (k) {
    case PenaltyKind::copy:
      return "copy";
    case PenaltyKind::stagnation:
      return "stagnation";
  }
  return "unknown";
}

PenaltyKind penalty_kind_from(const std::string& s) {
  if (s == "copy") return PenaltyKind::copy;
  if (s == "stagnation") return PenaltyKind::stagnation;
  throw SchemaError("unknown penalty kind: " + s);
}

const RankEntry& top_of(const std::vector<RankEntry>& ranking) {
  auto it = std::find_if(ranking.begin(), ranking.end(),
                         [](const RankEntry& e) { return e.rank == 1; });
  if (it == ranking.end()) throw SchemaError("ranking has no rank-1 entry");
  return *it;
}

const Document& doc_of(const std::vector<Document>& docs,
                       const std::string& player_id) {
  auto it = std::find_if(docs.begin(), docs.end(), [&](const Document& d) {
    return d.player_id == player_id;
  });
  if (it == docs.end())
    throw SchemaError("no document for player " + player_id);
  return *it;
}

}  // namespace csp
