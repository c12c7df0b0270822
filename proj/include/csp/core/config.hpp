#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "csp/core/types.hpp"
#include "csp/rank/spec.hpp"

namespace csp {

struct QuerySetup {
  Query query;
  std::map<std::string, std::string> initial_documents;  // player_id -> text
};

struct CompetitionConfig {
  std::string competition_id = "competition";
  std::vector<QuerySetup> queries;
  std::vector<Player> players;
  int rounds = 1;
  RankerSpec ranker;
  PenaltySpec penalties;
  uint64_t rng_seed = 0;
  int token_limit = 256;
  double temperature = 0.5;
  double top_p = 0.9;
  // whether a pairwise prompt may sample the agent's own document
  bool pairwise_allow_own = true;
  std::optional<std::string> resume_from;
};

// Empty iff every type invariant holds; each violation names the field.
std::vector<std::string> validate_config(const CompetitionConfig& config);

// Stable hash over everything that defines the competition. resume_from is
// excluded: a resumed run must produce the same digest as the original.
std::string config_digest(const CompetitionConfig& config);

CompetitionConfig parse_config(const std::string& json_text);
CompetitionConfig load_config_file(const std::string& path);
std::string config_to_json(const CompetitionConfig& config);

}  // namespace csp
