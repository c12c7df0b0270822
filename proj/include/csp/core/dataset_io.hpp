#pragma once

#include <iosfwd>
#include <string>

#include "csp/core/types.hpp"

namespace csp {

inline constexpr int kDatasetFormatVersion = 1;

// JSON Lines, canonical (sorted keys, UTF-8, "\n"): a header record
// followed by one record per (game, round, player), games in dataset
// order, rounds ascending from 0, players in round order. Equal datasets
// serialize to identical bytes.
void save_dataset(const CompetitionDataset& dataset, std::ostream& sink);
std::string dataset_to_string(const CompetitionDataset& dataset);
void save_dataset_file(const CompetitionDataset& dataset,
                       const std::string& path);

// Validates structural invariants (rank permutations, one doc per player,
// consistent player sets) and throws SchemaError naming the line on
// malformed input, VersionError on a version mismatch.
CompetitionDataset load_dataset(std::istream& source);
CompetitionDataset load_dataset_string(const std::string& text);
CompetitionDataset load_dataset_file(const std::string& path);

struct Checkpoint {
  int completed_rounds = 0;
  uint64_t rng_state = 0;  // master seed; streams are re-derived, not replayed
  std::string config_digest;
  CompetitionDataset partial;
};

void save_checkpoint(const Checkpoint& cp, const std::string& path);
Checkpoint load_checkpoint(const std::string& path);

}  // namespace csp
