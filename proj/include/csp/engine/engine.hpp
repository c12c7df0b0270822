#pragma once

#include <functional>
#include <optional>
#include <string>

#include "csp/agents/agents.hpp"
#include "csp/core/config.hpp"
#include "csp/core/dataset_io.hpp"
#include "csp/core/types.hpp"
#include "csp/llm/client.hpp"
#include "csp/rank/ranker.hpp"
#include "csp/text/idf.hpp"

namespace csp {

struct EngineServices {
  const BackgroundCorpus* corpus = nullptr;  // okapi scoring + term_injector
  Transport* transport = nullptr;            // llm agents / http embeddings
  PromptTemplates templates;
  int workers = 1;
  int retries = 3;
  int backoff_base_ms = 0;
  std::function<void(const std::string&)> log;  // one line per game-round
};

struct RunControl {
  // Batch boundary: stop (with a checkpoint) once this round completes
  // across all games. 0 means run to config.rounds.
  int stop_after_round = 0;
  std::optional<std::string> checkpoint_path;  // written after every round
};

struct RunResult {
  CompetitionDataset dataset;
  bool completed = true;
  int completed_rounds = 0;
};

// Runs one game. Round 0 ranks the initial documents; each later round
// snapshots per-player GameViews from strictly earlier rounds, runs all
// agent steps, then ranks the new documents.
GameRecord run_game(const CompetitionConfig& config, const QuerySetup& setup,
                    const EngineServices& services);

// All games, round-major so that a checkpoint after round r covers every
// game. Throws ParameterError when validate_config reports violations.
RunResult run_competition(const CompetitionConfig& config,
                          const EngineServices& services,
                          const RunControl& control = {});

// Continues a checkpointed run. Refuses (SchemaError) when the checkpoint
// digest does not match the config. Resuming a finished run is a no-op
// that returns the stored dataset.
RunResult resume_competition(const Checkpoint& checkpoint,
                             const CompetitionConfig& config,
                             const EngineServices& services,
                             const RunControl& control = {});

}  // namespace csp
