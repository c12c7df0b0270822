#pragma once

#include <string>

namespace csp {

struct RankerSpec {
  enum class Kind { okapi, embedding_cosine } kind = Kind::okapi;
  // okapi
  double k1 = 1.2;
  double b = 0.75;
  // embedding_cosine
  std::string provider = "mock";  // "mock" or "http"
};

struct CopyPenalty {
  bool enabled = false;
  double similarity_threshold = 1.0;  // exact match only by default
};

struct StagnationPenalty {
  bool enabled = false;
  int max_unchanged_rounds = 3;
};

struct PenaltySpec {
  CopyPenalty copy;
  StagnationPenalty stagnation;
};

}  // namespace csp
