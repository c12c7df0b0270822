#include <doctest.h>

#include <algorithm>

#include "csp/core/config.hpp"
#include "csp/util/errors.hpp"

using namespace csp;

namespace {

CompetitionConfig valid_config() {
  CompetitionConfig c;
  c.competition_id = "comp";
  c.rounds = 3;
  c.rng_seed = 11;
  Player p1{"p1", "", {}};
  Player p2{"p2", "an seo expert", {}};
  p2.agent.kind = AgentSpec::Kind::llm;
  p2.agent.model = "m";
  c.players = {p1, p2};
  QuerySetup q;
  q.query = {"q1", "solar power"};
  q.initial_documents = {{"p1", "solar power basics"}, {"p2", "wind power"}};
  c.queries = {q};
  return c;
}

bool has_violation(const std::vector<std::string>& v, const std::string& needle) {
  return std::any_of(v.begin(), v.end(), [&](const std::string& s) {
    return s.find(needle) != std::string::npos;
  });
}

}  // namespace

TEST_CASE("a valid config has no violations") {
  CHECK(validate_config(valid_config()).empty());
}

TEST_CASE("validate_config names each violated field") {
  CompetitionConfig c = valid_config();
  c.rounds = 0;
  c.top_p = 0.0;
  c.queries[0].initial_documents.erase("p2");
  const auto v = validate_config(c);
  CHECK(has_violation(v, "rounds must be >= 1"));
  CHECK(has_violation(v, "top_p"));
  CHECK(has_violation(v, "missing initial document for player p2"));
}

TEST_CASE("duplicate ids and unknown-player docs are reported") {
  CompetitionConfig c = valid_config();
  c.players.push_back(c.players[0]);
  c.queries[0].initial_documents["ghost"] = "x";
  const auto v = validate_config(c);
  CHECK(has_violation(v, "duplicate player id: p1"));
  CHECK(has_violation(v, "unknown player ghost"));
}

TEST_CASE("digest is stable, order-insensitive to irrelevant fields") {
  const CompetitionConfig a = valid_config();
  CompetitionConfig b = valid_config();
  CHECK(config_digest(a) == config_digest(b));
  CHECK(config_digest(a).size() == 16);

  b.rng_seed = 12;
  CHECK(config_digest(a) != config_digest(b));
}

TEST_CASE("digest ignores resume_from") {
  CompetitionConfig a = valid_config();
  CompetitionConfig b = valid_config();
  b.resume_from = "/tmp/cp.jsonl";
  CHECK(config_digest(a) == config_digest(b));
}

TEST_CASE("config json round trip preserves the digest") {
  const CompetitionConfig a = valid_config();
  const CompetitionConfig b = parse_config(config_to_json(a));
  CHECK(config_digest(a) == config_digest(b));
  CHECK(b.players.size() == 2);
  CHECK(b.players[1].agent.kind == AgentSpec::Kind::llm);
  CHECK(b.queries[0].initial_documents.at("p2") == "wind power");
}

TEST_CASE("parse_config rejects malformed input with SchemaError") {
  CHECK_THROWS_AS(parse_config("{nope"), SchemaError);
  CHECK_THROWS_AS(parse_config(R"({"players":[{"agent":{"kind":"alien"}}]})"),
                  SchemaError);
  CHECK_THROWS_AS(parse_config(R"({"ranker":{"kind":"x"}})"), SchemaError);
}

TEST_CASE("parse_config applies documented defaults") {
  const CompetitionConfig c = parse_config("{}");
  CHECK(c.token_limit == 256);
  CHECK(c.temperature == doctest::Approx(0.5));
  CHECK(c.top_p == doctest::Approx(0.9));
  CHECK(c.ranker.kind == RankerSpec::Kind::okapi);
  CHECK(c.ranker.k1 == doctest::Approx(1.2));
  CHECK(c.ranker.b == doctest::Approx(0.75));
  CHECK_FALSE(c.penalties.copy.enabled);
  CHECK_FALSE(c.penalties.stagnation.enabled);
}
