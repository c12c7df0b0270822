#include "csp/core/config.hpp"

#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "csp/text/tokenize.hpp"
#include "csp/util/errors.hpp"
#include "csp/util/rng.hpp"

namespace csp {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

json agent_to_json(const AgentSpec& a) {
  json j;
  if (a.kind == AgentSpec::Kind::scripted) {
    j["kind"] = "scripted";
    switch (a.script) {
      case ScriptedKind::noop: j["script"] = "noop"; break;
      case ScriptedKind::copycat: j["script"] = "copycat"; break;
      case ScriptedKind::term_injector: j["script"] = "term_injector"; break;
    }
  } else {
    j["kind"] = "llm";
    j["model"] = a.model;
    j["prompt_variant"] =
        a.variant.kind == PromptKind::listwise ? "listwise" : "pairwise";
    j["no_copy"] = a.variant.no_copy_clause;
  }
  return j;
}

AgentSpec agent_from_json(const json& j) {
  AgentSpec a;
  std::string kind = j.value("kind", "scripted");
  if (kind == "scripted") {
    a.kind = AgentSpec::Kind::scripted;
    std::string s = j.value("script", "noop");
    if (s == "noop") a.script = ScriptedKind::noop;
    else if (s == "copycat") a.script = ScriptedKind::copycat;
    else if (s == "term_injector") a.script = ScriptedKind::term_injector;
    else throw SchemaError("unknown scripted agent: " + s);
  } else if (kind == "llm") {
    a.kind = AgentSpec::Kind::llm;
    a.model = j.value("model", "");
    std::string v = j.value("prompt_variant", "listwise");
    if (v == "listwise") a.variant.kind = PromptKind::listwise;
    else if (v == "pairwise") a.variant.kind = PromptKind::pairwise;
    else throw SchemaError("unknown prompt_variant: " + v);
    a.variant.no_copy_clause = j.value("no_copy", false);
  } else {
    throw SchemaError("unknown agent kind: " + kind);
  }
  return a;
}

json ranker_to_json(const RankerSpec& r) {
  json j;
  if (r.kind == RankerSpec::Kind::okapi) {
    j["kind"] = "okapi";
    j["k1"] = r.k1;
    j["b"] = r.b;
  } else {
    j["kind"] = "embedding_cosine";
    j["provider"] = r.provider;
  }
  return j;
}

RankerSpec ranker_from_json(const json& j) {
  RankerSpec r;
  std::string kind = j.value("kind", "okapi");
  if (kind == "okapi") {
    r.kind = RankerSpec::Kind::okapi;
    r.k1 = j.value("k1", 1.2);
    r.b = j.value("b", 0.75);
  } else if (kind == "embedding_cosine") {
    r.kind = RankerSpec::Kind::embedding_cosine;
    r.provider = j.value("provider", "mock");
  } else {
    throw SchemaError("unknown ranker kind: " + kind);
  }
  return r;
}

json penalties_to_json(const PenaltySpec& p) {
  return json{
      {"copy",
       {{"enabled", p.copy.enabled},
        {"similarity_threshold", p.copy.similarity_threshold}}},
      {"stagnation",
       {{"enabled", p.stagnation.enabled},
        {"max_unchanged_rounds", p.stagnation.max_unchanged_rounds}}}};
}

PenaltySpec penalties_from_json(const json& j) {
  PenaltySpec p;
  if (j.contains("copy")) {
    p.copy.enabled = j["copy"].value("enabled", false);
    p.copy.similarity_threshold = j["copy"].value("similarity_threshold", 1.0);
  }
  if (j.contains("stagnation")) {
    p.stagnation.enabled = j["stagnation"].value("enabled", false);
    p.stagnation.max_unchanged_rounds =
        j["stagnation"].value("max_unchanged_rounds", 3);
  }
  return p;
}

// Everything that defines the competition; resume_from excluded.
json config_core_json(const CompetitionConfig& c) {
  json j;
  j["competition_id"] = c.competition_id;
  j["rounds"] = c.rounds;
  j["token_limit"] = c.token_limit;
  j["temperature"] = c.temperature;
  j["top_p"] = c.top_p;
  j["pairwise_allow_own"] = c.pairwise_allow_own;
  j["rng_seed"] = c.rng_seed;
  j["ranker"] = ranker_to_json(c.ranker);
  j["penalties"] = penalties_to_json(c.penalties);
  j["players"] = json::array();
  for (const auto& p : c.players) {
    j["players"].push_back(
        {{"id", p.id}, {"persona", p.persona}, {"agent", agent_to_json(p.agent)}});
  }
  j["queries"] = json::array();
  for (const auto& q : c.queries) {
    json docs = json::object();
    for (const auto& [pid, text] : q.initial_documents) docs[pid] = text;
    j["queries"].push_back({{"id", q.query.id},
                            {"text", q.query.text},
                            {"initial_documents", docs}});
  }
  return j;
}

}  // namespace

std::vector<std::string> validate_config(const CompetitionConfig& c) {
  std::vector<std::string> out;
  if (c.competition_id.empty()) out.push_back("competition_id must be non-empty");
  if (c.rounds < 1) out.push_back("rounds must be >= 1");
  if (c.token_limit < 1) out.push_back("token_limit must be >= 1");
  if (c.temperature < 0) out.push_back("temperature must be >= 0");
  if (!(c.top_p > 0 && c.top_p <= 1)) out.push_back("top_p must be in (0, 1]");
  if (c.players.empty()) out.push_back("players must be non-empty");
  if (c.queries.empty()) out.push_back("queries must be non-empty");
  if (c.penalties.copy.similarity_threshold < 0 ||
      c.penalties.copy.similarity_threshold > 1)
    out.push_back("penalties.copy.similarity_threshold must be in [0, 1]");
  if (c.penalties.stagnation.max_unchanged_rounds < 1)
    out.push_back("penalties.stagnation.max_unchanged_rounds must be >= 1");
  if (c.ranker.kind == RankerSpec::Kind::okapi) {
    if (c.ranker.k1 < 0) out.push_back("ranker.k1 must be >= 0");
    if (c.ranker.b < 0 || c.ranker.b > 1)
      out.push_back("ranker.b must be in [0, 1]");
  }

  std::set<std::string> player_ids;
  for (const auto& p : c.players) {
    if (p.id.empty()) out.push_back("player id must be non-empty");
    if (!player_ids.insert(p.id).second)
      out.push_back("duplicate player id: " + p.id);
  }
  std::set<std::string> query_ids;
  for (const auto& q : c.queries) {
    if (q.query.id.empty()) out.push_back("query id must be non-empty");
    if (!query_ids.insert(q.query.id).second)
      out.push_back("duplicate query id: " + q.query.id);
    if (tokenize(q.query.text).empty())
      out.push_back("query " + q.query.id + ": text must be non-empty");
    for (const auto& p : c.players) {
      if (!q.initial_documents.count(p.id))
        out.push_back("query " + q.query.id +
                      ": missing initial document for player " + p.id);
    }
    for (const auto& [pid, _] : q.initial_documents) {
      if (!player_ids.count(pid))
        out.push_back("query " + q.query.id +
                      ": initial document for unknown player " + pid);
    }
  }
  return out;
}

std::string config_digest(const CompetitionConfig& c) {
  const std::string canon = config_core_json(c).dump();
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(fnv1a64(canon)));
  return buf;
}

std::string config_to_json(const CompetitionConfig& c) {
  json j = config_core_json(c);
  if (c.resume_from) j["resume_from"] = *c.resume_from;
  return j.dump(2) + "\n";
}

CompetitionConfig parse_config(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    throw SchemaError(std::string("config is not valid JSON: ") + e.what());
  }
  CompetitionConfig c;
  try {
    c.competition_id = j.value("competition_id", "competition");
    c.rounds = j.value("rounds", 1);
    c.token_limit = j.value("token_limit", 256);
    c.temperature = j.value("temperature", 0.5);
    c.top_p = j.value("top_p", 0.9);
    c.rng_seed = j.value("rng_seed", uint64_t{0});
    c.pairwise_allow_own = j.value("pairwise_allow_own", true);
    if (j.contains("ranker")) c.ranker = ranker_from_json(j["ranker"]);
    if (j.contains("penalties")) c.penalties = penalties_from_json(j["penalties"]);
    if (j.contains("resume_from") && !j["resume_from"].is_null())
      c.resume_from = j["resume_from"].get<std::string>();
    for (const auto& pj : j.value("players", json::array())) {
      Player p;
      p.id = pj.value("id", "");
      p.persona = pj.value("persona", "");
      if (pj.contains("agent")) p.agent = agent_from_json(pj["agent"]);
      c.players.push_back(std::move(p));
    }
    for (const auto& qj : j.value("queries", json::array())) {
      QuerySetup s;
      s.query.id = qj.value("id", "");
      s.query.text = qj.value("text", "");
      const json docs = qj.value("initial_documents", json::object());
      for (const auto& [pid, text] : docs.items())
        s.initial_documents[pid] = text.get<std::string>();
      c.queries.push_back(std::move(s));
    }
  } catch (const json::exception& e) {
    throw SchemaError(std::string("malformed config: ") + e.what());
  }
  return c;
}

CompetitionConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParameterError("cannot open config file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

}  // namespace csp
