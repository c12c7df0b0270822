#include <doctest.h>

#include <cmath>

#include "csp/rank/ranker.hpp"
#include "csp/text/features.hpp"
#include "csp/util/errors.hpp"

using namespace csp;

namespace {

Document doc(const std::string& pid, const std::string& text, int round = 1) {
  Document d;
  d.player_id = pid;
  d.round = round;
  d.text = text;
  d.doc_id = make_doc_id("c", "q", round, pid);
  return d;
}

BackgroundCorpus small_corpus() {
  CorpusBuilder b;
  b.add_text("cats are small animals");
  b.add_text("dogs are loyal animals");
  b.add_text("birds can fly");
  return b.build();
}

}  // namespace

TEST_CASE("okapi scores equal a direct bm25 computation") {
  const BackgroundCorpus corpus = small_corpus();
  RankerResources res;
  res.corpus = &corpus;
  const Query q{"q", "cats animals"};
  const std::vector<Document> docs = {doc("p1", "cats and more cats"),
                                      doc("p2", "dogs are animals")};
  RankerSpec spec;  // okapi, k1=1.2, b=0.75
  const auto scores = score_documents(q, docs, spec, res);
  for (const auto& d : docs) {
    const double expected =
        bm25_score(tokenize(q.text), tokenize(d.text), corpus.idf, spec.k1,
                   spec.b, corpus.avg_dl);
    CHECK(scores.at(d.player_id) == doctest::Approx(expected).epsilon(1e-12));
  }
}

TEST_CASE("okapi without a corpus is a parameter error") {
  RankerSpec spec;
  CHECK_THROWS_AS(
      score_documents({"q", "x"}, {doc("p1", "x")}, spec, RankerResources{}),
      ParameterError);
}

TEST_CASE("mock embedding ranker is deterministic and self-similar") {
  RankerSpec spec;
  spec.kind = RankerSpec::Kind::embedding_cosine;
  const Query q{"q", "cats"};
  const std::vector<Document> docs = {doc("p1", "cats"), doc("p2", "dogs")};
  const auto a = score_documents(q, docs, spec, RankerResources{});
  const auto b = score_documents(q, docs, spec, RankerResources{});
  CHECK(a == b);
  // the document equal to the query text has cosine exactly 1
  CHECK(a.at("p1") == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(a.at("p2") < 1.0);
}

TEST_CASE("detect_copy: exact normalized match and threshold match") {
  IdfTable idf;
  idf.doc_count = 10;
  const Document d = doc("p1", "The cat, sat!");
  const std::vector<Document> pool = {doc("p2", "dogs bark"),
                                      doc("p3", "the cat sat")};
  auto hit = detect_copy(d, pool, 1.0, idf);
  REQUIRE(hit.has_value());
  CHECK(*hit == pool[1].doc_id);

  // below-threshold similarity is not a copy
  CHECK_FALSE(detect_copy(doc("p1", "cat dog"), {doc("p2", "cat bird")}, 1.0,
                          idf));
  // but a lowered threshold catches partial overlap
  CHECK(detect_copy(doc("p1", "cat dog"), {doc("p2", "cat dog bird")}, 0.5,
                    idf));
}

TEST_CASE("detect_copy returns the first offender in pool order") {
  IdfTable idf;
  idf.doc_count = 10;
  const std::vector<Document> pool = {doc("p2", "same text"),
                                      doc("p3", "same text")};
  const auto hit = detect_copy(doc("p1", "same text"), pool, 1.0, idf);
  REQUIRE(hit.has_value());
  CHECK(*hit == pool[0].doc_id);
}

TEST_CASE("detect_stagnation needs k+1 identical trailing docs") {
  const auto h = [&](std::initializer_list<const char*> texts) {
    std::vector<Document> out;
    int r = 0;
    for (const char* t : texts) out.push_back(doc("p", t, r++));
    return out;
  };
  CHECK(detect_stagnation(h({"x", "x", "x", "x"}), 3));
  CHECK_FALSE(detect_stagnation(h({"a", "x", "x", "x"}), 3));
  CHECK_FALSE(detect_stagnation(h({"x", "x", "a", "x"}), 3));
  CHECK_FALSE(detect_stagnation(h({"x", "x", "x"}), 3));  // too short
  // normalized comparison: punctuation changes do not reset the clock
  CHECK(detect_stagnation(h({"x!", "x", "X."}), 2));
  CHECK_THROWS_AS(detect_stagnation({}, 0), ParameterError);
}

TEST_CASE("rank_round orders by score with prev-rank then id tie-breaks") {
  const BackgroundCorpus corpus = small_corpus();
  RankerResources res;
  res.corpus = &corpus;
  const Query q{"q", "zzz"};  // no doc matches: all scores 0
  const std::vector<Document> docs = {doc("pb", "alpha"), doc("pa", "beta"),
                                      doc("pc", "gamma")};
  PriorRoundInfo prior;
  prior.previous_ranking = {{"pc", 1, 0}, {"pb", 2, 0}, {"pa", 3, 0}};
  const RankedList ranked =
      rank_round(q, docs, RankerSpec{}, PenaltySpec{}, prior, res);
  REQUIRE(ranked.entries.size() == 3);
  CHECK(ranked.entries[0].player_id == "pc");
  CHECK(ranked.entries[1].player_id == "pb");
  CHECK(ranked.entries[2].player_id == "pa");
  for (int i = 0; i < 3; ++i) CHECK(ranked.entries[i].rank == i + 1);

  // without a previous ranking the id breaks the tie
  const RankedList fresh =
      rank_round(q, docs, RankerSpec{}, PenaltySpec{}, PriorRoundInfo{}, res);
  CHECK(fresh.entries[0].player_id == "pa");
  CHECK(fresh.entries[1].player_id == "pb");
  CHECK(fresh.entries[2].player_id == "pc");
}

TEST_CASE("penalized documents sink to the bottom keeping relative order") {
  const BackgroundCorpus corpus = small_corpus();
  RankerResources res;
  res.corpus = &corpus;
  const Query q{"q", "cats"};
  const std::vector<Document> docs = {doc("p1", "cats cats cats"),
                                      doc("p2", "cats cats cats"),
                                      doc("p3", "dogs")};
  PenaltySpec penalties;
  penalties.copy.enabled = true;
  penalties.copy.similarity_threshold = 1.0;
  PriorRoundInfo prior;
  // p1 copied p2's previous-round doc (and vice versa); p3 is clean
  prior.copy_pools["p1"] = {doc("p2", "cats cats cats", 0)};
  prior.copy_pools["p2"] = {doc("p1", "something else", 0)};
  prior.copy_pools["p3"] = {doc("p1", "something else", 0)};
  const RankedList ranked =
      rank_round(q, docs, RankerSpec{}, penalties, prior, res);
  REQUIRE(ranked.penalties.size() == 1);
  CHECK(ranked.penalties[0].player_id == "p1");
  CHECK(ranked.penalties[0].kind == PenaltyKind::copy);
  // p1 outranks p3 on score but is demoted below it
  CHECK(ranked.entries.back().player_id == "p1");
  CHECK(ranked.entries.back().rank == 3);
}

TEST_CASE("stagnation penalty applies through rank_round") {
  const BackgroundCorpus corpus = small_corpus();
  RankerResources res;
  res.corpus = &corpus;
  const Query q{"q", "cats"};
  const std::vector<Document> docs = {doc("p1", "cats"), doc("p2", "dogs")};
  PenaltySpec penalties;
  penalties.stagnation.enabled = true;
  penalties.stagnation.max_unchanged_rounds = 2;
  PriorRoundInfo prior;
  prior.own_histories["p1"] = {doc("p1", "cats", 0), doc("p1", "cats", 1),
                               doc("p1", "cats", 2)};
  prior.own_histories["p2"] = {doc("p2", "x", 0), doc("p2", "y", 1),
                               doc("p2", "dogs", 2)};
  const RankedList ranked =
      rank_round(q, docs, RankerSpec{}, penalties, prior, res);
  REQUIRE(ranked.penalties.size() == 1);
  CHECK(ranked.penalties[0].player_id == "p1");
  CHECK(ranked.penalties[0].kind == PenaltyKind::stagnation);
  CHECK(ranked.entries[0].player_id == "p2");
}
