#include "csp/rank/ranker.hpp"

#include <algorithm>

#include "csp/simd/vecops.hpp"
#include "csp/text/features.hpp"
#include "csp/text/tfidf.hpp"
#include "csp/util/errors.hpp"

namespace csp {

std::map<std::string, double> score_documents(const Query& query,
                                              const std::vector<Document>& docs,
                                              const RankerSpec& ranker,
                                              const RankerResources& res) {
  if (docs.empty()) throw ParameterError("score_documents: no documents");
  std::map<std::string, double> scores;
  if (ranker.kind == RankerSpec::Kind::okapi) {
    if (!res.corpus)
      throw ParameterError("okapi ranker requires a background corpus");
    const TokenStream q = tokenize(query.text);
    for (const auto& d : docs) {
      scores[d.player_id] = bm25_score(q, tokenize(d.text), res.corpus->idf,
                                       ranker.k1, ranker.b, res.corpus->avg_dl);
    }
    return scores;
  }

  // embedding_cosine: one batched call for [query, doc_1..doc_n]
  std::vector<std::string> texts;
  texts.reserve(docs.size() + 1);
  texts.push_back(query.text);
  for (const auto& d : docs) texts.push_back(d.text);

  std::vector<std::vector<double>> vecs;
  if (ranker.provider == "mock" || !res.transport) {
    vecs.reserve(texts.size());
    for (const auto& t : texts)
      vecs.push_back(mock_embedding(t, res.mock_embed_dim));
  } else {
    try {
      vecs = res.transport->embed(texts);
    } catch (TransportError& e) {
      throw TransportError(std::string("embedding provider failed: ") +
                               e.what(),
                           e.retryable);
    }
  }
  const auto& qv = vecs.front();
  for (size_t i = 0; i < docs.size(); ++i)
    scores[docs[i].player_id] = vecops::cosine_dense(qv, vecs[i + 1]);
  return scores;
}

std::optional<std::string> detect_copy(const Document& doc,
                                       const std::vector<Document>& pool,
                                       double threshold, const IdfTable& idf) {
  const std::string norm = normalize_text(doc.text);
  for (const auto& other : pool) {
    if (normalize_text(other.text) == norm) return other.doc_id;
    if (text_similarity(doc.text, other.text, idf) >= threshold)
      return other.doc_id;
  }
  return std::nullopt;
}

bool detect_stagnation(const std::vector<Document>& history, int k) {
  if (k < 1) throw ParameterError("detect_stagnation: k must be >= 1");
  if (static_cast<int>(history.size()) < k + 1) return false;
  const std::string last = normalize_text(history.back().text);
  for (int i = 2; i <= k + 1; ++i) {
    if (normalize_text(history[history.size() - i].text) != last) return false;
  }
  return true;
}

RankedList rank_round(const Query& query, const std::vector<Document>& docs,
                      const RankerSpec& ranker, const PenaltySpec& penalties,
                      const PriorRoundInfo& prior, const RankerResources& res) {
  const auto scores = score_documents(query, docs, ranker, res);

  RankedList out;
  std::map<std::string, int> prev_rank;
  for (const auto& e : prior.previous_ranking) prev_rank[e.player_id] = e.rank;

  for (const auto& d : docs) {
    RankedEntry e;
    e.player_id = d.player_id;
    e.score = scores.at(d.player_id);
    out.entries.push_back(e);
  }

  if (penalties.copy.enabled) {
    for (const auto& d : docs) {
      auto it = prior.copy_pools.find(d.player_id);
      if (it == prior.copy_pools.end()) continue;
      const IdfTable* idf = res.corpus ? &res.corpus->idf : nullptr;
      static const IdfTable kEmptyIdf;
      auto offender = detect_copy(d, it->second,
                                  penalties.copy.similarity_threshold,
                                  idf ? *idf : kEmptyIdf);
      if (offender) {
        for (auto& e : out.entries)
          if (e.player_id == d.player_id) e.penalized = true;
        out.penalties.push_back({d.player_id, PenaltyKind::copy});
      }
    }
  }
  if (penalties.stagnation.enabled) {
    for (const auto& d : docs) {
      auto it = prior.own_histories.find(d.player_id);
      if (it == prior.own_histories.end()) continue;
      if (detect_stagnation(it->second, penalties.stagnation.max_unchanged_rounds)) {
        bool already = false;
        for (auto& e : out.entries)
          if (e.player_id == d.player_id) {
            already = e.penalized;
            e.penalized = true;
          }
        if (!already)
          out.penalties.push_back({d.player_id, PenaltyKind::stagnation});
      }
    }
  }

  auto order = [&](const RankedEntry& a, const RankedEntry& b) {
    if (a.score != b.score) return a.score > b.score;
    auto pa = prev_rank.find(a.player_id);
    auto pb = prev_rank.find(b.player_id);
    const int ra = pa == prev_rank.end() ? 0 : pa->second;
    const int rb = pb == prev_rank.end() ? 0 : pb->second;
    if (ra != rb) {
      if (ra == 0) return false;  // unranked after ranked
      if (rb == 0) return true;
      return ra < rb;
    }
    return a.player_id < b.player_id;
  };
  std::stable_sort(out.entries.begin(), out.entries.end(), order);
  // penalized entries to the bottom, keeping their relative order
  std::stable_partition(out.entries.begin(), out.entries.end(),
                        [](const RankedEntry& e) { return !e.penalized; });
  for (size_t i = 0; i < out.entries.size(); ++i)
    out.entries[i].rank = static_cast<int>(i) + 1;
  return out;
}

}  // namespace csp
