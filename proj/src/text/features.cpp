#include "csp/text/features.hpp"

#include <cmath>
#include <unordered_map>
#include <unordered_set>

#include "csp/util/errors.hpp"

namespace csp {

namespace {

std::unordered_map<std::string, long> term_counts(const TokenStream& d) {
  std::unordered_map<std::string, long> tf;
  for (const auto& t : d) ++tf[t];
  return tf;
}

}  // namespace

double stopword_ratio(const TokenStream& d, const StopwordList& s) {
  long stop = 0, nonstop = 0;
  for (const auto& t : d) (s.contains(t) ? stop : nonstop)++;
  if (nonstop == 0)
    return stop == 0 ? 0.0 : std::numeric_limits<double>::infinity();
  return static_cast<double>(stop) / static_cast<double>(nonstop);
}

double entropy(const TokenStream& d) {
  if (d.empty()) throw ParameterError("entropy undefined for empty document");
  const double n = static_cast<double>(d.size());
  double h = 0.0;
  for (const auto& [term, tf] : term_counts(d)) {
    const double p = tf / n;
    h -= p * std::log2(p);
  }
  return h;
}

long sum_query_tf(const TokenStream& q, const TokenStream& d) {
  std::unordered_set<std::string> qterms(q.begin(), q.end());
  long sum = 0;
  for (const auto& t : d)
    if (qterms.count(t)) ++sum;
  return sum;
}

double bm25_score(const TokenStream& q, const TokenStream& d,
                  const IdfTable& idf, double k1, double b, double avg_dl) {
  if (avg_dl <= 0) throw ParameterError("bm25: avg_dl must be > 0");
  if (k1 < 0) throw ParameterError("bm25: k1 must be >= 0");
  if (b < 0 || b > 1) throw ParameterError("bm25: b must be in [0, 1]");
  const auto tf = term_counts(d);
  const double dl = static_cast<double>(d.size());
  const double n_docs = static_cast<double>(idf.doc_count);
  std::unordered_set<std::string> seen;
  double score = 0.0;
  for (const auto& t : q) {
    if (!seen.insert(t).second) continue;
    auto it = tf.find(t);
    if (it == tf.end()) continue;
    const double f = static_cast<double>(it->second);
    const double df = static_cast<double>(idf.df_of(t));  // 0 if unseen
    const double w = std::log((n_docs - df + 0.5) / (df + 0.5) + 1.0);
    score += w * f * (k1 + 1.0) / (f + k1 * (1.0 - b + b * dl / avg_dl));
  }
  return score;
}

double dirichlet_ql(const TokenStream& q, const TokenStream& d,
                    const CollectionLm& collection_lm, double mu) {
  if (mu <= 0) throw ParameterError("dirichlet_ql: mu must be > 0");
  const auto tf = term_counts(d);
  const double dl = static_cast<double>(d.size());
  double score = 0.0;
  for (const auto& t : q) {
    auto cit = collection_lm.find(t);
    const double pc = cit == collection_lm.end() ? 0.0 : cit->second;
    auto it = tf.find(t);
    const double f = it == tf.end() ? 0.0 : static_cast<double>(it->second);
    if (pc <= 0.0 && f <= 0.0)
      throw ParameterError("dirichlet_ql: zero-probability query term: " + t);
    score += std::log((f + mu * pc) / (dl + mu));
  }
  return score;
}

}  // namespace csp
