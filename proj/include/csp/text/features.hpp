#pragma once

#include <cmath>
#include <limits>
#include <map>
#include <string>

#include "csp/text/idf.hpp"
#include "csp/text/tokenize.hpp"

namespace csp {

inline long doc_length(const TokenStream& d) {
  return static_cast<long>(d.size());
}

// stopwords / non-stopwords. 0/0 -> 0; all-stopwords -> +inf sentinel.
double stopword_ratio(const TokenStream& d, const StopwordList& s);

inline bool is_all_stopwords_sentinel(double r) { return std::isinf(r); }

// Shannon entropy (base 2) of the unsmoothed unigram MLE.
// Throws ParameterError on an empty stream.
double entropy(const TokenStream& d);

// Sum over *distinct* query terms of tf(term, d).
long sum_query_tf(const TokenStream& q, const TokenStream& d);

// Okapi BM25 with the non-negative idf variant
// idf(t) = ln((N - df + 0.5)/(df + 0.5) + 1); terms absent from the
// table get df = 0.
double bm25_score(const TokenStream& q, const TokenStream& d,
                  const IdfTable& idf, double k1, double b, double avg_dl);

// Dirichlet-smoothed query likelihood, sum over query token occurrences
// of log((tf + mu p(w|C)) / (|d| + mu)). Natural log; default mu = 1000.
double dirichlet_ql(const TokenStream& q, const TokenStream& d,
                    const CollectionLm& collection_lm, double mu = 1000.0);

inline constexpr double kDirichletMuDefault = 1000.0;

}  // namespace csp
