#pragma once

#include <map>
#include <string>

#include "csp/text/idf.hpp"
#include "csp/text/tokenize.hpp"

namespace csp {

// Sparse non-negative term weights; zero-weight entries are not stored.
// std::map keeps iteration order stable for deterministic reductions.
struct TermVector {
  std::map<std::string, double> weights;

  bool empty() const { return weights.empty(); }
};

// weight(t) = tf(t, d) * ln(N / df(t)); unseen terms fall back to df = 1.
TermVector tfidf_vector(const TokenStream& d, const IdfTable& idf);

// In [0, 1] for non-negative vectors; 0 when either vector is empty.
// Callers that want "identical texts are similarity 1" compare the raw
// texts first (see analyzer).
double cosine(const TermVector& u, const TermVector& v);

// TF.IDF cosine with the identical-text rule applied: byte-equal
// normalized texts are similarity 1 even when both vectors are empty.
double text_similarity(const std::string& a, const std::string& b,
                       const IdfTable& idf);

}  // namespace csp
