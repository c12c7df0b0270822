#include "csp/text/tfidf.hpp"

#include <cmath>
#include <unordered_map>

namespace csp {

TermVector tfidf_vector(const TokenStream& d, const IdfTable& idf) {
  std::unordered_map<std::string, long> tf;
  for (const auto& t : d) ++tf[t];
  TermVector v;
  const double n_docs = static_cast<double>(idf.doc_count);
  for (const auto& [term, f] : tf) {
    long df = idf.df_of(term);
    if (df < 1) df = 1;  // unseen-term fallback
    const double w = f * std::log(n_docs / static_cast<double>(df));
    if (w != 0.0) v.weights[term] = w;
  }
  return v;
}

double cosine(const TermVector& u, const TermVector& v) {
  if (u.empty() || v.empty()) return 0.0;
  double dot = 0.0, nu = 0.0, nv = 0.0;
  for (const auto& [t, w] : u.weights) {
    nu += w * w;
    auto it = v.weights.find(t);
    if (it != v.weights.end()) dot += w * it->second;
  }
  for (const auto& [t, w] : v.weights) nv += w * w;
  if (nu == 0.0 || nv == 0.0) return 0.0;
  return dot / (std::sqrt(nu) * std::sqrt(nv));
}

double text_similarity(const std::string& a, const std::string& b,
                       const IdfTable& idf) {
  const std::string na = normalize_text(a);
  const std::string nb = normalize_text(b);
  if (na == nb) return 1.0;
  return cosine(tfidf_vector(tokenize(na), idf), tfidf_vector(tokenize(nb), idf));
}

}  // namespace csp
