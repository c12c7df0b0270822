#pragma once

#include <functional>
#include <string>
#include <unordered_map>
#include <unordered_set>

#include "csp/text/tokenize.hpp"

namespace csp {

struct IdfTable {
  long doc_count = 1;
  std::unordered_map<std::string, long> df;

  long df_of(const std::string& term) const {
    auto it = df.find(term);
    return it == df.end() ? 0 : it->second;
  }
};

using CollectionLm = std::unordered_map<std::string, double>;

// Background-corpus statistics shared by the okapi ranker and the
// query-dependent analyzer features.
struct BackgroundCorpus {
  IdfTable idf;
  double avg_dl = 1.0;
  double total_tokens = 0.0;
  CollectionLm collection_lm;  // unsmoothed term probabilities
};

struct StopwordList {
  std::unordered_set<std::string> terms;
  bool contains(const std::string& t) const { return terms.count(t) != 0; }
};

// One lowercase term per line, '#' comments and blank lines skipped.
StopwordList load_stopwords(const std::string& path);

// Optional per-document term normalizer applied at build time (the
// simulator itself never stems; a stemmer can be plugged in here when
// building from a stemmed background corpus).
using TermNormalizer = std::function<std::string(const std::string&)>;

class CorpusBuilder {
 public:
  explicit CorpusBuilder(TermNormalizer normalizer = nullptr)
      : normalizer_(std::move(normalizer)) {}

  void add_document(const TokenStream& tokens);
  void add_text(const std::string& text) { add_document(tokenize(text)); }

  // Throws ParameterError if no documents were added.
  BackgroundCorpus build() const;

 private:
  TermNormalizer normalizer_;
  long docs_ = 0;
  double tokens_ = 0.0;
  std::unordered_map<std::string, long> df_;
  std::unordered_map<std::string, double> tf_;
};

// Directory of plain-text files (sorted by filename) or a single JSONL
// file of {id, text} records.
BackgroundCorpus build_corpus_from_path(const std::string& path,
                                        TermNormalizer normalizer = nullptr);

}  // namespace csp
