#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "csp/core/types.hpp"
#include "csp/text/features.hpp"
#include "csp/text/idf.hpp"

namespace csp {

struct MeasurePoint {
  int round = 0;
  double value = 0.0;
  int n_games = 0;
};

struct MeasureSeries {
  std::string name;
  std::vector<MeasurePoint> points;  // rounds strictly increasing
};

enum class Feature { length, stopword_ratio, entropy, lm_dir, tf, bm25 };

std::string feature_name(Feature f);

// Resources for query-dependent features and TF.IDF similarity. The
// analysis IdfTable is independent of the one the competition ranked
// with. When no background corpus is supplied the analyzer derives one
// from the dataset's own documents.
struct AnalyzerResources {
  const IdfTable* idf = nullptr;
  const CollectionLm* collection_lm = nullptr;
  const StopwordList* stopwords = nullptr;
  double avg_dl = 1.0;
  double bm25_k1 = 1.2;
  double bm25_b = 0.75;
  double dirichlet_mu = kDirichletMuDefault;
};

// Builds self-contained resources (idf, lm, avg_dl) from the dataset.
struct OwnedResources {
  IdfTable idf;
  CollectionLm collection_lm;
  StopwordList stopwords;
  double avg_dl = 1.0;

  AnalyzerResources view() const;
};
OwnedResources resources_from_dataset(const CompetitionDataset& dataset);
OwnedResources resources_from_corpus(const BackgroundCorpus& corpus,
                                     StopwordList stopwords);

// Mean |f(W_{i+1}) - f(W_i)| over games where consecutive winners are
// different players; same-player transitions are excluded and empty
// rounds omitted. Pairs where either side is non-finite (the
// all-stopwords sentinel) are skipped. The point for transition
// (i, i+1) sits at round i+1.
MeasureSeries winner_feature_delta(const CompetitionDataset& dataset,
                                   Feature feature,
                                   const AnalyzerResources& res);

MeasureSeries winner_similarity(const CompetitionDataset& dataset,
                                const AnalyzerResources& res);

MeasureSeries top2_similarity(const CompetitionDataset& dataset,
                              const AnalyzerResources& res);

MeasureSeries min_interdoc_similarity(const CompetitionDataset& dataset,
                                      const AnalyzerResources& res);

MeasureSeries unique_documents(const CompetitionDataset& dataset);

MeasureSeries player_self_similarity(const CompetitionDataset& dataset,
                                     const AnalyzerResources& res);

// Best player's wins over rounds/players, averaged over games.
double proportion_of_wins(const CompetitionDataset& dataset);

struct BestPlayer {
  std::string player_id;
  long total_wins = 0;
  bool tied = false;
};
BestPlayer best_player(const CompetitionDataset& dataset);

struct AnnotationRecord {
  int n_annotators = 1;
  int relevance_votes = 0;
  int quality_votes = 0;
};

struct AnnotationSet {
  std::map<std::string, AnnotationRecord> by_doc;  // doc_id ->
  int calibration_target = 3;
};

// CSV with header doc_id,n_annotators,relevance_votes,quality_votes.
AnnotationSet load_annotations(const std::string& path);

enum class GradeKind { relevance, quality };
enum class GradeSelector { winner_only, all };

// Mean calibrated grade (raw * target / n_annotators) per round over
// annotated documents; unannotated rounds are omitted.
MeasureSeries grade_series(const CompetitionDataset& dataset,
                           const AnnotationSet& annotations, GradeKind kind,
                           GradeSelector selector);

struct KappaItem {
  std::vector<int> votes_per_category;  // over k categories
  int n_annotators = 0;
};

// Free-marginal multi-rater kappa: (mean P_o - 1/k) / (1 - 1/k) with
// P_o = sum_c n_c (n_c - 1) / (n (n - 1)) per item.
double free_marginal_kappa(const std::vector<KappaItem>& items);

// All applicable series plus the scalar statistics; what cmd_analyze
// writes out (one CSV per series and a JSON manifest).
struct AnalysisReport {
  std::vector<MeasureSeries> series;
  double proportion_of_wins = 0.0;
  BestPlayer best;
};

AnalysisReport analyze_dataset(const CompetitionDataset& dataset,
                               const AnalyzerResources& res,
                               const AnnotationSet* annotations = nullptr);

void write_analysis(const AnalysisReport& report, const std::string& out_dir);
std::string series_to_csv(const MeasureSeries& series);
MeasureSeries series_from_csv(const std::string& name,
                              const std::string& csv_text);

}  // namespace csp
