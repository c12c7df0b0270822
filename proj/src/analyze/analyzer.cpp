#include "csp/analyze/analyzer.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <json.hpp>

#include "csp/text/tfidf.hpp"
#include "csp/text/tokenize.hpp"
#include "csp/util/errors.hpp"

namespace csp {

using nlohmann::json;

namespace {

int round_count(const CompetitionDataset& ds) {
  if (ds.games.empty()) return 0;
  return static_cast<int>(ds.games.front().rounds.size());
}

// Ranking of round r; nullptr when round 0 has no stored ranking.
const std::vector<RankEntry>* ranking_of(const GameRecord& g, int r) {
  if (r == 0) return g.initial_ranking.empty() ? nullptr : &g.initial_ranking;
  return &g.rounds[r - 1].ranking;
}

std::vector<const Document*> docs_of(const GameRecord& g, int r) {
  std::vector<const Document*> out;
  if (r == 0) {
    for (const auto& [pid, d] : g.initial_documents) out.push_back(&d);
  } else {
    for (const auto& d : g.rounds[r - 1].documents) out.push_back(&d);
  }
  return out;
}

const Document* ranked_doc(const GameRecord& g, int r, int rank) {
  const auto* ranking = ranking_of(g, r);
  if (!ranking) return nullptr;
  for (const auto& e : *ranking) {
    if (e.rank == rank) {
      if (r == 0) return &g.initial_documents.at(e.player_id);
      return &doc_of(g.rounds[r - 1].documents, e.player_id);
    }
  }
  return nullptr;
}

double feature_value(Feature f, const Document& doc, const TokenStream& query,
                     const AnalyzerResources& res) {
  const TokenStream d = tokenize(doc.text);
  switch (f) {
    case Feature::length:
      return static_cast<double>(doc_length(d));
    case Feature::stopword_ratio:
      if (!res.stopwords)
        throw ParameterError("stopword_ratio requires a stopword list");
      return stopword_ratio(d, *res.stopwords);
    case Feature::entropy:
      return entropy(d);
    case Feature::lm_dir:
      if (!res.collection_lm)
        throw ParameterError("lm_dir requires a collection language model");
      return dirichlet_ql(query, d, *res.collection_lm, res.dirichlet_mu);
    case Feature::tf:
      return static_cast<double>(sum_query_tf(query, d));
    case Feature::bm25:
      if (!res.idf) throw ParameterError("bm25 requires an idf table");
      return bm25_score(query, d, *res.idf, res.bm25_k1, res.bm25_b,
                        res.avg_dl);
  }
  throw ParameterError("unknown feature");
}

double similarity(const Document& a, const Document& b,
                  const AnalyzerResources& res) {
  if (!res.idf) throw ParameterError("similarity requires an idf table");
  return text_similarity(a.text, b.text, *res.idf);
}

// Accumulates (transition or round) -> sum/count and renders a series.
class SeriesAccumulator {
 public:
  void add(int round, double value) {
    auto& cell = cells_[round];
    cell.first += value;
    cell.second += 1;
  }

  MeasureSeries finish(std::string name) const {
    MeasureSeries s;
    s.name = std::move(name);
    for (const auto& [round, cell] : cells_)
      s.points.push_back({round, cell.first / cell.second, cell.second});
    return s;
  }

 private:
  std::map<int, std::pair<double, int>> cells_;
};

}  // namespace

std::string feature_name(Feature f) {
  switch (f) {
    case Feature::length: return "length";
    case Feature::stopword_ratio: return "stopword_ratio";
    case Feature::entropy: return "entropy";
    case Feature::lm_dir: return "lm_dir";
    case Feature::tf: return "tf";
    case Feature::bm25: return "bm25";
  }
  return "unknown";
}

AnalyzerResources OwnedResources::view() const {
  AnalyzerResources r;
  r.idf = &idf;
  r.collection_lm = &collection_lm;
  r.stopwords = &stopwords;
  r.avg_dl = avg_dl;
  return r;
}

OwnedResources resources_from_dataset(const CompetitionDataset& dataset) {
  CorpusBuilder builder;
  std::set<std::string> query_texts;
  for (const auto& g : dataset.games) {
    query_texts.insert(g.query.text);
    for (const auto& [pid, d] : g.initial_documents) builder.add_text(d.text);
    for (const auto& rr : g.rounds)
      for (const auto& d : rr.documents) builder.add_text(d.text);
  }
  // query texts join the collection so every query term has a nonzero
  // collection probability for lm_dir
  for (const auto& q : query_texts) builder.add_text(q);
  BackgroundCorpus c = builder.build();
  OwnedResources out;
  out.idf = std::move(c.idf);
  out.collection_lm = std::move(c.collection_lm);
  out.avg_dl = c.avg_dl;
  return out;
}

OwnedResources resources_from_corpus(const BackgroundCorpus& corpus,
                                     StopwordList stopwords) {
  OwnedResources out;
  out.idf = corpus.idf;
  out.collection_lm = corpus.collection_lm;
  out.avg_dl = corpus.avg_dl;
  out.stopwords = std::move(stopwords);
  return out;
}

MeasureSeries winner_feature_delta(const CompetitionDataset& dataset,
                                   Feature feature,
                                   const AnalyzerResources& res) {
  SeriesAccumulator acc;
  const int R = round_count(dataset);
  for (const auto& g : dataset.games) {
    const TokenStream q = tokenize(g.query.text);
    for (int i = 0; i < R; ++i) {
      const Document* wi = ranked_doc(g, i, 1);
      const Document* wj = ranked_doc(g, i + 1, 1);
      if (!wi || !wj) continue;
      if (wi->player_id == wj->player_id) continue;  // same-player exclusion
      const double a = feature_value(feature, *wi, q, res);
      const double b = feature_value(feature, *wj, q, res);
      // the all-stopwords sentinel is non-numeric; such pairs are skipped
      if (!std::isfinite(a) || !std::isfinite(b)) continue;
      acc.add(i + 1, std::fabs(b - a));
    }
  }
  return acc.finish("winner_feature_delta_" + feature_name(feature));
}

MeasureSeries winner_similarity(const CompetitionDataset& dataset,
                                const AnalyzerResources& res) {
  SeriesAccumulator acc;
  const int R = round_count(dataset);
  for (const auto& g : dataset.games) {
    for (int i = 0; i < R; ++i) {
      const Document* wi = ranked_doc(g, i, 1);
      const Document* wj = ranked_doc(g, i + 1, 1);
      if (!wi || !wj) continue;
      if (wi->player_id == wj->player_id) continue;
      acc.add(i + 1, similarity(*wi, *wj, res));
    }
  }
  return acc.finish("winner_similarity");
}

MeasureSeries top2_similarity(const CompetitionDataset& dataset,
                              const AnalyzerResources& res) {
  for (const auto& g : dataset.games)
    if (g.initial_documents.size() < 2)
      throw ParameterError("top2_similarity needs >= 2 players");
  SeriesAccumulator acc;
  const int R = round_count(dataset);
  for (const auto& g : dataset.games) {
    for (int r = 0; r <= R; ++r) {
      const Document* first = ranked_doc(g, r, 1);
      const Document* second = ranked_doc(g, r, 2);
      if (!first || !second) continue;
      acc.add(r, similarity(*first, *second, res));
    }
  }
  return acc.finish("top2_similarity");
}

MeasureSeries min_interdoc_similarity(const CompetitionDataset& dataset,
                                      const AnalyzerResources& res) {
  SeriesAccumulator acc;
  const int R = round_count(dataset);
  for (const auto& g : dataset.games) {
    for (int r = 0; r <= R; ++r) {
      const auto docs = docs_of(g, r);
      if (docs.size() < 2) continue;
      double mn = 1.0;
      for (size_t a = 0; a < docs.size(); ++a)
        for (size_t b = a + 1; b < docs.size(); ++b)
          mn = std::min(mn, similarity(*docs[a], *docs[b], res));
      acc.add(r, mn);
    }
  }
  return acc.finish("min_interdoc_similarity");
}

MeasureSeries unique_documents(const CompetitionDataset& dataset) {
  SeriesAccumulator acc;
  const int R = round_count(dataset);
  for (const auto& g : dataset.games) {
    for (int r = 0; r <= R; ++r) {
      std::set<std::string> texts;
      for (const auto* d : docs_of(g, r)) texts.insert(normalize_text(d->text));
      acc.add(r, static_cast<double>(texts.size()));
    }
  }
  return acc.finish("unique_documents");
}

MeasureSeries player_self_similarity(const CompetitionDataset& dataset,
                                     const AnalyzerResources& res) {
  SeriesAccumulator acc;
  const int R = round_count(dataset);
  for (const auto& g : dataset.games) {
    for (int i = 0; i < R; ++i) {
      for (const auto& [pid, init] : g.initial_documents) {
        const Document& a =
            i == 0 ? init : doc_of(g.rounds[i - 1].documents, pid);
        const Document& b = doc_of(g.rounds[i].documents, pid);
        acc.add(i + 1, similarity(a, b, res));
      }
    }
  }
  return acc.finish("player_self_similarity");
}

double proportion_of_wins(const CompetitionDataset& dataset) {
  if (dataset.games.empty())
    throw ParameterError("proportion_of_wins: empty dataset");
  double total = 0.0;
  int games = 0;
  for (const auto& g : dataset.games) {
    const int rounds = static_cast<int>(g.rounds.size());
    const int players = static_cast<int>(g.initial_documents.size());
    if (rounds == 0 || players == 0) continue;
    std::map<std::string, long> wins;
    for (const auto& rr : g.rounds) ++wins[top_of(rr.ranking).player_id];
    long best = 0;
    for (const auto& [pid, w] : wins) best = std::max(best, w);
    // expected wins under a uniform winner: rounds / players
    total += static_cast<double>(best) /
             (static_cast<double>(rounds) / static_cast<double>(players));
    ++games;
  }
  if (games == 0) throw ParameterError("proportion_of_wins: no played rounds");
  return total / games;
}

BestPlayer best_player(const CompetitionDataset& dataset) {
  std::map<std::string, long> wins;
  for (const auto& g : dataset.games) {
    for (const auto& [pid, d] : g.initial_documents) wins.try_emplace(pid, 0);
    for (const auto& rr : g.rounds) ++wins[top_of(rr.ranking).player_id];
  }
  if (wins.empty()) throw ParameterError("best_player: empty dataset");
  BestPlayer out;
  for (const auto& [pid, w] : wins) {
    if (out.player_id.empty() || w > out.total_wins) {
      out.player_id = pid;
      out.total_wins = w;
      out.tied = false;
    } else if (w == out.total_wins) {
      out.tied = true;  // lexicographically first already kept (map order)
    }
  }
  return out;
}

AnnotationSet load_annotations(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParameterError("cannot open annotations file: " + path);
  AnnotationSet out;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    while (!line.empty() && (line.back() == '\r' || line.back() == '\n'))
      line.pop_back();
    if (line.empty()) continue;
    if (line_no == 1 && line.rfind("doc_id", 0) == 0) continue;  // header
    std::stringstream ss(line);
    std::string doc_id, n, rel, qual;
    if (!std::getline(ss, doc_id, ',') || !std::getline(ss, n, ',') ||
        !std::getline(ss, rel, ',') || !std::getline(ss, qual, ','))
      throw SchemaError("annotations line " + std::to_string(line_no) +
                        ": expected doc_id,n_annotators,relevance_votes,"
                        "quality_votes");
    AnnotationRecord rec;
    try {
      rec.n_annotators = std::stoi(n);
      rec.relevance_votes = std::stoi(rel);
      rec.quality_votes = std::stoi(qual);
    } catch (const std::exception&) {
      throw SchemaError("annotations line " + std::to_string(line_no) +
                        ": non-numeric field");
    }
    if (rec.n_annotators < 1 || rec.relevance_votes > rec.n_annotators ||
        rec.quality_votes > rec.n_annotators)
      throw SchemaError("annotations line " + std::to_string(line_no) +
                        ": votes must be <= n_annotators (n >= 1)");
    out.by_doc[doc_id] = rec;
  }
  return out;
}

MeasureSeries grade_series(const CompetitionDataset& dataset,
                           const AnnotationSet& annotations, GradeKind kind,
                           GradeSelector selector) {
  SeriesAccumulator acc;
  const int R = round_count(dataset);
  const double target = annotations.calibration_target;
  auto grade_of = [&](const Document& d) -> std::optional<double> {
    auto it = annotations.by_doc.find(d.doc_id);
    if (it == annotations.by_doc.end()) return std::nullopt;
    const auto& rec = it->second;
    const int raw = kind == GradeKind::relevance ? rec.relevance_votes
                                                 : rec.quality_votes;
    return raw * target / rec.n_annotators;
  };
  for (const auto& g : dataset.games) {
    for (int r = 0; r <= R; ++r) {
      if (selector == GradeSelector::winner_only) {
        const Document* w = ranked_doc(g, r, 1);
        if (!w) continue;
        if (auto v = grade_of(*w)) acc.add(r, *v);
      } else {
        double sum = 0.0;
        int n = 0;
        for (const auto* d : docs_of(g, r)) {
          if (auto v = grade_of(*d)) {
            sum += *v;
            ++n;
          }
        }
        if (n > 0) acc.add(r, sum / n);
      }
    }
  }
  const std::string base =
      kind == GradeKind::relevance ? "relevance_grade" : "quality_grade";
  return acc.finish(base);
}

double free_marginal_kappa(const std::vector<KappaItem>& items) {
  if (items.empty()) throw ParameterError("kappa: no items");
  const size_t k = items.front().votes_per_category.size();
  if (k < 2) throw ParameterError("kappa: need at least 2 categories");
  double sum_po = 0.0;
  for (const auto& item : items) {
    if (item.votes_per_category.size() != k)
      throw ParameterError("kappa: inconsistent category counts");
    const int n = item.n_annotators;
    if (n < 2) throw ParameterError("kappa: each item needs >= 2 annotators");
    long agree = 0;
    long votes = 0;
    for (int c : item.votes_per_category) {
      agree += static_cast<long>(c) * (c - 1);
      votes += c;
    }
    if (votes != n)
      throw ParameterError("kappa: votes must sum to n_annotators");
    sum_po += static_cast<double>(agree) / (static_cast<double>(n) * (n - 1));
  }
  const double po = sum_po / items.size();
  const double pe = 1.0 / static_cast<double>(k);
  return (po - pe) / (1.0 - pe);
}

AnalysisReport analyze_dataset(const CompetitionDataset& dataset,
                               const AnalyzerResources& res,
                               const AnnotationSet* annotations) {
  AnalysisReport report;
  auto try_add = [&](auto&& fn) {
    try {
      report.series.push_back(fn());
    } catch (const ParameterError&) {
      // measure not applicable to this dataset (e.g. single player)
    }
  };
  for (Feature f : {Feature::length, Feature::stopword_ratio, Feature::entropy,
                    Feature::lm_dir, Feature::tf, Feature::bm25})
    try_add([&] { return winner_feature_delta(dataset, f, res); });
  try_add([&] { return winner_similarity(dataset, res); });
  try_add([&] { return top2_similarity(dataset, res); });
  try_add([&] { return min_interdoc_similarity(dataset, res); });
  try_add([&] { return unique_documents(dataset); });
  try_add([&] { return player_self_similarity(dataset, res); });
  if (annotations) {
    try_add([&] {
      return grade_series(dataset, *annotations, GradeKind::relevance,
                          GradeSelector::winner_only);
    });
    try_add([&] {
      return grade_series(dataset, *annotations, GradeKind::quality,
                          GradeSelector::winner_only);
    });
  }
  report.proportion_of_wins = proportion_of_wins(dataset);
  report.best = best_player(dataset);
  return report;
}

std::string series_to_csv(const MeasureSeries& series) {
  std::ostringstream out;
  out << "round,value,n_games\n";
  out.precision(17);
  for (const auto& p : series.points)
    out << p.round << "," << p.value << "," << p.n_games << "\n";
  return out.str();
}

MeasureSeries series_from_csv(const std::string& name,
                              const std::string& csv_text) {
  MeasureSeries s;
  s.name = name;
  std::istringstream in(csv_text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line.rfind("round", 0) == 0) continue;
    std::stringstream ss(line);
    std::string round, value, n_games;
    if (!std::getline(ss, round, ',') || !std::getline(ss, value, ',') ||
        !std::getline(ss, n_games, ','))
      throw SchemaError("series csv line " + std::to_string(line_no) +
                        ": expected round,value,n_games");
    s.points.push_back({std::stoi(round), std::stod(value), std::stoi(n_games)});
  }
  return s;
}

void write_analysis(const AnalysisReport& report, const std::string& out_dir) {
  namespace fs = std::filesystem;
  fs::create_directories(out_dir);
  json manifest;
  manifest["series"] = json::array();
  for (const auto& s : report.series) {
    std::ofstream out(fs::path(out_dir) / (s.name + ".csv"), std::ios::binary);
    out << series_to_csv(s);
    manifest["series"].push_back(s.name);
  }
  manifest["proportion_of_wins"] = report.proportion_of_wins;
  manifest["best_player"] = {{"player_id", report.best.player_id},
                             {"total_wins", report.best.total_wins},
                             {"tied", report.best.tied}};
  std::ofstream out(fs::path(out_dir) / "manifest.json", std::ios::binary);
  out << manifest.dump(2) << "\n";
}

}  // namespace csp
