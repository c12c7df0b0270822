#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "csp/analyze/analyzer.hpp"
#include "csp/compare/compare.hpp"
#include "csp/core/config.hpp"
#include "csp/core/dataset_io.hpp"
#include "csp/engine/engine.hpp"
#include "csp/llm/client.hpp"
#include "csp/util/errors.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInvalid = 2;
constexpr int kExitInterrupted = 3;

// Without an external corpus the initial documents and queries stand in
// as the background collection.
csp::BackgroundCorpus corpus_for(const csp::CompetitionConfig& config,
                                 const std::string& idf_corpus_path) {
  if (!idf_corpus_path.empty())
    return csp::build_corpus_from_path(idf_corpus_path);
  csp::CorpusBuilder builder;
  for (const auto& q : config.queries) {
    builder.add_text(q.query.text);
    for (const auto& [pid, text] : q.initial_documents) builder.add_text(text);
  }
  return builder.build();
}

struct SimulateArgs {
  std::string config_path;
  std::string out_path;
  std::optional<uint64_t> seed;
  std::string resume_path;
  std::string checkpoint_path;
  int stop_after_round = 0;
  int workers = 1;
  std::string transport = "mock";
  std::string endpoint;
  std::string embed_model;
  std::string idf_corpus;
  std::string prompts_dir;
  bool quiet = false;
};

int cmd_simulate(const SimulateArgs& args) {
  csp::CompetitionConfig config = csp::load_config_file(args.config_path);
  if (args.seed) config.rng_seed = *args.seed;

  const csp::BackgroundCorpus corpus = corpus_for(config, args.idf_corpus);

  std::unique_ptr<csp::Transport> transport;
  if (args.transport == "mock") {
    transport = std::make_unique<csp::MockTransport>();
  } else if (args.transport == "http") {
    csp::HttpOptions opts;
    opts.endpoint = args.endpoint;
    opts.embed_model = args.embed_model;
    if (opts.endpoint.empty())
      throw csp::ParameterError("--transport http requires --endpoint");
    transport = csp::make_http_transport(opts);
  } else {
    throw csp::ParameterError("unknown transport: " + args.transport);
  }

  csp::EngineServices services;
  services.corpus = &corpus;
  services.transport = transport.get();
  services.workers = args.workers;
  if (!args.prompts_dir.empty())
    services.templates = csp::load_prompt_templates(args.prompts_dir);
  else
    services.templates = csp::default_prompt_templates();
  if (!args.quiet)
    services.log = [](const std::string& line) {
      std::cerr << line << "\n";
    };

  csp::RunControl control;
  control.stop_after_round = args.stop_after_round;
  if (!args.checkpoint_path.empty())
    control.checkpoint_path = args.checkpoint_path;

  csp::RunResult result;
  if (!args.resume_path.empty()) {
    const csp::Checkpoint cp = csp::load_checkpoint(args.resume_path);
    result = csp::resume_competition(cp, config, services, control);
  } else {
    result = csp::run_competition(config, services, control);
  }

  if (result.completed || !args.out_path.empty()) {
    if (!args.out_path.empty())
      csp::save_dataset_file(result.dataset, args.out_path);
    else
      csp::save_dataset(result.dataset, std::cout);
  }
  if (!result.completed) {
    std::cerr << "stopped after round " << result.completed_rounds
              << " of " << config.rounds;
    if (control.checkpoint_path)
      std::cerr << "; checkpoint written to " << *control.checkpoint_path;
    std::cerr << "\n";
    return kExitInterrupted;
  }
  return kExitOk;
}

struct AnalyzeArgs {
  std::string dataset_path;
  std::string out_dir;
  std::string annotations_path;
  std::string idf_corpus;
  std::string stopwords_path;
  int calibration_target = 3;
};

int cmd_analyze(const AnalyzeArgs& args) {
  const csp::CompetitionDataset dataset =
      csp::load_dataset_file(args.dataset_path);

  csp::OwnedResources owned;
  if (!args.idf_corpus.empty()) {
    csp::StopwordList stopwords;
    if (!args.stopwords_path.empty())
      stopwords = csp::load_stopwords(args.stopwords_path);
    owned = csp::resources_from_corpus(
        csp::build_corpus_from_path(args.idf_corpus), std::move(stopwords));
  } else {
    owned = csp::resources_from_dataset(dataset);
    if (!args.stopwords_path.empty())
      owned.stopwords = csp::load_stopwords(args.stopwords_path);
  }

  std::optional<csp::AnnotationSet> annotations;
  if (!args.annotations_path.empty()) {
    annotations = csp::load_annotations(args.annotations_path);
    annotations->calibration_target = args.calibration_target;
  }

  const csp::AnalysisReport report = csp::analyze_dataset(
      dataset, owned.view(), annotations ? &*annotations : nullptr);
  csp::write_analysis(report, args.out_dir);
  std::cout << "wrote " << report.series.size() << " series to " << args.out_dir
            << "\n";
  return kExitOk;
}

struct CompareArgs {
  std::vector<std::string> analysis_dirs;  // label=dir or dir
  std::string out_dir;
};

int cmd_compare(const CompareArgs& args) {
  namespace fs = std::filesystem;
  // measure -> [(label, series)...] preserving command-line order
  std::vector<std::string> measure_order;
  std::map<std::string, std::vector<std::pair<std::string, csp::MeasureSeries>>>
      by_measure;
  for (const auto& spec : args.analysis_dirs) {
    std::string label, dir;
    const size_t eq = spec.find('=');
    if (eq != std::string::npos) {
      label = spec.substr(0, eq);
      dir = spec.substr(eq + 1);
    } else {
      dir = spec;
      label = fs::path(dir).filename().string();
      if (label.empty()) label = dir;
    }
    for (auto& series : csp::load_analysis_dir(dir)) {
      if (!by_measure.count(series.name)) measure_order.push_back(series.name);
      by_measure[series.name].emplace_back(label, std::move(series));
    }
  }
  std::vector<csp::ComparisonTable> tables;
  for (const auto& name : measure_order)
    tables.push_back(csp::compare_series(by_measure[name]));
  csp::render_report(tables, args.out_dir);
  std::cout << "wrote " << tables.size() << " comparisons to " << args.out_dir
            << "\n";
  return kExitOk;
}

struct ValidateArgs {
  std::string config_path;
  std::string dataset_path;
};

int cmd_validate(const ValidateArgs& args) {
  if (args.config_path.empty() && args.dataset_path.empty())
    throw csp::ParameterError("validate needs --config and/or --dataset");
  if (!args.config_path.empty()) {
    const csp::CompetitionConfig config =
        csp::load_config_file(args.config_path);
    const auto violations = csp::validate_config(config);
    if (!violations.empty()) {
      for (const auto& v : violations)
        std::cerr << args.config_path << ": " << v << "\n";
      return kExitInvalid;
    }
    std::cout << args.config_path << ": ok (digest "
              << csp::config_digest(config) << ")\n";
  }
  if (!args.dataset_path.empty()) {
    const csp::CompetitionDataset dataset =
        csp::load_dataset_file(args.dataset_path);
    std::cout << args.dataset_path << ": ok (" << dataset.games.size()
              << " games)\n";
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ranking-competition simulator and analyzer"};
  app.require_subcommand(1);

  SimulateArgs sim;
  auto* simulate = app.add_subcommand("simulate", "run a competition");
  simulate->add_option("--config", sim.config_path, "competition config JSON")
      ->required();
  simulate->add_option("--out", sim.out_path, "dataset JSONL path (default stdout)");
  uint64_t seed_value = 0;
  auto* seed_opt = simulate->add_option("--seed", seed_value,
                                        "override the config rng_seed");
  simulate->add_option("--resume", sim.resume_path, "checkpoint to resume");
  simulate->add_option("--checkpoint", sim.checkpoint_path,
                       "write a checkpoint after every round");
  simulate->add_option("--stop-after-round", sim.stop_after_round,
                       "stop once this round completes (batch boundary)");
  simulate->add_option("--workers", sim.workers,
                       "concurrent agent steps per round");
  simulate->add_option("--transport", sim.transport, "mock | http");
  simulate->add_option("--endpoint", sim.endpoint,
                       "chat-completions endpoint for --transport http");
  simulate->add_option("--embed-model", sim.embed_model,
                       "embeddings model for --transport http");
  simulate->add_option("--idf-corpus", sim.idf_corpus,
                       "background corpus (directory or JSONL)");
  simulate->add_option("--prompts", sim.prompts_dir,
                       "prompt template directory");
  simulate->add_flag("--quiet", sim.quiet, "suppress per-round log lines");

  AnalyzeArgs ana;
  auto* analyze = app.add_subcommand("analyze", "compute measures for a dataset");
  analyze->add_option("--dataset", ana.dataset_path, "dataset JSONL")->required();
  analyze->add_option("--out", ana.out_dir, "output directory")->required();
  analyze->add_option("--annotations", ana.annotations_path,
                      "annotation CSV (doc_id,n_annotators,relevance_votes,quality_votes)");
  analyze->add_option("--calibration-target", ana.calibration_target,
                      "grade scale maximum (default 3)");
  analyze->add_option("--idf-corpus", ana.idf_corpus,
                      "background corpus (directory or JSONL)");
  analyze->add_option("--stopwords", ana.stopwords_path,
                      "stopword list, one term per line");

  CompareArgs cmp;
  auto* compare = app.add_subcommand("compare", "compare analysis outputs");
  compare->add_option("dirs", cmp.analysis_dirs,
                      "analysis directories, optionally label=dir")
      ->required()
      ->expected(-1);
  compare->add_option("--out", cmp.out_dir, "report directory")->required();

  ValidateArgs val;
  auto* validate = app.add_subcommand("validate", "validate configs/datasets");
  validate->add_option("--config", val.config_path, "competition config JSON");
  validate->add_option("--dataset", val.dataset_path, "dataset JSONL");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*simulate) {
      if (seed_opt->count()) sim.seed = seed_value;
      return cmd_simulate(sim);
    }
    if (*analyze) return cmd_analyze(ana);
    if (*compare) return cmd_compare(cmp);
    if (*validate) return cmd_validate(val);
  } catch (const csp::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInvalid;
  }
  return kExitOk;
}
