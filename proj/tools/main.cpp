#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "triplescore/ingest.hpp"
#include "triplescore/metrics.hpp"
#include "triplescore/model_io.hpp"
#include "triplescore/scorers.hpp"

namespace fs = std::filesystem;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitCoverage = 3;

void print_coverage_error(const ts::CoverageError& e) {
  std::cerr << "error: " << e.what() << "\n";
  std::size_t shown = std::min<std::size_t>(10, e.missing().size());
  for (std::size_t i = 0; i < shown; ++i)
    std::cerr << "  missing: " << e.missing()[i] << "\n";
  if (e.missing().size() > shown)
    std::cerr << "  ... and " << e.missing().size() - shown << " more\n";
}

ts::Measure measure_flag(const std::string& s) {
  auto m = ts::parse_measure(s);
  if (!m) throw CLI::ValidationError("--measure", "expected acc or asd");
  return *m;
}

// ---------------------------------------------------------------------------
// evaluate
// ---------------------------------------------------------------------------

struct EvaluateArgs {
  std::string pred;
  std::string truth;
  bool clamp25 = false;
  bool per_predicate = false;
  bool json = false;
};

int run_evaluate(const EvaluateArgs& args) {
  auto truth = ts::parse_scores_file(args.truth, ts::TableRole::ground_truth);
  auto pred = ts::parse_scores_file(args.pred, ts::TableRole::prediction);
  auto report = ts::evaluate(pred, truth, {.clamp = args.clamp25});
  if (args.json)
    std::cout << ts::render_report_json(report) << "\n";
  else
    std::cout << ts::render_report_text(report, args.per_predicate);
  return kExitOk;
}

// ---------------------------------------------------------------------------
// score
// ---------------------------------------------------------------------------

struct ScoreArgs {
  std::string kb;
  std::string subset;
  std::string method;
  bool post_triggers = false;
  std::string sentences;
  std::string paragraphs;
  std::string triggers;
  std::string graph;
  std::vector<std::string> models;
  std::string out;
};

// Loads every --model file, dispatching on the header kind.
struct LoadedModels {
  std::optional<ts::FrequencyCalibration> frequency;
  std::optional<ts::PathModel> paths;
  std::optional<ts::EnsembleModel> ensemble;
};

LoadedModels load_models(const std::vector<std::string>& files) {
  LoadedModels models;
  for (const std::string& file : files) {
    std::string kind = ts::read_model_kind(file);
    if (kind == "frequency")
      models.frequency = ts::load_frequency_calibration_file(file);
    else if (kind == "paths")
      models.paths = ts::load_path_model_file(file);
    else if (kind == "ensemble")
      models.ensemble = ts::load_ensemble_model_file(file);
    else
      throw ts::ParseError("unknown model kind '" + kind + "' in " + file);
  }
  return models;
}

int run_score(const ScoreArgs& args) {
  auto method = ts::parse_method(args.method);
  if (!method) {
    std::cerr << "error: unknown method '" << args.method << "'\n";
    return kExitUsage;
  }

  auto kb = ts::parse_triples_file(args.kb).kb;
  std::vector<ts::Triple> triples;
  if (!args.subset.empty()) {
    auto subset = ts::parse_triples_file(args.subset).kb;
    for (const auto& t : subset.triples()) {
      if (!kb.contains(t))
        throw ts::ValidationError("subset triple not in KB: " + t.to_tsv());
      triples.push_back(t);
    }
  } else {
    triples = kb.triples();
  }

  ts::SentenceCorpus corpus;
  ts::ParagraphStore paragraphs;
  ts::TriggerLexicon lexicon;
  ts::RelationGraph graph;
  if (!args.sentences.empty())
    corpus = ts::parse_sentences_file(args.sentences);
  if (!args.paragraphs.empty())
    paragraphs = ts::parse_paragraphs_file(args.paragraphs);
  if (!args.triggers.empty())
    lexicon = ts::parse_triggers_file(args.triggers);
  if (!args.graph.empty()) graph = ts::parse_graph_file(args.graph);
  LoadedModels models = load_models(args.models);

  ts::PipelineInputs inputs;
  inputs.corpus = args.sentences.empty() ? nullptr : &corpus;
  inputs.paragraphs = args.paragraphs.empty() ? nullptr : &paragraphs;
  inputs.lexicon = args.triggers.empty() ? nullptr : &lexicon;
  inputs.graph = args.graph.empty() ? nullptr : &graph;
  inputs.calibration = models.frequency ? &*models.frequency : nullptr;
  inputs.path_model = models.paths ? &*models.paths : nullptr;
  inputs.ensemble_model = models.ensemble ? &*models.ensemble : nullptr;
  inputs.post_triggers = args.post_triggers;

  ts::ScoreTable pred = ts::run_pipeline(triples, *method, inputs);
  ts::write_scores_file(pred, args.out);
  std::cout << "wrote " << pred.size() << " scores to " << args.out << "\n";
  return kExitOk;
}

// ---------------------------------------------------------------------------
// train
// ---------------------------------------------------------------------------

struct TrainArgs {
  std::string method;
  std::string truth;
  std::string sentences;
  std::string triggers;
  std::string graph;
  std::string config;
  std::string out;
};

int run_train(const TrainArgs& args) {
  ts::TrainConfig config;
  if (!args.config.empty()) config = ts::parse_config_file(args.config);
  auto truth = ts::parse_scores_file(args.truth, ts::TableRole::ground_truth);
  if (truth.empty()) throw ts::ValidationError("training file is empty");

  if (args.method == "frequency") {
    if (args.sentences.empty() || args.triggers.empty())
      throw ts::ValidationError(
          "frequency training needs --sentences and --triggers");
    auto corpus = ts::parse_sentences_file(args.sentences);
    auto lexicon = ts::parse_triggers_file(args.triggers);
    auto fit = ts::fit_frequency_calibration(truth, corpus, lexicon, config);
    ts::save_frequency_calibration_file(fit.calibration, args.out);
    std::printf("frequency model written to %s\n", args.out.c_str());
    std::printf("training ASD: %.3f\n", fit.training_asd);
    return kExitOk;
  }

  if (args.method == "paths") {
    if (args.graph.empty())
      throw ts::ValidationError("path training needs --graph");
    auto graph = ts::parse_graph_file(args.graph);
    auto fit = ts::train_path_model(truth, graph, config);
    ts::save_path_model_file(fit.model, args.out);
    std::printf("path model written to %s (%zu features)\n",
                args.out.c_str(), fit.model.weights.size());
    std::printf("training accuracy (high/low): %.3f\n",
                fit.training_accuracy);
    std::printf("final loss: %.6f\n", fit.loss_history.back());
    return kExitOk;
  }

  if (args.method == "ensemble") {
    // Components: baseline always; frequency and paths when their inputs
    // are supplied. Sub-models are trained here and written next to --out.
    ts::SentenceCorpus corpus;
    ts::TriggerLexicon lexicon;
    ts::RelationGraph graph;
    std::vector<std::pair<std::string, const ts::ScoreTable*>> components;
    std::vector<ts::ScoreTable> predictions;
    predictions.reserve(3);

    std::vector<ts::Triple> train_triples;
    for (const auto& [t, s] : truth.entries()) train_triples.push_back(t);

    ts::PipelineInputs inputs;
    predictions.push_back(
        ts::run_pipeline(train_triples, ts::Method::baseline, inputs));

    std::optional<ts::FrequencyFitResult> freq_fit;
    if (!args.sentences.empty() && !args.triggers.empty()) {
      corpus = ts::parse_sentences_file(args.sentences);
      lexicon = ts::parse_triggers_file(args.triggers);
      freq_fit = ts::fit_frequency_calibration(truth, corpus, lexicon,
                                               config);
      inputs.corpus = &corpus;
      inputs.lexicon = &lexicon;
      inputs.calibration = &freq_fit->calibration;
      predictions.push_back(
          ts::run_pipeline(train_triples, ts::Method::frequency, inputs));
    }

    std::optional<ts::PathTrainResult> path_fit;
    if (!args.graph.empty()) {
      graph = ts::parse_graph_file(args.graph);
      path_fit = ts::train_path_model(truth, graph, config);
      inputs.graph = &graph;
      inputs.path_model = &path_fit->model;
      predictions.push_back(
          ts::run_pipeline(train_triples, ts::Method::paths, inputs));
    }

    std::size_t idx = 0;
    components.emplace_back("baseline", &predictions[idx++]);
    if (freq_fit) components.emplace_back("frequency", &predictions[idx++]);
    if (path_fit) components.emplace_back("paths", &predictions[idx++]);

    auto fit = ts::fit_ensemble(truth, components, config);
    ts::save_ensemble_model_file(fit.model, args.out);
    if (freq_fit)
      ts::save_frequency_calibration_file(freq_fit->calibration,
                                          args.out + ".frequency");
    if (path_fit)
      ts::save_path_model_file(path_fit->model, args.out + ".paths");
    std::printf("ensemble model written to %s\n", args.out.c_str());
    for (std::size_t i = 0; i < fit.model.component_ids.size(); ++i)
      std::printf("  %s: %.2f\n", fit.model.component_ids[i].c_str(),
                  fit.model.weights[i]);
    std::printf("training ASD: %.3f\n", fit.training_asd);
    return kExitOk;
  }

  std::cerr << "error: unknown training method '" << args.method << "'\n";
  return kExitUsage;
}

// ---------------------------------------------------------------------------
// best-constant
// ---------------------------------------------------------------------------

int run_best_constant(const std::string& truth_file,
                      const std::string& measure_name) {
  ts::Measure measure = measure_flag(measure_name);
  auto truth =
      ts::parse_scores_file(truth_file, ts::TableRole::ground_truth);
  ts::Score best = ts::best_constant(truth, measure);
  ts::ScoreTable pred(ts::TableRole::prediction);
  for (const auto& [t, s] : truth.entries()) pred.insert(t, best);
  double value = measure == ts::Measure::acc ? ts::acc(pred, truth)
                                             : ts::asd(pred, truth);
  std::printf("constant: %d\n", best.value());
  std::printf("%s: %.3f\n", std::string(to_string(measure)).c_str(), value);
  return kExitOk;
}

// ---------------------------------------------------------------------------
// leaderboard
// ---------------------------------------------------------------------------

struct LeaderboardArgs {
  std::string truth;
  std::string submissions;
  std::string rank_by = "acc";
  bool clamp25 = false;
  bool strict = false;
  bool json = false;
};

struct LeaderboardRow {
  std::string name;
  ts::EvaluationReport report;
  std::size_t rank_acc = 0;
  std::size_t rank_asd = 0;
  std::size_t rank_tau = 0;
};

std::size_t rank_of(const LeaderboardRow& row,
                    std::vector<const LeaderboardRow*> rows,
                    ts::Measure measure) {
  std::sort(rows.begin(), rows.end(), [&](const auto* a, const auto* b) {
    double va = 0, vb = 0;
    switch (measure) {
      case ts::Measure::acc:
        va = -a->report.acc;
        vb = -b->report.acc;
        break;
      case ts::Measure::asd:
        va = a->report.asd;
        vb = b->report.asd;
        break;
      case ts::Measure::tau:
        va = a->report.tau;
        vb = b->report.tau;
        break;
    }
    return std::tie(va, a->name) < std::tie(vb, b->name);
  });
  for (std::size_t i = 0; i < rows.size(); ++i)
    if (rows[i] == &row) return i + 1;
  return 0;
}

int run_leaderboard(const LeaderboardArgs& args) {
  auto measure = ts::parse_measure(args.rank_by);
  if (!measure) {
    std::cerr << "error: --rank-by expects acc, asd or tau\n";
    return kExitUsage;
  }
  auto truth = ts::parse_scores_file(args.truth, ts::TableRole::ground_truth);

  std::vector<std::string> files;
  for (const auto& entry : fs::directory_iterator(args.submissions))
    if (entry.is_regular_file()) files.push_back(entry.path().string());
  std::sort(files.begin(), files.end());

  std::vector<LeaderboardRow> rows;
  bool had_bad_submission = false;
  for (const std::string& file : files) {
    try {
      auto pred = ts::parse_scores_file(file, ts::TableRole::prediction);
      auto report = ts::evaluate(pred, truth, {.clamp = args.clamp25});
      rows.push_back({fs::path(file).filename().string(), report});
    } catch (const ts::Error& e) {
      std::cerr << "skipping " << file << ": " << e.what() << "\n";
      had_bad_submission = true;
    }
  }

  {
    // The constant-5 baseline row is always included for context.
    ts::ScoreTable baseline(ts::TableRole::prediction);
    for (const auto& [t, s] : truth.entries())
      baseline.insert(t, ts::baseline_score(t));
    rows.push_back({"Baseline",
                    ts::evaluate(baseline, truth, {.clamp = args.clamp25})});
  }

  std::vector<const LeaderboardRow*> ptrs;
  for (const auto& row : rows) ptrs.push_back(&row);
  for (auto& row : rows) {
    row.rank_acc = rank_of(row, ptrs, ts::Measure::acc);
    row.rank_asd = rank_of(row, ptrs, ts::Measure::asd);
    row.rank_tau = rank_of(row, ptrs, ts::Measure::tau);
  }
  std::sort(rows.begin(), rows.end(), [&](const auto& a, const auto& b) {
    std::size_t ra = 0, rb = 0;
    switch (*measure) {
      case ts::Measure::acc:
        ra = a.rank_acc;
        rb = b.rank_acc;
        break;
      case ts::Measure::asd:
        ra = a.rank_asd;
        rb = b.rank_asd;
        break;
      case ts::Measure::tau:
        ra = a.rank_tau;
        rb = b.rank_tau;
        break;
    }
    return ra < rb;
  });

  if (args.json) {
    nlohmann::json out = nlohmann::json::array();
    for (const auto& row : rows) {
      out.push_back({{"name", row.name},
                     {"acc", row.report.acc},
                     {"asd", row.report.asd},
                     {"tau", row.report.tau},
                     {"rank_acc", row.rank_acc},
                     {"rank_asd", row.rank_asd},
                     {"rank_tau", row.rank_tau}});
    }
    std::cout << out.dump(2) << "\n";
  } else {
    std::printf("%4s  %-32s %7s %7s %7s\n", "#", "name", "ACC", "ASD",
                "TAU");
    std::size_t i = 0;
    for (const auto& row : rows)
      std::printf("%3zu.  %-32s %7.3f %7.3f %7.3f\n", ++i, row.name.c_str(),
                  row.report.acc, row.report.asd, row.report.tau);
  }
  return (args.strict && had_bad_submission) ? kExitData : kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Scores knowledge-base triples (0..7) and evaluates score files "
      "with the ACC / ASD / TAU measures. ASD is the recommended headline "
      "measure: it tracks ACC closely but does not reward clamping scores "
      "to 2..5."};
  app.require_subcommand(1);

  EvaluateArgs eval_args;
  auto* eval = app.add_subcommand(
      "evaluate", "Evaluate a prediction file against ground truth");
  eval->add_option("--pred", eval_args.pred, "prediction scores.tsv")
      ->required();
  eval->add_option("--truth", eval_args.truth, "ground-truth scores.tsv")
      ->required();
  eval->add_flag("--clamp25", eval_args.clamp25,
                 "clamp predictions to 2..5 before evaluating");
  eval->add_flag("--per-predicate", eval_args.per_predicate,
                 "include per-predicate breakdown");
  eval->add_flag("--json", eval_args.json, "machine-readable output");

  ScoreArgs score_args;
  auto* score =
      app.add_subcommand("score", "Produce a prediction file for a KB");
  score->add_option("--kb", score_args.kb, "triples.tsv")->required();
  score->add_option("--subset", score_args.subset,
                    "triples.tsv restricting which KB triples to score");
  score->add_option("--method", score_args.method,
                    "baseline|frequency|paths|ensemble")
      ->required();
  score->add_flag("--post-triggers", score_args.post_triggers,
                  "apply trigger-word promote/demote rules");
  score->add_option("--sentences", score_args.sentences, "sentences.tsv");
  score->add_option("--paragraphs", score_args.paragraphs, "paragraphs.tsv");
  score->add_option("--triggers", score_args.triggers, "triggers.tsv");
  score->add_option("--graph", score_args.graph, "graph.tsv");
  score->add_option("--model", score_args.models,
                    "model file (repeatable; kind read from header)");
  score->add_option("--out", score_args.out, "output scores.tsv")
      ->required();

  TrainArgs train_args;
  auto* train = app.add_subcommand("train", "Train a scorer model");
  train->add_option("--method", train_args.method,
                    "frequency|paths|ensemble")
      ->required();
  train->add_option("--truth", train_args.truth, "training scores.tsv")
      ->required();
  train->add_option("--sentences", train_args.sentences, "sentences.tsv");
  train->add_option("--triggers", train_args.triggers, "triggers.tsv");
  train->add_option("--graph", train_args.graph, "graph.tsv");
  train->add_option("--config", train_args.config,
                    "key=value training config");
  train->add_option("--out", train_args.out, "output model file")
      ->required();

  std::string bc_truth, bc_measure;
  auto* best = app.add_subcommand(
      "best-constant", "Constant score optimizing a measure on a truth file");
  best->add_option("--truth", bc_truth, "ground-truth scores.tsv")
      ->required();
  best->add_option("--measure", bc_measure, "acc|asd")->required();

  LeaderboardArgs lb_args;
  auto* lb = app.add_subcommand(
      "leaderboard", "Rank a directory of submissions against ground truth");
  lb->add_option("--truth", lb_args.truth, "ground-truth scores.tsv")
      ->required();
  lb->add_option("--submissions", lb_args.submissions,
                 "directory of scores.tsv files")
      ->required();
  lb->add_option("--rank-by", lb_args.rank_by, "acc|asd|tau (default acc)");
  lb->add_flag("--clamp25", lb_args.clamp25,
               "clamp all submissions to 2..5 before evaluating");
  lb->add_flag("--strict", lb_args.strict,
               "nonzero exit if any submission is unparsable");
  lb->add_flag("--json", lb_args.json, "machine-readable output");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return e.get_exit_code() == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*eval) return run_evaluate(eval_args);
    if (*score) return run_score(score_args);
    if (*train) return run_train(train_args);
    if (*best) return run_best_constant(bc_truth, bc_measure);
    if (*lb) return run_leaderboard(lb_args);
  } catch (const ts::CoverageError& e) {
    print_coverage_error(e);
    return kExitCoverage;
  } catch (const ts::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  }
  return kExitUsage;
}
