#pragma once

#include <array>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "triplescore/core.hpp"
#include "triplescore/ingest.hpp"

namespace ts {

// Training hyperparameters, loadable from a key=value config file.
struct TrainConfig {
  int max_path_length = 3;       // L
  double lambda = 0.01;          // L2 regularization strength
  int iterations = 500;          // gradient descent iterations
  double step_size = 0.5;        // gradient descent step
  double frequency_grid_step = 0.01;
  double ensemble_grid_step = 0.05;
};

TrainConfig parse_config(std::istream& in);
TrainConfig parse_config_file(const std::string& path);

// ---------------------------------------------------------------------------
// Constant baseline
// ---------------------------------------------------------------------------

// Score 5 for every triple.
Score baseline_score(const Triple& t);

// ---------------------------------------------------------------------------
// Corpus-frequency scorer
// ---------------------------------------------------------------------------

// Per-predicate non-decreasing cut points on the evidence ratio. A ratio r
// maps to score #{k : t_k <= r}. A cut point above 1.0 means that score
// level is never awarded.
class FrequencyCalibration {
 public:
  static constexpr int kCuts = 7;

  void set(Predicate p, const std::array<double, kCuts>& thresholds);
  const std::array<double, kCuts>* find(Predicate p) const;

 private:
  std::array<std::optional<std::array<double, kCuts>>, 2> per_predicate_;
};

// Fraction of the subject's sentences containing any trigger word of
// `object` (case-insensitive, word boundaries). nullopt if the subject has
// no sentences.
std::optional<double> evidence_ratio(const std::string& subject,
                                     const std::string& object,
                                     const SentenceCorpus& corpus,
                                     const TriggerLexicon& lexicon);

// Buckets the ratio under the calibration. Subjects absent from the corpus
// score 2. Throws ValidationError if the predicate has no calibration.
Score frequency_score(const Triple& t, const SentenceCorpus& corpus,
                      const TriggerLexicon& lexicon,
                      const FrequencyCalibration& cal);

struct FrequencyFitResult {
  FrequencyCalibration calibration;
  double training_asd = 0.0;
};

// Chooses per-predicate thresholds minimizing training ASD over monotone
// cut tuples on the grid (default step 0.01); ties break to the smallest
// thresholds. Subjects absent from the corpus contribute a constant and
// are ignored during fitting.
FrequencyFitResult fit_frequency_calibration(const ScoreTable& train,
                                             const SentenceCorpus& corpus,
                                             const TriggerLexicon& lexicon,
                                             const TrainConfig& config = {});

// ---------------------------------------------------------------------------
// Relation-path classifier
// ---------------------------------------------------------------------------

// All simple directed paths from subject to object of length <= max_len,
// as relation-label sequences, lexicographically sorted and deduplicated.
std::vector<std::vector<std::string>> extract_paths(
    const RelationGraph& g, const std::string& subject,
    const std::string& object, int max_len);

// Feature key: path labels joined with a single space.
std::string path_feature_key(const std::vector<std::string>& labels);

// Sparse linear classifier over path features with a logistic link.
// Probabilities map to scores via round(7 * p), half away from zero.
struct PathModel {
  std::map<std::string, double> weights;  // sorted feature order
  double bias = 0.0;
  int max_path_length = 3;
  double lambda = 0.01;
};

// Regularized logistic regression problem on binary features; the pieces
// are public so the analytic gradient can be checked independently.
struct LogisticProblem {
  std::vector<std::vector<std::size_t>> rows;  // active feature indices
  std::vector<int> labels;                     // 0/1
  std::size_t feature_count = 0;
  double lambda = 0.0;
};

// Mean log-loss plus (lambda/2)*||w||^2 (bias unregularized).
double logistic_loss(const LogisticProblem& prob, std::span<const double> w,
                     double bias);

// Analytic gradient of logistic_loss; grad_w must have feature_count slots.
void logistic_gradient(const LogisticProblem& prob, std::span<const double> w,
                       double bias, std::span<double> grad_w,
                       double& grad_bias);

struct PathTrainResult {
  PathModel model;
  double training_accuracy = 0.0;     // high/low label accuracy
  std::vector<double> loss_history;   // loss after each iteration
};

// Labels: high iff truth score >= 4. Deterministic full-batch gradient
// descent with the config's fixed iteration count and step size. Throws
// DegenerateModelError when no training triple has any path feature.
PathTrainResult train_path_model(const ScoreTable& train,
                                 const RelationGraph& g,
                                 const TrainConfig& config = {});

// p = logistic(w.x + b); score = round(7 * p), half away from zero.
Score path_score(const Triple& t, const PathModel& m, const RelationGraph& g);

// Underlying probability, exposed for diagnostics.
double path_probability(const Triple& t, const PathModel& m,
                        const RelationGraph& g);

// ---------------------------------------------------------------------------
// Ensemble
// ---------------------------------------------------------------------------

struct EnsembleModel {
  std::vector<std::string> component_ids;  // ordered
  std::vector<double> weights;             // non-negative, sums to 1
};

void validate(const EnsembleModel& m);

// round(sum w_i * s_i) half away from zero, clipped to 0..7.
Score ensemble_score(std::span<const Score> component_scores,
                     const EnsembleModel& m);

struct EnsembleFitResult {
  EnsembleModel model;
  double training_asd = 0.0;
};

// Grid search over the weight simplex (default step 0.05) minimizing
// training ASD. Enumeration assigns units to the first component from all
// down to none, then recurses; the first optimum found wins ties.
EnsembleFitResult fit_ensemble(
    const ScoreTable& train,
    const std::vector<std::pair<std::string, const ScoreTable*>>& components,
    const TrainConfig& config = {});

// ---------------------------------------------------------------------------
// Trigger-word post-processing
// ---------------------------------------------------------------------------

// Promote to max(5, s) if the first sentence contains a trigger word of
// t.object; demote to min(2, s) if the whole paragraph contains none;
// otherwise unchanged. Empty paragraph -> unchanged.
Score trigger_postprocess(const Triple& t, Score s,
                          std::span<const std::string> paragraph_sentences,
                          const TriggerLexicon& lexicon);

// ---------------------------------------------------------------------------
// Pipeline
// ---------------------------------------------------------------------------

enum class Method { baseline, frequency, paths, ensemble };

std::optional<Method> parse_method(std::string_view s);
std::string_view to_string(Method m);

struct PipelineInputs {
  const SentenceCorpus* corpus = nullptr;
  const ParagraphStore* paragraphs = nullptr;
  const TriggerLexicon* lexicon = nullptr;
  const RelationGraph* graph = nullptr;
  const FrequencyCalibration* calibration = nullptr;
  const PathModel* path_model = nullptr;
  const EnsembleModel* ensemble_model = nullptr;
  bool post_triggers = false;
};

// The paragraph used by the trigger rules: the subject's stored lead
// paragraph, or its first 5 corpus sentences when no paragraph exists.
std::vector<std::string> paragraph_sentences_for(
    const std::string& subject, const PipelineInputs& in);

// Scores every triple with the chosen method, then optionally applies the
// trigger rules. Deterministic.
ScoreTable run_pipeline(const std::vector<Triple>& triples, Method method,
                        const PipelineInputs& in);

}  // namespace ts
