#include "triplescore/scorers.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>

#include "triplescore/text.hpp"

namespace ts {

namespace {

// Round half away from zero for non-negative v, tolerant of grid weights
// that are not exactly representable in binary.
int round_score(double v) {
  int s = static_cast<int>(std::floor(v + 0.5 + 1e-9));
  return std::min(Score::kMax, std::max(Score::kMin, s));
}

bool sentence_has_trigger(
    const std::string& sentence,
    const std::vector<std::vector<std::string>>& triggers) {
  std::vector<std::string> tokens = tokenize(sentence);
  for (const auto& trigger : triggers)
    if (contains_sequence(tokens, trigger)) return true;
  return false;
}

}  // namespace

TrainConfig parse_config(std::istream& in) {
  TrainConfig config;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    std::size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw ParseError("expected key=value", line_no);
    std::string key = line.substr(0, eq);
    std::string value = line.substr(eq + 1);
    try {
      if (key == "L")
        config.max_path_length = std::stoi(value);
      else if (key == "lambda")
        config.lambda = std::stod(value);
      else if (key == "iterations")
        config.iterations = std::stoi(value);
      else if (key == "step_size")
        config.step_size = std::stod(value);
      else if (key == "frequency_grid_step")
        config.frequency_grid_step = std::stod(value);
      else if (key == "ensemble_grid_step")
        config.ensemble_grid_step = std::stod(value);
      else
        throw ParseError("unknown config key '" + key + "'", line_no);
    } catch (const std::invalid_argument&) {
      throw ParseError("bad value for '" + key + "': " + value, line_no);
    } catch (const std::out_of_range&) {
      throw ParseError("bad value for '" + key + "': " + value, line_no);
    }
  }
  if (config.max_path_length < 1)
    throw ValidationError("L must be >= 1");
  if (config.lambda <= 0.0)
    throw ValidationError("lambda must be > 0");
  if (config.iterations < 1 || config.step_size <= 0.0)
    throw ValidationError("iterations and step_size must be positive");
  if (config.frequency_grid_step <= 0.0 || config.frequency_grid_step > 1.0 ||
      config.ensemble_grid_step <= 0.0 || config.ensemble_grid_step > 1.0)
    throw ValidationError("grid steps must be in (0, 1]");
  return config;
}

TrainConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open file: " + path);
  return parse_config(in);
}

Score baseline_score(const Triple&) { return Score(5); }

void FrequencyCalibration::set(Predicate p,
                               const std::array<double, kCuts>& thresholds) {
  for (int k = 1; k < kCuts; ++k)
    if (thresholds[k] < thresholds[k - 1])
      throw ValidationError("calibration thresholds must be non-decreasing");
  per_predicate_[static_cast<std::size_t>(p)] = thresholds;
}

const std::array<double, FrequencyCalibration::kCuts>*
FrequencyCalibration::find(Predicate p) const {
  const auto& slot = per_predicate_[static_cast<std::size_t>(p)];
  return slot ? &*slot : nullptr;
}

std::optional<double> evidence_ratio(const std::string& subject,
                                     const std::string& object,
                                     const SentenceCorpus& corpus,
                                     const TriggerLexicon& lexicon) {
  const std::vector<std::string>* sentences = corpus.find(subject);
  if (!sentences || sentences->empty()) return std::nullopt;
  static const std::vector<std::vector<std::string>> kNoTriggers;
  const auto* triggers = lexicon.find(object);
  if (!triggers) triggers = &kNoTriggers;
  std::size_t matching = 0;
  for (const std::string& sentence : *sentences)
    matching += sentence_has_trigger(sentence, *triggers);
  return static_cast<double>(matching) /
         static_cast<double>(sentences->size());
}

namespace {

int bucket_ratio(double ratio, const std::array<double, 7>& thresholds) {
  int score = 0;
  for (double t : thresholds) score += t <= ratio + 1e-9;
  return score;
}

}  // namespace

Score frequency_score(const Triple& t, const SentenceCorpus& corpus,
                      const TriggerLexicon& lexicon,
                      const FrequencyCalibration& cal) {
  const auto* thresholds = cal.find(t.predicate);
  if (!thresholds)
    throw ValidationError(std::string("no frequency calibration for ") +
                          std::string(to_string(t.predicate)));
  std::optional<double> ratio =
      evidence_ratio(t.subject, t.object, corpus, lexicon);
  if (!ratio) return Score(2);  // subject absent from the corpus
  return Score(bucket_ratio(*ratio, *thresholds));
}

namespace {

// Minimum-ASD monotone bucketing of grid-quantized ratios into 0..7.
// dp over grid cells; among optima, the pointwise-maximal level function
// is selected, which yields the smallest threshold tuple.
std::optional<std::array<double, 7>> fit_thresholds(
    const std::vector<std::pair<int, int>>& items,  // (grid index, truth)
    int grid_cells, double step) {
  if (items.empty()) return std::nullopt;
  constexpr int kLevels = 8;
  const int n = grid_cells + 1;  // grid indices 0..grid_cells

  // cost[K][v] = sum over items at grid index K of |v - truth|
  std::vector<std::array<long long, kLevels>> cost(
      n, std::array<long long, kLevels>{});
  for (auto [k, truth] : items)
    for (int v = 0; v < kLevels; ++v)
      cost[k][v] += std::abs(v - truth);

  // fwd[K][v]: min cost of indices 0..K with level v at K (non-decreasing)
  // bwd[K][v]: min cost of indices K..n-1 with level v at K
  std::vector<std::array<long long, kLevels>> fwd(cost), bwd(cost);
  for (int k = 1; k < n; ++k) {
    long long best = std::numeric_limits<long long>::max();
    for (int v = 0; v < kLevels; ++v) {
      best = std::min(best, fwd[k - 1][v]);
      fwd[k][v] += best;
    }
  }
  for (int k = n - 2; k >= 0; --k) {
    long long best = std::numeric_limits<long long>::max();
    for (int v = kLevels - 1; v >= 0; --v) {
      best = std::min(best, bwd[k + 1][v]);
      bwd[k][v] += best;
    }
  }
  long long opt = *std::min_element(bwd[0].begin(), bwd[0].end());

  // suffix_ge[K][v] = min over levels >= v of bwd[K][.]
  auto suffix_ge = [&](int k, int v) {
    if (k >= n) return 0LL;
    long long best = std::numeric_limits<long long>::max();
    for (int u = v; u < kLevels; ++u) best = std::min(best, bwd[k][u]);
    return best;
  };

  std::array<int, 7> cut_index;
  cut_index.fill(n);  // n = one past the grid: level never awarded
  for (int k = 0; k < n; ++k) {
    int level = 0;
    for (int v = kLevels - 1; v >= 0; --v) {
      if (fwd[k][v] + suffix_ge(k + 1, v) == opt) {
        level = v;
        break;
      }
    }
    for (int j = 1; j <= level; ++j)
      cut_index[j - 1] = std::min(cut_index[j - 1], k);
  }

  std::array<double, 7> thresholds;
  for (int j = 0; j < 7; ++j) thresholds[j] = cut_index[j] * step;
  return thresholds;
}

}  // namespace

FrequencyFitResult fit_frequency_calibration(const ScoreTable& train,
                                             const SentenceCorpus& corpus,
                                             const TriggerLexicon& lexicon,
                                             const TrainConfig& config) {
  if (train.empty())
    throw ValidationError("frequency calibration requires training data");

  const double step = config.frequency_grid_step;
  const int grid_cells = static_cast<int>(std::llround(1.0 / step));
  auto grid_index = [&](double ratio) {
    int k = static_cast<int>(std::floor(ratio / step + 1e-9));
    return std::min(grid_cells, std::max(0, k));
  };

  std::array<std::vector<std::pair<int, int>>, 2> items;
  for (const auto& [t, truth] : train.entries()) {
    std::optional<double> ratio =
        evidence_ratio(t.subject, t.object, corpus, lexicon);
    if (!ratio) continue;  // fixed score 2, independent of thresholds
    items[static_cast<std::size_t>(t.predicate)].emplace_back(
        grid_index(*ratio), truth.value());
  }

  FrequencyFitResult result;
  for (Predicate p : {Predicate::profession, Predicate::nationality}) {
    auto thresholds =
        fit_thresholds(items[static_cast<std::size_t>(p)], grid_cells, step);
    if (thresholds) result.calibration.set(p, *thresholds);
  }

  long long abs_sum = 0;
  for (const auto& [t, truth] : train.entries()) {
    int predicted = 2;
    std::optional<double> ratio =
        evidence_ratio(t.subject, t.object, corpus, lexicon);
    if (ratio) {
      const auto* thresholds = result.calibration.find(t.predicate);
      predicted = bucket_ratio(*ratio, *thresholds);
    }
    abs_sum += std::abs(predicted - truth.value());
  }
  result.training_asd =
      static_cast<double>(abs_sum) / static_cast<double>(train.size());
  return result;
}

void validate(const EnsembleModel& m) {
  if (m.component_ids.size() != m.weights.size())
    throw ValidationError("ensemble component/weight count mismatch");
  if (m.weights.empty())
    throw ValidationError("ensemble must have at least one component");
  double sum = 0.0;
  for (double w : m.weights) {
    if (!(w >= 0.0)) throw ValidationError("ensemble weights must be >= 0");
    sum += w;
  }
  if (std::abs(sum - 1.0) > 1e-9)
    throw ValidationError("ensemble weights must sum to 1");
}

Score ensemble_score(std::span<const Score> component_scores,
                     const EnsembleModel& m) {
  validate(m);
  if (component_scores.size() != m.weights.size())
    throw ValidationError("component score count does not match ensemble");
  double v = 0.0;
  for (std::size_t i = 0; i < m.weights.size(); ++i)
    v += m.weights[i] * component_scores[i].value();
  return Score(round_score(v));
}

namespace {

// Weighted score with integer weight units, rounded half away from zero.
int unit_score(std::span<const int> units, std::span<const int> scores,
               int total_units) {
  long long sum = 0;
  for (std::size_t i = 0; i < units.size(); ++i)
    sum += static_cast<long long>(units[i]) * scores[i];
  return static_cast<int>((2 * sum + total_units) / (2 * total_units));
}

}  // namespace

EnsembleFitResult fit_ensemble(
    const ScoreTable& train,
    const std::vector<std::pair<std::string, const ScoreTable*>>& components,
    const TrainConfig& config) {
  if (train.empty())
    throw ValidationError("ensemble fitting requires training data");
  if (components.empty())
    throw ValidationError("ensemble fitting requires components");

  const std::size_t k = components.size();
  const std::size_t n = train.size();
  const int total_units =
      static_cast<int>(std::llround(1.0 / config.ensemble_grid_step));

  // Per-component score column aligned with train order.
  std::vector<std::vector<int>> columns(k, std::vector<int>(n));
  std::vector<int> truth_column(n);
  for (std::size_t c = 0; c < k; ++c) {
    std::size_t i = 0;
    for (const auto& [t, truth] : train.entries()) {
      auto s = components[c].second->find(t);
      if (!s)
        throw CoverageError("component '" + components[c].first +
                                "' missing triple: " + t.to_tsv(),
                            {t.to_tsv()});
      columns[c][i++] = s->value();
    }
  }
  {
    std::size_t i = 0;
    for (const auto& [t, truth] : train.entries())
      truth_column[i++] = truth.value();
  }

  std::vector<int> units(k, 0);
  std::vector<int> best_units;
  long long best_cost = std::numeric_limits<long long>::max();
  std::vector<int> row_scores(k);

  // Units for component c from `remaining` down to 0; the last component
  // takes the remainder. First optimum found wins ties.
  auto recurse = [&](auto&& self, std::size_t c, int remaining) -> void {
    if (c + 1 == k) {
      units[c] = remaining;
      long long cost = 0;
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < k; ++j) row_scores[j] = columns[j][i];
        cost += std::abs(unit_score(units, row_scores, total_units) -
                         truth_column[i]);
      }
      if (cost < best_cost) {
        best_cost = cost;
        best_units = units;
      }
      return;
    }
    for (int u = remaining; u >= 0; --u) {
      units[c] = u;
      self(self, c + 1, remaining - u);
    }
  };
  recurse(recurse, 0, total_units);

  EnsembleFitResult result;
  for (std::size_t c = 0; c < k; ++c) {
    result.model.component_ids.push_back(components[c].first);
    result.model.weights.push_back(static_cast<double>(best_units[c]) /
                                   total_units);
  }
  result.training_asd =
      static_cast<double>(best_cost) / static_cast<double>(n);
  return result;
}

Score trigger_postprocess(const Triple& t, Score s,
                          std::span<const std::string> paragraph_sentences,
                          const TriggerLexicon& lexicon) {
  if (paragraph_sentences.empty()) return s;
  static const std::vector<std::vector<std::string>> kNoTriggers;
  const auto* triggers = lexicon.find(t.object);
  if (!triggers) triggers = &kNoTriggers;

  if (sentence_has_trigger(paragraph_sentences.front(), *triggers))
    return Score(std::max(5, s.value()));
  for (const std::string& sentence : paragraph_sentences.subspan(1))
    if (sentence_has_trigger(sentence, *triggers)) return s;
  return Score(std::min(2, s.value()));
}

std::optional<Method> parse_method(std::string_view s) {
  if (s == "baseline") return Method::baseline;
  if (s == "frequency") return Method::frequency;
  if (s == "paths") return Method::paths;
  if (s == "ensemble") return Method::ensemble;
  return std::nullopt;
}

std::string_view to_string(Method m) {
  switch (m) {
    case Method::baseline:
      return "baseline";
    case Method::frequency:
      return "frequency";
    case Method::paths:
      return "paths";
    case Method::ensemble:
      return "ensemble";
  }
  return "?";
}

std::vector<std::string> paragraph_sentences_for(const std::string& subject,
                                                 const PipelineInputs& in) {
  if (in.paragraphs) {
    const std::string* paragraph = in.paragraphs->find(subject);
    if (paragraph) return split_sentences(*paragraph);
  }
  if (in.corpus) {
    const auto* sentences = in.corpus->find(subject);
    if (sentences) {
      std::size_t n = std::min<std::size_t>(5, sentences->size());
      return {sentences->begin(), sentences->begin() + n};
    }
  }
  return {};
}

namespace {

Score component_score(const Triple& t, Method method,
                      const PipelineInputs& in) {
  switch (method) {
    case Method::baseline:
      return baseline_score(t);
    case Method::frequency:
      if (!in.corpus || !in.lexicon || !in.calibration)
        throw ValidationError(
            "frequency scoring needs sentences, triggers and a model");
      return frequency_score(t, *in.corpus, *in.lexicon, *in.calibration);
    case Method::paths:
      if (!in.graph || !in.path_model)
        throw ValidationError("path scoring needs a graph and a model");
      return path_score(t, *in.path_model, *in.graph);
    case Method::ensemble:
      break;
  }
  throw ValidationError("ensemble cannot be an ensemble component");
}

}  // namespace

ScoreTable run_pipeline(const std::vector<Triple>& triples, Method method,
                        const PipelineInputs& in) {
  const EnsembleModel* ensemble = nullptr;
  if (method == Method::ensemble) {
    if (!in.ensemble_model)
      throw ValidationError("ensemble scoring needs an ensemble model");
    validate(*in.ensemble_model);
    ensemble = in.ensemble_model;
  }
  if (in.post_triggers && !in.lexicon)
    throw ValidationError("trigger post-processing needs a trigger lexicon");

  ScoreTable out(TableRole::prediction);
  std::vector<Score> component_scores;
  for (const Triple& t : triples) {
    Score s(0);
    if (ensemble) {
      component_scores.clear();
      for (const std::string& id : ensemble->component_ids) {
        auto m = parse_method(id);
        if (!m || *m == Method::ensemble)
          throw ValidationError("unknown ensemble component '" + id + "'");
        component_scores.push_back(component_score(t, *m, in));
      }
      s = ensemble_score(component_scores, *ensemble);
    } else {
      s = component_score(t, method, in);
    }
    if (in.post_triggers) {
      std::vector<std::string> paragraph =
          paragraph_sentences_for(t.subject, in);
      s = trigger_postprocess(t, s, paragraph, *in.lexicon);
    }
    if (!out.insert(t, s))
      throw ValidationError("duplicate triple in scoring request: " +
                            t.to_tsv());
  }
  return out;
}

}  // namespace ts
