#pragma once

#include <cstddef>
#include <optional>
#include <string>

#include "triplescore/core.hpp"

namespace ts {

enum class Measure { acc, asd, tau };

std::string_view to_string(Measure m);
std::optional<Measure> parse_measure(std::string_view s);

// Throws CoverageError unless pred has a score for every truth triple.
void check_coverage(const ScoreTable& pred, const ScoreTable& truth);

// Fraction of truth triples with |pred - truth| <= 2.
double acc(const ScoreTable& pred, const ScoreTable& truth);

// Mean absolute score difference over truth triples.
double asd(const ScoreTable& pred, const ScoreTable& truth);

// Mean per-(subject, predicate) Kendall rank distance in [0, 1], lower is
// better. Groups need >= 2 items; a pair tied in exactly one table
// contributes 0.5. Throws UndefinedMeasureError when no group qualifies.
double tau(const ScoreTable& pred, const ScoreTable& truth);

// Every score replaced by min(5, max(2, s)); the triple set is unchanged.
ScoreTable clamp_2_5(const ScoreTable& pred);

// The constant score in 0..7 optimizing the measure (acc or asd only)
// against truth; ties break to the smallest score.
Score best_constant(const ScoreTable& truth, Measure measure);

// acc/asd/tau over one subset of the triples. tau (and for an empty
// subset, acc/asd) may be undefined.
struct MeasureSet {
  std::optional<double> acc;
  std::optional<double> asd;
  std::optional<double> tau;
  std::size_t triple_count = 0;
  std::size_t group_count = 0;
};

struct EvaluationReport {
  double acc = 0.0;
  double asd = 0.0;
  double tau = 0.0;
  std::size_t triple_count = 0;
  std::size_t group_count = 0;
  MeasureSet profession;
  MeasureSet nationality;
  bool clamped = false;
};

struct EvaluateOptions {
  bool clamp = false;
};

EvaluationReport evaluate(const ScoreTable& pred, const ScoreTable& truth,
                          const EvaluateOptions& options = {});

// Human-readable report; measures printed with 3 decimals.
std::string render_report_text(const EvaluationReport& report,
                               bool per_predicate);

// Machine-readable report with stable keys: acc, asd, tau, triple_count,
// group_count, per_predicate.
std::string render_report_json(const EvaluationReport& report);

}  // namespace ts
