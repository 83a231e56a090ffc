#include "triplescore/metrics.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <unordered_map>
#include <utility>
#include <vector>

#include <json.hpp>

namespace ts {

namespace {

int sign(int v) { return (v > 0) - (v < 0); }

Score must_find(const ScoreTable& pred, const Triple& t) {
  auto s = pred.find(t);
  if (!s)
    throw CoverageError("prediction missing triple: " + t.to_tsv(),
                        {t.to_tsv()});
  return *s;
}

struct Counts {
  std::size_t within2 = 0;      // |diff| <= 2
  std::size_t abs_diff_sum = 0; // integer sum of |diff|
  std::size_t triples = 0;
};

Counts count_diffs(const ScoreTable& pred, const ScoreTable& truth,
                   std::optional<Predicate> only = std::nullopt) {
  Counts c;
  for (const auto& [t, truth_score] : truth.entries()) {
    if (only && t.predicate != *only) continue;
    int diff = std::abs(must_find(pred, t).value() - truth_score.value());
    c.within2 += diff <= 2;
    c.abs_diff_sum += static_cast<std::size_t>(diff);
    ++c.triples;
  }
  return c;
}

struct TauResult {
  double mean_distance = 0.0;
  std::size_t group_count = 0;
};

// Groups truth triples by (subject, predicate), keeps first-appearance
// order, and averages the normalized pair-disagreement per group.
TauResult tau_impl(const ScoreTable& pred, const ScoreTable& truth,
                   std::optional<Predicate> only = std::nullopt) {
  struct Group {
    std::vector<std::pair<int, int>> items;  // (truth, pred)
  };
  std::unordered_map<std::string, std::size_t> index;
  std::vector<Group> groups;
  for (const auto& [t, truth_score] : truth.entries()) {
    if (only && t.predicate != *only) continue;
    std::string key = t.subject;
    key += '\t';
    key += to_string(t.predicate);
    auto [it, inserted] = index.emplace(std::move(key), groups.size());
    if (inserted) groups.emplace_back();
    groups[it->second].items.emplace_back(truth_score.value(),
                                          must_find(pred, t).value());
  }

  TauResult result;
  double distance_sum = 0.0;
  for (const Group& g : groups) {
    std::size_t n = g.items.size();
    if (n < 2) continue;  // singleton groups carry no ranking information
    // Per pair, in half units: opposed = 2, tied in exactly one table = 1,
    // agreeing or tied in both = 0.
    std::size_t half_units = 0;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        int dt = sign(g.items[i].first - g.items[j].first);
        int dp = sign(g.items[i].second - g.items[j].second);
        if (dt != 0 && dp != 0)
          half_units += dt == dp ? 0 : 2;
        else if (dt != dp)
          half_units += 1;
      }
    }
    std::size_t pairs = n * (n - 1) / 2;
    distance_sum += static_cast<double>(half_units) /
                    (2.0 * static_cast<double>(pairs));
    ++result.group_count;
  }
  if (result.group_count == 0) return result;
  result.mean_distance =
      distance_sum / static_cast<double>(result.group_count);
  return result;
}

}  // namespace

std::string_view to_string(Measure m) {
  switch (m) {
    case Measure::acc:
      return "acc";
    case Measure::asd:
      return "asd";
    case Measure::tau:
      return "tau";
  }
  return "?";
}

std::optional<Measure> parse_measure(std::string_view s) {
  if (s == "acc") return Measure::acc;
  if (s == "asd") return Measure::asd;
  if (s == "tau") return Measure::tau;
  return std::nullopt;
}

void check_coverage(const ScoreTable& pred, const ScoreTable& truth) {
  std::vector<std::string> missing;
  for (const auto& [t, score] : truth.entries())
    if (!pred.contains(t)) missing.push_back(t.to_tsv());
  if (!missing.empty())
    throw CoverageError("prediction missing " +
                            std::to_string(missing.size()) +
                            " ground-truth triple(s)",
                        std::move(missing));
}

double acc(const ScoreTable& pred, const ScoreTable& truth) {
  check_coverage(pred, truth);
  Counts c = count_diffs(pred, truth);
  if (c.triples == 0)
    throw UndefinedMeasureError("ACC undefined on empty ground truth");
  return static_cast<double>(c.within2) / static_cast<double>(c.triples);
}

double asd(const ScoreTable& pred, const ScoreTable& truth) {
  check_coverage(pred, truth);
  Counts c = count_diffs(pred, truth);
  if (c.triples == 0)
    throw UndefinedMeasureError("ASD undefined on empty ground truth");
  return static_cast<double>(c.abs_diff_sum) /
         static_cast<double>(c.triples);
}

double tau(const ScoreTable& pred, const ScoreTable& truth) {
  check_coverage(pred, truth);
  TauResult r = tau_impl(pred, truth);
  if (r.group_count == 0)
    throw UndefinedMeasureError(
        "TAU undefined: no (subject, predicate) group has 2 or more triples");
  return r.mean_distance;
}

ScoreTable clamp_2_5(const ScoreTable& pred) {
  ScoreTable out(pred.role());
  for (const auto& [t, s] : pred.entries())
    out.insert(t, Score(std::min(5, std::max(2, s.value()))));
  return out;
}

Score best_constant(const ScoreTable& truth, Measure measure) {
  if (truth.empty())
    throw ValidationError("best_constant requires a non-empty ground truth");
  if (measure == Measure::tau)
    throw ValidationError("best_constant supports acc and asd only");

  int best = 0;
  long long best_key = std::numeric_limits<long long>::min();
  for (int c = Score::kMin; c <= Score::kMax; ++c) {
    long long key = 0;
    for (const auto& [t, s] : truth.entries()) {
      int diff = std::abs(c - s.value());
      key += measure == Measure::acc ? (diff <= 2) : -diff;
    }
    // Larger key is better for both measures; ties keep the smaller score.
    if (key > best_key) {
      best_key = key;
      best = c;
    }
  }
  return Score(best);
}

EvaluationReport evaluate(const ScoreTable& pred, const ScoreTable& truth,
                          const EvaluateOptions& options) {
  check_coverage(pred, truth);
  const ScoreTable* p = &pred;
  ScoreTable clamped(pred.role());
  if (options.clamp) {
    clamped = clamp_2_5(pred);
    p = &clamped;
  }

  EvaluationReport report;
  report.clamped = options.clamp;
  report.acc = acc(*p, truth);
  report.asd = asd(*p, truth);
  report.tau = tau(*p, truth);
  report.triple_count = truth.size();
  report.group_count = tau_impl(*p, truth).group_count;

  auto subset = [&](Predicate predicate) {
    MeasureSet m;
    Counts c = count_diffs(*p, truth, predicate);
    m.triple_count = c.triples;
    if (c.triples > 0) {
      m.acc = static_cast<double>(c.within2) /
              static_cast<double>(c.triples);
      m.asd = static_cast<double>(c.abs_diff_sum) /
              static_cast<double>(c.triples);
    }
    TauResult r = tau_impl(*p, truth, predicate);
    m.group_count = r.group_count;
    if (r.group_count > 0) m.tau = r.mean_distance;
    return m;
  };
  report.profession = subset(Predicate::profession);
  report.nationality = subset(Predicate::nationality);
  return report;
}

namespace {

std::string fmt3(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3f", v);
  return buf;
}

std::string fmt3_opt(const std::optional<double>& v) {
  return v ? fmt3(*v) : std::string("n/a");
}

nlohmann::json measure_set_json(const MeasureSet& m) {
  auto opt = [](const std::optional<double>& v) {
    return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
  };
  return {{"acc", opt(m.acc)},
          {"asd", opt(m.asd)},
          {"tau", opt(m.tau)},
          {"triple_count", m.triple_count},
          {"group_count", m.group_count}};
}

}  // namespace

std::string render_report_text(const EvaluationReport& report,
                               bool per_predicate) {
  std::string out;
  out += "triples:  " + std::to_string(report.triple_count) + "\n";
  out += "groups:   " + std::to_string(report.group_count) + "\n";
  if (report.clamped) out += "scores clamped to 2..5\n";
  out += "ACC:  " + fmt3(report.acc) + "\n";
  out += "ASD:  " + fmt3(report.asd) + "\n";
  out += "TAU:  " + fmt3(report.tau) +
         "   (ties: 0.5 per one-sided tie; unweighted mean over groups)\n";
  if (per_predicate) {
    auto block = [&](const char* name, const MeasureSet& m) {
      out += std::string(name) + ":  triples " +
             std::to_string(m.triple_count) + ", groups " +
             std::to_string(m.group_count) + ", ACC " + fmt3_opt(m.acc) +
             ", ASD " + fmt3_opt(m.asd) + ", TAU " + fmt3_opt(m.tau) + "\n";
    };
    block("profession ", report.profession);
    block("nationality", report.nationality);
  }
  return out;
}

std::string render_report_json(const EvaluationReport& report) {
  nlohmann::json j{
      {"acc", report.acc},
      {"asd", report.asd},
      {"tau", report.tau},
      {"triple_count", report.triple_count},
      {"group_count", report.group_count},
      {"clamped", report.clamped},
      {"tau_tie_rule", "0.5 per one-sided tie; unweighted mean over groups"},
      {"per_predicate",
       {{"profession", measure_set_json(report.profession)},
        {"nationality", measure_set_json(report.nationality)}}}};
  return j.dump(2);
}

}  // namespace ts
