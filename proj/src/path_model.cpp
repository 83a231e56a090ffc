#include <algorithm>
#include <cmath>
#include <unordered_set>

#include "triplescore/scorers.hpp"

namespace ts {

namespace {

void dfs_paths(const RelationGraph& g, const std::string& node,
               const std::string& object, int remaining,
               std::vector<std::string>& labels,
               std::unordered_set<std::string>& visited,
               std::vector<std::vector<std::string>>& out) {
  if (remaining == 0) return;
  const auto* edges = g.out_edges(node);
  if (!edges) return;
  for (const auto& edge : *edges) {
    labels.push_back(edge.label);
    if (edge.target == object) out.push_back(labels);
    // Simple paths only; the object itself may not be passed through.
    if (edge.target != object && !visited.contains(edge.target)) {
      visited.insert(edge.target);
      dfs_paths(g, edge.target, object, remaining - 1, labels, visited, out);
      visited.erase(edge.target);
    }
    labels.pop_back();
  }
}

double sigmoid(double z) {
  if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
  double e = std::exp(z);
  return e / (1.0 + e);
}

// log(1 + exp(z)) without overflow
double log1pexp(double z) {
  if (z > 0) return z + std::log1p(std::exp(-z));
  return std::log1p(std::exp(z));
}

}  // namespace

std::vector<std::vector<std::string>> extract_paths(
    const RelationGraph& g, const std::string& subject,
    const std::string& object, int max_len) {
  if (max_len < 1) throw ValidationError("max path length must be >= 1");
  std::vector<std::vector<std::string>> out;
  if (subject == object) return out;
  std::vector<std::string> labels;
  std::unordered_set<std::string> visited{subject};
  dfs_paths(g, subject, object, max_len, labels, visited, out);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::string path_feature_key(const std::vector<std::string>& labels) {
  std::string key;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (i > 0) key += ' ';
    key += labels[i];
  }
  return key;
}

double logistic_loss(const LogisticProblem& prob, std::span<const double> w,
                     double bias) {
  double loss = 0.0;
  for (std::size_t i = 0; i < prob.rows.size(); ++i) {
    double z = bias;
    for (std::size_t f : prob.rows[i]) z += w[f];
    // -y*log(p) - (1-y)*log(1-p) = log1pexp(z) - y*z
    loss += log1pexp(z) - prob.labels[i] * z;
  }
  loss /= static_cast<double>(prob.rows.size());
  double reg = 0.0;
  for (double wf : w) reg += wf * wf;
  return loss + 0.5 * prob.lambda * reg;
}

void logistic_gradient(const LogisticProblem& prob, std::span<const double> w,
                       double bias, std::span<double> grad_w,
                       double& grad_bias) {
  std::fill(grad_w.begin(), grad_w.end(), 0.0);
  grad_bias = 0.0;
  double inv_n = 1.0 / static_cast<double>(prob.rows.size());
  for (std::size_t i = 0; i < prob.rows.size(); ++i) {
    double z = bias;
    for (std::size_t f : prob.rows[i]) z += w[f];
    double residual = (sigmoid(z) - prob.labels[i]) * inv_n;
    for (std::size_t f : prob.rows[i]) grad_w[f] += residual;
    grad_bias += residual;
  }
  for (std::size_t f = 0; f < grad_w.size(); ++f)
    grad_w[f] += prob.lambda * w[f];
}

PathTrainResult train_path_model(const ScoreTable& train,
                                 const RelationGraph& g,
                                 const TrainConfig& config) {
  if (train.empty())
    throw ValidationError("path model training requires training data");

  // Feature space: every path key seen in the training triples, sorted.
  std::vector<std::vector<std::string>> row_keys;
  std::unordered_set<std::string> seen;
  std::vector<std::string> features;
  LogisticProblem prob;
  prob.lambda = config.lambda;
  for (const auto& [t, truth] : train.entries()) {
    auto paths = extract_paths(g, t.subject, t.object,
                               config.max_path_length);
    std::vector<std::string> keys;
    keys.reserve(paths.size());
    for (const auto& path : paths) {
      std::string key = path_feature_key(path);
      if (seen.insert(key).second) features.push_back(key);
      keys.push_back(std::move(key));
    }
    row_keys.push_back(std::move(keys));
    prob.labels.push_back(truth.value() >= 4 ? 1 : 0);
  }
  if (features.empty())
    throw DegenerateModelError(
        "no training triple has any path feature; cannot train");
  std::sort(features.begin(), features.end());

  std::unordered_map<std::string, std::size_t> feature_index;
  for (std::size_t i = 0; i < features.size(); ++i)
    feature_index.emplace(features[i], i);
  prob.feature_count = features.size();
  for (auto& keys : row_keys) {
    std::vector<std::size_t> row;
    row.reserve(keys.size());
    for (const auto& key : keys) row.push_back(feature_index.at(key));
    std::sort(row.begin(), row.end());
    prob.rows.push_back(std::move(row));
  }

  std::vector<double> w(prob.feature_count, 0.0);
  double bias = 0.0;
  std::vector<double> grad_w(prob.feature_count, 0.0);
  double grad_bias = 0.0;

  PathTrainResult result;
  result.loss_history.reserve(static_cast<std::size_t>(config.iterations));
  for (int iter = 0; iter < config.iterations; ++iter) {
    logistic_gradient(prob, w, bias, grad_w, grad_bias);
    for (std::size_t f = 0; f < w.size(); ++f)
      w[f] -= config.step_size * grad_w[f];
    bias -= config.step_size * grad_bias;
    result.loss_history.push_back(logistic_loss(prob, w, bias));
  }

  result.model.bias = bias;
  result.model.max_path_length = config.max_path_length;
  result.model.lambda = config.lambda;
  for (std::size_t i = 0; i < features.size(); ++i)
    result.model.weights.emplace(features[i], w[i]);

  std::size_t correct = 0;
  for (std::size_t i = 0; i < prob.rows.size(); ++i) {
    double z = bias;
    for (std::size_t f : prob.rows[i]) z += w[f];
    correct += (sigmoid(z) >= 0.5 ? 1 : 0) == prob.labels[i];
  }
  result.training_accuracy =
      static_cast<double>(correct) / static_cast<double>(prob.rows.size());
  return result;
}

double path_probability(const Triple& t, const PathModel& m,
                        const RelationGraph& g) {
  double z = m.bias;
  for (const auto& path :
       extract_paths(g, t.subject, t.object, m.max_path_length)) {
    auto it = m.weights.find(path_feature_key(path));
    if (it != m.weights.end()) z += it->second;
  }
  return sigmoid(z);
}

Score path_score(const Triple& t, const PathModel& m,
                 const RelationGraph& g) {
  double p = path_probability(t, m, g);
  int s = static_cast<int>(std::llround(7.0 * p));
  return Score(std::min(Score::kMax, std::max(Score::kMin, s)));
}

}  // namespace ts
