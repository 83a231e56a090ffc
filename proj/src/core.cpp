#include "triplescore/core.hpp"

#include <cmath>
#include <cstdio>

namespace ts {

std::string_view to_string(Predicate p) {
  switch (p) {
    case Predicate::profession:
      return "profession";
    case Predicate::nationality:
      return "nationality";
  }
  return "?";
}

std::optional<Predicate> parse_predicate(std::string_view s) {
  if (s == "profession") return Predicate::profession;
  if (s == "nationality") return Predicate::nationality;
  return std::nullopt;
}

std::string Triple::to_tsv() const {
  std::string out = subject;
  out += '\t';
  out += to_string(predicate);
  out += '\t';
  out += object;
  return out;
}

std::size_t TripleHash::operator()(const Triple& t) const {
  std::hash<std::string> h;
  std::size_t seed = h(t.subject);
  seed ^= static_cast<std::size_t>(t.predicate) + 0x9e3779b97f4a7c15ULL +
          (seed << 6) + (seed >> 2);
  seed ^= h(t.object) + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2);
  return seed;
}

namespace {

void check_name(const std::string& s, const char* field) {
  if (s.empty())
    throw ValidationError(std::string(field) + " must be non-empty");
  if (s.find('\t') != std::string::npos ||
      s.find('\n') != std::string::npos ||
      s.find('\r') != std::string::npos)
    throw ValidationError(std::string(field) +
                          " must not contain tab or newline: " + s);
}

}  // namespace

Triple make_triple(std::string subject, Predicate predicate,
                   std::string object) {
  check_name(subject, "subject");
  check_name(object, "object");
  return Triple{std::move(subject), predicate, std::move(object)};
}

Score score_from_judgments(const JudgmentSet& j) {
  int sum = 0;
  for (int v : j) {
    if (v != 0 && v != 1)
      throw ValidationError("judgment must be 0 or 1, got " +
                            std::to_string(v));
    sum += v;
  }
  return Score(sum);
}

Score score_from_judgments(const std::vector<int>& j) {
  if (j.size() != 7)
    throw ValidationError("judgment set must have exactly 7 entries, got " +
                          std::to_string(j.size()));
  JudgmentSet a{};
  for (std::size_t i = 0; i < 7; ++i) a[i] = j[i];
  return score_from_judgments(a);
}

double normalize_score(Score s) { return s.value() / 7.0; }

std::string render_normalized(Score s) {
  // std::round is half-away-from-zero.
  double hundredths = std::round(normalize_score(s) * 100.0);
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%.2f", hundredths / 100.0);
  return buf;
}

bool ScoreTable::insert(Triple t, Score s) {
  auto [it, inserted] = index_.emplace(t, entries_.size());
  if (!inserted) return false;
  entries_.emplace_back(std::move(t), s);
  return true;
}

std::optional<Score> ScoreTable::find(const Triple& t) const {
  auto it = index_.find(t);
  if (it == index_.end()) return std::nullopt;
  return entries_[it->second].second;
}

bool TriplesKB::insert(Triple t) {
  auto [it, inserted] = index_.insert(t);
  if (!inserted) return false;
  triples_.push_back(std::move(t));
  return true;
}

}  // namespace ts
