#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "triplescore/errors.hpp"

namespace ts {

// The two type-like relations. Closed enumeration: nothing else parses.
enum class Predicate : std::uint8_t { profession, nationality };

std::string_view to_string(Predicate p);
std::optional<Predicate> parse_predicate(std::string_view s);

// Integer relevance degree in 0..7.
class Score {
 public:
  static constexpr int kMin = 0;
  static constexpr int kMax = 7;

  explicit Score(int value) : value_(value) {
    if (value < kMin || value > kMax)
      throw ValidationError("score out of range 0..7: " +
                            std::to_string(value));
  }

  int value() const { return value_; }

  auto operator<=>(const Score&) const = default;

 private:
  int value_;
};

// (subject, predicate, object). Equality is exact byte equality.
struct Triple {
  std::string subject;
  Predicate predicate;
  std::string object;

  auto operator<=>(const Triple&) const = default;

  // "subject <TAB> predicate <TAB> object", the on-disk key.
  std::string to_tsv() const;
};

struct TripleHash {
  std::size_t operator()(const Triple& t) const;
};

// Validates the field invariants (non-empty, no tab/newline).
Triple make_triple(std::string subject, Predicate predicate,
                   std::string object);

// Exactly 7 binary crowd judgments.
using JudgmentSet = std::array<int, 7>;

Score score_from_judgments(const JudgmentSet& j);

// Validating constructor from raw input (length and 0/1 checks).
Score score_from_judgments(const std::vector<int>& j);

// s / 7, before any display rounding.
double normalize_score(Score s);

// Two-decimal rendering of the normalized score, half-away-from-zero
// (3/7 -> "0.43").
std::string render_normalized(Score s);

enum class TableRole : std::uint8_t { ground_truth, prediction };

// A score per triple, in file order. Duplicate triples are rejected.
class ScoreTable {
 public:
  explicit ScoreTable(TableRole role) : role_(role) {}

  TableRole role() const { return role_; }
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }

  // False if the triple is already present.
  bool insert(Triple t, Score s);

  std::optional<Score> find(const Triple& t) const;
  bool contains(const Triple& t) const { return find(t).has_value(); }

  const std::vector<std::pair<Triple, Score>>& entries() const {
    return entries_;
  }

 private:
  TableRole role_;
  std::vector<std::pair<Triple, Score>> entries_;
  std::unordered_map<Triple, std::size_t, TripleHash> index_;
};

// Duplicate-free set of KB triples, in file order.
class TriplesKB {
 public:
  // False if already present.
  bool insert(Triple t);

  std::size_t size() const { return triples_.size(); }
  bool contains(const Triple& t) const { return index_.contains(t); }
  const std::vector<Triple>& triples() const { return triples_; }

 private:
  std::vector<Triple> triples_;
  std::unordered_set<Triple, TripleHash> index_;
};

}  // namespace ts
