#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <unordered_map>
#include <vector>

#include "triplescore/core.hpp"

namespace ts {

// Per-subject sentences, in file order. Subjects with no sentences are
// absent from the map.
class SentenceCorpus {
 public:
  void add(const std::string& subject, std::string sentence);

  const std::vector<std::string>* find(const std::string& subject) const;
  std::size_t subject_count() const { return by_subject_.size(); }

 private:
  std::unordered_map<std::string, std::vector<std::string>> by_subject_;
};

// Offset index over a sentences.tsv file: constant memory per sentence,
// lines are re-read on demand. Same lookup contract as SentenceCorpus.
class SentenceIndex {
 public:
  explicit SentenceIndex(std::string path);

  // Sentences of `subject` in file order; empty if unknown.
  std::vector<std::string> sentences(const std::string& subject) const;
  bool contains(const std::string& subject) const;
  std::size_t subject_count() const { return offsets_.size(); }

 private:
  std::string path_;
  std::unordered_map<std::string, std::vector<std::streamoff>> offsets_;
};

// At most one lead paragraph per subject.
class ParagraphStore {
 public:
  // False if the subject already has a paragraph.
  bool add(const std::string& subject, std::string paragraph);

  const std::string* find(const std::string& subject) const;
  std::size_t size() const { return by_subject_.size(); }

 private:
  std::unordered_map<std::string, std::string> by_subject_;
};

// Trigger words per type name. Words are stored as lowercased token
// sequences ready for matching.
class TriggerLexicon {
 public:
  // False if the (type, word) pair was already present.
  bool add(const std::string& type, const std::string& word);

  // Token sequences for a type; empty if the type has no triggers.
  const std::vector<std::vector<std::string>>* find(
      const std::string& type) const;
  std::size_t type_count() const { return by_type_.size(); }

 private:
  std::unordered_map<std::string, std::vector<std::vector<std::string>>>
      by_type_;
};

// Directed labeled multigraph with duplicate edges collapsed.
class RelationGraph {
 public:
  struct Edge {
    std::string label;
    std::string target;
    auto operator<=>(const Edge&) const = default;
  };

  // False if the edge already exists.
  bool add_edge(const std::string& source, std::string label,
                std::string target);

  const std::vector<Edge>* out_edges(const std::string& source) const;
  std::size_t edge_count() const { return edge_count_; }

 private:
  std::unordered_map<std::string, std::vector<Edge>> adjacency_;
  std::size_t edge_count_ = 0;
};

struct TriplesParseResult {
  TriplesKB kb;
  std::vector<std::size_t> duplicate_lines;  // 1-based
};

// triples.tsv: subject <TAB> predicate <TAB> object
TriplesParseResult parse_triples(std::istream& in);

// scores.tsv: subject <TAB> predicate <TAB> object <TAB> score(0..7)
// Duplicate triples are hard errors.
ScoreTable parse_scores(std::istream& in, TableRole role);
void write_scores(const ScoreTable& table, std::ostream& out);

// sentences.tsv: subject <TAB> sentence
SentenceCorpus parse_sentences(std::istream& in);

// paragraphs.tsv: subject <TAB> paragraph
ParagraphStore parse_paragraphs(std::istream& in);

// triggers.tsv: type <TAB> word
TriggerLexicon parse_triggers(std::istream& in);

// graph.tsv: source <TAB> relation <TAB> target
RelationGraph parse_graph(std::istream& in);

// File-path conveniences; throw ParseError if the file cannot be opened.
TriplesParseResult parse_triples_file(const std::string& path);
ScoreTable parse_scores_file(const std::string& path, TableRole role);
SentenceCorpus parse_sentences_file(const std::string& path);
ParagraphStore parse_paragraphs_file(const std::string& path);
TriggerLexicon parse_triggers_file(const std::string& path);
RelationGraph parse_graph_file(const std::string& path);
void write_scores_file(const ScoreTable& table, const std::string& path);

}  // namespace ts
