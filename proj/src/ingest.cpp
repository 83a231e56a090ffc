#include "triplescore/ingest.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>
#include <string_view>

#include "triplescore/text.hpp"

namespace ts {

namespace {

// Splits a line on tabs. Column count is validated by the caller.
std::vector<std::string_view> split_tabs(std::string_view line) {
  std::vector<std::string_view> cols;
  std::size_t start = 0;
  while (true) {
    std::size_t tab = line.find('\t', start);
    if (tab == std::string_view::npos) {
      cols.push_back(line.substr(start));
      return cols;
    }
    cols.push_back(line.substr(start, tab - start));
    start = tab + 1;
  }
}

void require_columns(const std::vector<std::string_view>& cols,
                     std::size_t expected, std::size_t line_no) {
  if (cols.size() != expected)
    throw ParseError("expected " + std::to_string(expected) +
                         " tab-separated columns, got " +
                         std::to_string(cols.size()),
                     line_no);
}

Predicate parse_predicate_column(std::string_view s, std::size_t line_no) {
  auto p = parse_predicate(s);
  if (!p)
    throw ParseError("unknown predicate '" + std::string(s) +
                         "' (expected profession or nationality)",
                     line_no);
  return *p;
}

Triple parse_triple_columns(std::string_view subject, std::string_view pred,
                            std::string_view object, std::size_t line_no) {
  try {
    return make_triple(std::string(subject),
                       parse_predicate_column(pred, line_no),
                       std::string(object));
  } catch (const ValidationError& e) {
    throw ParseError(e.what(), line_no);
  }
}

Score parse_score_column(std::string_view s, std::size_t line_no) {
  if (s.size() != 1 || s[0] < '0' || s[0] > '9') {
    // Reject anything that is not a plain decimal integer before the
    // range check, so "07", "+5" and "2.0" fail loudly.
    bool numeric = !s.empty() &&
                   std::all_of(s.begin(), s.end(),
                               [](char c) { return c >= '0' && c <= '9'; });
    if (!numeric)
      throw ParseError("score must be a decimal integer, got '" +
                           std::string(s) + "'",
                       line_no);
  }
  if (s.size() > 1 || s[0] > '7')
    throw ParseError("score out of range 0..7: " + std::string(s), line_no);
  return Score(s[0] - '0');
}

void strip_cr(std::string& line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
}

// Calls fn(line, line_no) for every line; blank trailing line ignored.
template <typename Fn>
void for_each_line(std::istream& in, Fn&& fn) {
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    strip_cr(line);
    fn(line, line_no);
  }
}

std::ifstream open_or_throw(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open file: " + path);
  return in;
}

}  // namespace

void SentenceCorpus::add(const std::string& subject, std::string sentence) {
  by_subject_[subject].push_back(std::move(sentence));
}

const std::vector<std::string>* SentenceCorpus::find(
    const std::string& subject) const {
  auto it = by_subject_.find(subject);
  return it == by_subject_.end() ? nullptr : &it->second;
}

SentenceIndex::SentenceIndex(std::string path) : path_(std::move(path)) {
  std::ifstream in = open_or_throw(path_);
  std::string line;
  std::size_t line_no = 0;
  std::streamoff pos = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::streamoff line_start = pos;
    pos += static_cast<std::streamoff>(line.size()) + 1;
    strip_cr(line);
    if (line.empty()) continue;
    std::size_t tab = line.find('\t');
    if (tab == std::string::npos || tab == 0)
      throw ParseError("expected 'subject<TAB>sentence'", line_no);
    offsets_[line.substr(0, tab)].push_back(line_start);
  }
}

std::vector<std::string> SentenceIndex::sentences(
    const std::string& subject) const {
  auto it = offsets_.find(subject);
  if (it == offsets_.end()) return {};
  std::ifstream in = open_or_throw(path_);
  std::vector<std::string> out;
  out.reserve(it->second.size());
  std::string line;
  for (std::streamoff off : it->second) {
    in.clear();
    in.seekg(off);
    std::getline(in, line);
    strip_cr(line);
    out.push_back(line.substr(line.find('\t') + 1));
  }
  return out;
}

bool SentenceIndex::contains(const std::string& subject) const {
  return offsets_.contains(subject);
}

bool ParagraphStore::add(const std::string& subject, std::string paragraph) {
  return by_subject_.emplace(subject, std::move(paragraph)).second;
}

const std::string* ParagraphStore::find(const std::string& subject) const {
  auto it = by_subject_.find(subject);
  return it == by_subject_.end() ? nullptr : &it->second;
}

bool TriggerLexicon::add(const std::string& type, const std::string& word) {
  std::vector<std::string> seq = tokenize(word);
  if (seq.empty()) return false;
  auto& seqs = by_type_[type];
  if (std::find(seqs.begin(), seqs.end(), seq) != seqs.end()) return false;
  seqs.push_back(std::move(seq));
  return true;
}

const std::vector<std::vector<std::string>>* TriggerLexicon::find(
    const std::string& type) const {
  auto it = by_type_.find(type);
  return it == by_type_.end() ? nullptr : &it->second;
}

bool RelationGraph::add_edge(const std::string& source, std::string label,
                             std::string target) {
  auto& edges = adjacency_[source];
  Edge e{std::move(label), std::move(target)};
  if (std::find(edges.begin(), edges.end(), e) != edges.end()) return false;
  edges.push_back(std::move(e));
  ++edge_count_;
  return true;
}

const std::vector<RelationGraph::Edge>* RelationGraph::out_edges(
    const std::string& source) const {
  auto it = adjacency_.find(source);
  return it == adjacency_.end() ? nullptr : &it->second;
}

TriplesParseResult parse_triples(std::istream& in) {
  TriplesParseResult result;
  for_each_line(in, [&](const std::string& line, std::size_t line_no) {
    auto cols = split_tabs(line);
    require_columns(cols, 3, line_no);
    Triple t = parse_triple_columns(cols[0], cols[1], cols[2], line_no);
    if (!result.kb.insert(std::move(t)))
      result.duplicate_lines.push_back(line_no);
  });
  return result;
}

ScoreTable parse_scores(std::istream& in, TableRole role) {
  ScoreTable table(role);
  for_each_line(in, [&](const std::string& line, std::size_t line_no) {
    auto cols = split_tabs(line);
    require_columns(cols, 4, line_no);
    Triple t = parse_triple_columns(cols[0], cols[1], cols[2], line_no);
    Score s = parse_score_column(cols[3], line_no);
    if (!table.insert(std::move(t), s))
      throw ParseError("duplicate triple: " + std::string(cols[0]) + " " +
                           std::string(cols[1]) + " " + std::string(cols[2]),
                       line_no);
  });
  return table;
}

void write_scores(const ScoreTable& table, std::ostream& out) {
  for (const auto& [triple, score] : table.entries()) {
    out << triple.subject << '\t' << to_string(triple.predicate) << '\t'
        << triple.object << '\t' << score.value() << '\n';
  }
}

SentenceCorpus parse_sentences(std::istream& in) {
  SentenceCorpus corpus;
  for_each_line(in, [&](const std::string& line, std::size_t line_no) {
    auto cols = split_tabs(line);
    if (cols.size() < 2 || cols[0].empty())
      throw ParseError("expected 'subject<TAB>sentence'", line_no);
    // Tabs inside the sentence are kept as literal text.
    corpus.add(std::string(cols[0]),
               std::string(line).substr(cols[0].size() + 1));
  });
  return corpus;
}

ParagraphStore parse_paragraphs(std::istream& in) {
  ParagraphStore store;
  for_each_line(in, [&](const std::string& line, std::size_t line_no) {
    auto cols = split_tabs(line);
    if (cols.size() < 2 || cols[0].empty())
      throw ParseError("expected 'subject<TAB>paragraph'", line_no);
    if (!store.add(std::string(cols[0]),
                   std::string(line).substr(cols[0].size() + 1)))
      throw ParseError("second paragraph for subject '" +
                           std::string(cols[0]) + "'",
                       line_no);
  });
  return store;
}

TriggerLexicon parse_triggers(std::istream& in) {
  TriggerLexicon lexicon;
  for_each_line(in, [&](const std::string& line, std::size_t line_no) {
    auto cols = split_tabs(line);
    require_columns(cols, 2, line_no);
    if (cols[0].empty() || cols[1].empty())
      throw ParseError("empty type or trigger word", line_no);
    lexicon.add(std::string(cols[0]), std::string(cols[1]));
  });
  return lexicon;
}

RelationGraph parse_graph(std::istream& in) {
  RelationGraph graph;
  for_each_line(in, [&](const std::string& line, std::size_t line_no) {
    auto cols = split_tabs(line);
    require_columns(cols, 3, line_no);
    if (cols[0].empty() || cols[1].empty() || cols[2].empty())
      throw ParseError("empty field in edge", line_no);
    graph.add_edge(std::string(cols[0]), std::string(cols[1]),
                   std::string(cols[2]));
  });
  return graph;
}

TriplesParseResult parse_triples_file(const std::string& path) {
  auto in = open_or_throw(path);
  return parse_triples(in);
}

ScoreTable parse_scores_file(const std::string& path, TableRole role) {
  auto in = open_or_throw(path);
  return parse_scores(in, role);
}

SentenceCorpus parse_sentences_file(const std::string& path) {
  auto in = open_or_throw(path);
  return parse_sentences(in);
}

ParagraphStore parse_paragraphs_file(const std::string& path) {
  auto in = open_or_throw(path);
  return parse_paragraphs(in);
}

TriggerLexicon parse_triggers_file(const std::string& path) {
  auto in = open_or_throw(path);
  return parse_triggers(in);
}

RelationGraph parse_graph_file(const std::string& path) {
  auto in = open_or_throw(path);
  return parse_graph(in);
}

void write_scores_file(const ScoreTable& table, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open file for writing: " + path);
  write_scores(table, out);
}

}  // namespace ts
