#include "triplescore/model_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

namespace ts {

namespace {

constexpr const char* kMagic = "triplescore-model";
constexpr const char* kVersion = "v1";

// Shortest decimal that round-trips the double exactly.
std::string fmt_weight(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

double parse_weight(const std::string& s, std::size_t line_no) {
  try {
    std::size_t consumed = 0;
    double v = std::stod(s, &consumed);
    if (consumed != s.size() || !std::isfinite(v))
      throw ParseError("bad weight: " + s, line_no);
    return v;
  } catch (const std::invalid_argument&) {
    throw ParseError("bad weight: " + s, line_no);
  } catch (const std::out_of_range&) {
    throw ParseError("bad weight: " + s, line_no);
  }
}

std::vector<std::string> split_tabs(const std::string& line) {
  std::vector<std::string> cols;
  std::size_t start = 0;
  while (true) {
    std::size_t tab = line.find('\t', start);
    if (tab == std::string::npos) {
      cols.push_back(line.substr(start));
      return cols;
    }
    cols.push_back(line.substr(start, tab - start));
    start = tab + 1;
  }
}

void write_header(std::ostream& out, const char* kind) {
  out << kMagic << '\t' << kVersion << '\t' << kind << '\n';
}

std::string read_header(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw ParseError("empty model file", 1);
  if (!line.empty() && line.back() == '\r') line.pop_back();
  auto cols = split_tabs(line);
  if (cols.size() != 3 || cols[0] != kMagic)
    throw ParseError("not a triplescore model file", 1);
  if (cols[1] != kVersion)
    throw ParseError("unsupported model format version: " + cols[1], 1);
  return cols[2];
}

void expect_kind(std::istream& in, const std::string& want) {
  std::string kind = read_header(in);
  if (kind != want)
    throw ParseError("expected a " + want + " model, got " + kind, 1);
}

template <typename Fn>
void for_each_body_line(std::istream& in, Fn&& fn) {
  std::string line;
  std::size_t line_no = 1;  // header consumed
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    fn(split_tabs(line), line_no);
  }
}

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open file: " + path);
  return in;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open file for writing: " + path);
  return out;
}

}  // namespace

std::string read_model_kind(const std::string& path) {
  auto in = open_in(path);
  return read_header(in);
}

void save_path_model(const PathModel& m, std::ostream& out) {
  write_header(out, "paths");
  out << "!meta\tbias\t" << fmt_weight(m.bias) << '\n';
  out << "!meta\tL\t" << m.max_path_length << '\n';
  out << "!meta\tlambda\t" << fmt_weight(m.lambda) << '\n';
  for (const auto& [key, weight] : m.weights)  // std::map: sorted order
    out << key << '\t' << fmt_weight(weight) << '\n';
}

PathModel load_path_model(std::istream& in) {
  expect_kind(in, "paths");
  PathModel m;
  for_each_body_line(in, [&](const std::vector<std::string>& cols,
                             std::size_t line_no) {
    if (cols[0] == "!meta") {
      if (cols.size() != 3) throw ParseError("bad meta line", line_no);
      if (cols[1] == "bias")
        m.bias = parse_weight(cols[2], line_no);
      else if (cols[1] == "L")
        m.max_path_length = std::stoi(cols[2]);
      else if (cols[1] == "lambda")
        m.lambda = parse_weight(cols[2], line_no);
      else
        throw ParseError("unknown meta key: " + cols[1], line_no);
      return;
    }
    if (cols.size() != 2 || cols[0].empty())
      throw ParseError("expected 'feature<TAB>weight'", line_no);
    if (!m.weights.emplace(cols[0], parse_weight(cols[1], line_no)).second)
      throw ParseError("duplicate feature: " + cols[0], line_no);
  });
  return m;
}

void save_frequency_calibration(const FrequencyCalibration& cal,
                                std::ostream& out) {
  write_header(out, "frequency");
  for (Predicate p : {Predicate::profession, Predicate::nationality}) {
    const auto* thresholds = cal.find(p);
    if (!thresholds) continue;
    out << to_string(p);
    for (double t : *thresholds) out << '\t' << fmt_weight(t);
    out << '\n';
  }
}

FrequencyCalibration load_frequency_calibration(std::istream& in) {
  expect_kind(in, "frequency");
  FrequencyCalibration cal;
  for_each_body_line(in, [&](const std::vector<std::string>& cols,
                             std::size_t line_no) {
    auto p = parse_predicate(cols[0]);
    if (!p) throw ParseError("unknown predicate: " + cols[0], line_no);
    if (cols.size() != 1 + FrequencyCalibration::kCuts)
      throw ParseError("expected 7 thresholds", line_no);
    std::array<double, FrequencyCalibration::kCuts> thresholds;
    for (int i = 0; i < FrequencyCalibration::kCuts; ++i)
      thresholds[i] = parse_weight(cols[i + 1], line_no);
    try {
      cal.set(*p, thresholds);
    } catch (const ValidationError& e) {
      throw ParseError(e.what(), line_no);
    }
  });
  return cal;
}

void save_ensemble_model(const EnsembleModel& m, std::ostream& out) {
  validate(m);
  write_header(out, "ensemble");
  for (std::size_t i = 0; i < m.component_ids.size(); ++i)
    out << m.component_ids[i] << '\t' << fmt_weight(m.weights[i]) << '\n';
}

EnsembleModel load_ensemble_model(std::istream& in) {
  expect_kind(in, "ensemble");
  EnsembleModel m;
  for_each_body_line(in, [&](const std::vector<std::string>& cols,
                             std::size_t line_no) {
    if (cols.size() != 2 || cols[0].empty())
      throw ParseError("expected 'component<TAB>weight'", line_no);
    m.component_ids.push_back(cols[0]);
    m.weights.push_back(parse_weight(cols[1], line_no));
  });
  try {
    validate(m);
  } catch (const ValidationError& e) {
    throw ParseError(e.what());
  }
  return m;
}

void save_path_model_file(const PathModel& m, const std::string& path) {
  auto out = open_out(path);
  save_path_model(m, out);
}

PathModel load_path_model_file(const std::string& path) {
  auto in = open_in(path);
  return load_path_model(in);
}

void save_frequency_calibration_file(const FrequencyCalibration& cal,
                                     const std::string& path) {
  auto out = open_out(path);
  save_frequency_calibration(cal, out);
}

FrequencyCalibration load_frequency_calibration_file(
    const std::string& path) {
  auto in = open_in(path);
  return load_frequency_calibration(in);
}

void save_ensemble_model_file(const EnsembleModel& m,
                              const std::string& path) {
  auto out = open_out(path);
  save_ensemble_model(m, out);
}

EnsembleModel load_ensemble_model_file(const std::string& path) {
  auto in = open_in(path);
  return load_ensemble_model(in);
}

}  // namespace ts
