#include <doctest.h>

#include <sstream>

#include "triplescore/model_io.hpp"

using namespace ts;

TEST_CASE("path model round-trips exactly") {
  PathModel m;
  m.bias = -0.12345678901234567;
  m.max_path_length = 2;
  m.lambda = 0.05;
  m.weights["born-in located-in"] = 1.5;
  m.weights["a b c"] = -3.25e-7;

  std::ostringstream out;
  save_path_model(m, out);
  std::istringstream in(out.str());
  PathModel loaded = load_path_model(in);
  CHECK(loaded.bias == m.bias);
  CHECK(loaded.max_path_length == m.max_path_length);
  CHECK(loaded.lambda == m.lambda);
  CHECK(loaded.weights == m.weights);

  // header declares format version and kind
  CHECK(out.str().rfind("triplescore-model\tv1\tpaths\n", 0) == 0);
}

TEST_CASE("frequency calibration round-trips exactly") {
  FrequencyCalibration cal;
  cal.set(Predicate::profession, {0.0, 0.1, 0.2, 0.3, 0.4, 0.5, 1.01});
  std::ostringstream out;
  save_frequency_calibration(cal, out);
  std::istringstream in(out.str());
  auto loaded = load_frequency_calibration(in);
  REQUIRE(loaded.find(Predicate::profession));
  CHECK(*loaded.find(Predicate::profession) ==
        *cal.find(Predicate::profession));
  CHECK(loaded.find(Predicate::nationality) == nullptr);
}

TEST_CASE("ensemble model round-trips and validates") {
  EnsembleModel m{{"baseline", "frequency", "paths"}, {0.25, 0.25, 0.5}};
  std::ostringstream out;
  save_ensemble_model(m, out);
  std::istringstream in(out.str());
  auto loaded = load_ensemble_model(in);
  CHECK(loaded.component_ids == m.component_ids);
  CHECK(loaded.weights == m.weights);

  std::istringstream bad(
      "triplescore-model\tv1\tensemble\nbaseline\t0.9\n");
  CHECK_THROWS_AS(load_ensemble_model(bad), ParseError);
}

TEST_CASE("kind mismatches and bad headers are parse errors") {
  std::istringstream not_a_model("something else\n");
  CHECK_THROWS_AS(load_path_model(not_a_model), ParseError);

  std::istringstream wrong_kind(
      "triplescore-model\tv1\tensemble\nbaseline\t1\n");
  CHECK_THROWS_AS(load_path_model(wrong_kind), ParseError);

  std::istringstream future_version("triplescore-model\tv9\tpaths\n");
  CHECK_THROWS_AS(load_path_model(future_version), ParseError);
}

TEST_CASE("config parsing") {
  std::istringstream in(
      "# comment\n"
      "L=2\n"
      "lambda=0.5\n"
      "iterations=100\n"
      "step_size=0.25\n"
      "frequency_grid_step=0.02\n"
      "ensemble_grid_step=0.1\n");
  TrainConfig c = parse_config(in);
  CHECK(c.max_path_length == 2);
  CHECK(c.lambda == 0.5);
  CHECK(c.iterations == 100);
  CHECK(c.step_size == 0.25);
  CHECK(c.frequency_grid_step == 0.02);
  CHECK(c.ensemble_grid_step == 0.1);

  std::istringstream unknown("nope=1\n");
  CHECK_THROWS_AS(parse_config(unknown), ParseError);
  std::istringstream bad_value("L=abc\n");
  CHECK_THROWS_AS(parse_config(bad_value), ParseError);
  std::istringstream bad_range("lambda=0\n");
  CHECK_THROWS_AS(parse_config(bad_range), ValidationError);
}
