#include <doctest.h>

#include <sstream>

#include "triplescore/scorers.hpp"

using namespace ts;

namespace {

struct Fixture {
  std::vector<Triple> triples;
  SentenceCorpus corpus;
  ParagraphStore paragraphs;
  TriggerLexicon lexicon;
  RelationGraph graph;

  Fixture() {
    for (int i = 0; i < 5; ++i)
      triples.push_back(
          Triple{"p" + std::to_string(i), Predicate::profession, "Actor"});
    lexicon.add("Actor", "actor");
    // p0, p1 have paragraphs with the trigger up front; p2 has it later;
    // p3 has none; p4 has no paragraph at all but corpus sentences.
    paragraphs.add("p0", "A famous actor. Busy career.");
    paragraphs.add("p1", "An actor by trade. Also a writer.");
    paragraphs.add("p2", "A person. Later became an actor.");
    paragraphs.add("p3", "A chemist. Works in a lab.");
    corpus.add("p4", "An actor from Ohio.");
    corpus.add("p4", "Unrelated line.");
  }
};

}  // namespace

TEST_CASE("baseline pipeline scores everything 5") {
  Fixture f;
  PipelineInputs inputs;
  auto pred = run_pipeline(f.triples, Method::baseline, inputs);
  REQUIRE(pred.size() == f.triples.size());
  for (const auto& [t, s] : pred.entries()) CHECK(s.value() == 5);
}

TEST_CASE("baseline with trigger post-processing demotes and promotes") {
  Fixture f;
  PipelineInputs inputs;
  inputs.paragraphs = &f.paragraphs;
  inputs.corpus = &f.corpus;
  inputs.lexicon = &f.lexicon;
  inputs.post_triggers = true;
  auto pred = run_pipeline(f.triples, Method::baseline, inputs);
  CHECK(pred.find(f.triples[0])->value() == 5);  // promoted, already 5
  CHECK(pred.find(f.triples[1])->value() == 5);
  CHECK(pred.find(f.triples[2])->value() == 5);  // trigger later: unchanged
  CHECK(pred.find(f.triples[3])->value() == 2);  // demoted
  // p4: corpus sentences stand in for the paragraph; first one matches
  CHECK(pred.find(f.triples[4])->value() == 5);
}

TEST_CASE("pipeline requires the inputs of the chosen method") {
  Fixture f;
  PipelineInputs inputs;
  CHECK_THROWS_AS(run_pipeline(f.triples, Method::frequency, inputs),
                  ValidationError);
  CHECK_THROWS_AS(run_pipeline(f.triples, Method::paths, inputs),
                  ValidationError);
  CHECK_THROWS_AS(run_pipeline(f.triples, Method::ensemble, inputs),
                  ValidationError);
  inputs.post_triggers = true;
  CHECK_THROWS_AS(run_pipeline(f.triples, Method::baseline, inputs),
                  ValidationError);
}

TEST_CASE("ensemble pipeline equals composing the components by hand") {
  Fixture f;
  // Path model: direct plays-in edge implies high.
  for (int i = 0; i < 3; ++i)
    f.graph.add_edge("p" + std::to_string(i), "plays-in", "Actor");
  PathModel path_model;
  path_model.weights["plays-in"] = 4.0;
  path_model.bias = -2.0;

  FrequencyCalibration cal;
  cal.set(Predicate::profession, {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7});
  for (int i = 0; i < 4; ++i) {
    std::string subject = "p" + std::to_string(i);
    f.corpus.add(subject, i % 2 ? "An actor indeed." : "A person.");
  }

  EnsembleModel ensemble{{"baseline", "frequency", "paths"},
                         {0.25, 0.25, 0.5}};
  PipelineInputs inputs;
  inputs.corpus = &f.corpus;
  inputs.lexicon = &f.lexicon;
  inputs.graph = &f.graph;
  inputs.calibration = &cal;
  inputs.path_model = &path_model;
  inputs.ensemble_model = &ensemble;

  auto pred = run_pipeline(f.triples, Method::ensemble, inputs);
  for (const Triple& t : f.triples) {
    Score by_hand = ensemble_score(
        std::vector<Score>{baseline_score(t),
                           frequency_score(t, f.corpus, f.lexicon, cal),
                           path_score(t, path_model, f.graph)},
        ensemble);
    CHECK(pred.find(t)->value() == by_hand.value());
  }
}

TEST_CASE("pipeline runs are repeatable") {
  Fixture f;
  PipelineInputs inputs;
  inputs.paragraphs = &f.paragraphs;
  inputs.corpus = &f.corpus;
  inputs.lexicon = &f.lexicon;
  inputs.post_triggers = true;
  auto a = run_pipeline(f.triples, Method::baseline, inputs);
  auto b = run_pipeline(f.triples, Method::baseline, inputs);
  std::ostringstream sa, sb;
  write_scores(a, sa);
  write_scores(b, sb);
  CHECK(sa.str() == sb.str());
}
