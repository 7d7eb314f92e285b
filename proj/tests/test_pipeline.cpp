#include <doctest.h>

#include <json.hpp>
#include <set>

#include "dfpcrc/error.hpp"
#include "dfpcrc/eval.hpp"
#include "dfpcrc/pipeline.hpp"
#include "dfpcrc/synth.hpp"

using namespace dfpcrc;
using namespace dfpcrc::pipeline;

namespace {

Corpus small_corpus(std::size_t n = 50) {
  auto cfg = synth::SynthConfig::defaults();
  cfg.num_requests = n;
  auto c = synth::generate(cfg);
  return {c.requests, c.events};
}

}  // namespace

TEST_SUITE("pipeline") {

TEST_CASE("analysis of a small synthetic corpus") {
  const auto corpus = small_corpus();
  const AnalysisConfig config;
  const auto a = analyze(corpus, config);
  CHECK(a.artifacts.size() >= 1);
  CHECK(a.report.band.lower <= a.report.band.dfpt);
  CHECK(a.report.band.dfpt <= a.report.band.upper);
  CHECK(a.report.band.dfpt - a.report.band.lower == doctest::Approx(a.report.band.upper - a.report.band.dfpt));
  CHECK(a.report.classifications.size() == corpus.requests.size());

  std::set<std::string> covered;
  for (const auto& art : a.artifacts) covered.insert(art.members.begin(), art.members.end());
  CHECK(covered.size() == corpus.requests.size());
  for (const auto& s : a.scores) {
    CHECK(s.rs >= 0.0);
    CHECK(s.rs <= 1.0);
  }

  const auto json = report_json(corpus, a, config);
  const auto doc = nlohmann::json::parse(json);
  for (const char* key : {"config", "summary", "sets", "artifacts", "band", "classifications"}) CHECK(doc.contains(key));
  CHECK(json == report_json(corpus, analyze(corpus, config), config));
}

TEST_CASE("stored model round trips through the report") {
  const auto corpus = small_corpus();
  AnalysisConfig config;
  config.effective = dfp::EffectiveRule::mean;
  const auto a = analyze(corpus, config);
  const auto live = model_from(a, config);
  const auto loaded = load_model(report_json(corpus, a, config));
  CHECK(loaded.artifact_dfp == live.artifact_dfp);
  CHECK(loaded.band.lower == live.band.lower);
  CHECK(loaded.effective == dfp::EffectiveRule::mean);
  const auto scored = score_requests(loaded, corpus.requests, config);
  REQUIRE(scored.size() == a.report.classifications.size());
  for (std::size_t i = 0; i < scored.size(); ++i) {
    CHECK(scored[i].fault_class == a.report.classifications[i].fault_class);
  }
  CHECK_THROWS_AS(load_model("{}"), DataError);
  CHECK_THROWS_AS(load_model("not json"), DataError);
}

TEST_CASE("scoring falls back and reports unmapped requests") {
  StoredModel m;
  m.band = {0.394412607, 0.0, 0.318610008, 0.443901512};
  m.artifact_dfp[taxonomy::ArtifactKind::fallback()] = 0.30;
  ChangeRequest cr;
  cr.id = "N-1";
  cr.short_desc = "quux zzyzx";
  const auto out = score_requests(m, {cr}, {});
  REQUIRE(out.size() == 1);
  CHECK(out[0].fault_class == dfp::FaultClass::safe);
  CHECK(score_requests(m, {}, {}).empty());
  m.artifact_dfp.clear();
  CHECK_THROWS_AS(score_requests(m, {cr}, {}), DataError);
}

TEST_CASE("baseline uses singleton sets") {
  const auto corpus = small_corpus();
  const auto a = eval::baseline_dfp(corpus, {});
  CHECK(a.sets.size() == a.artifacts.size());
  for (std::size_t i = 0; i < a.sets.size(); ++i) {
    CHECK(a.report.sets[i].dfp ==
          doctest::Approx(1.0 - a.scores[i].rs / static_cast<double>(a.artifacts.size())));
  }
}

TEST_CASE("evaluation runs both methods on one split") {
  const auto corpus = small_corpus(200);
  const auto r = eval::evaluate(corpus, {}, 0.85);
  REQUIRE(r.methods.size() == 2);
  CHECK(r.methods[0].method == "DFP-CRC");
  CHECK(r.methods[1].method == "DFP");
  CHECK(r.train_size + r.test_size == 200);
  for (const auto& m : r.methods) CHECK(m.counts.total == r.test_size);
}

}
