#include <doctest.h>

#include <map>

#include "dfpcrc/error.hpp"
#include "dfpcrc/graph.hpp"
#include "dfpcrc/synth.hpp"

using namespace dfpcrc;
using namespace dfpcrc::synth;
using taxonomy::ArtifactKind;

TEST_SUITE("synth") {

TEST_CASE("descriptions classify as intended for every kind") {
  for (const auto& kind : taxonomy::enumerate_kinds()) {
    for (std::size_t v = 0; v < 40; ++v) {
      ChangeRequest cr;
      cr.id = "x";
      cr.short_desc = describe(kind, v);
      cr.long_desc = "Observed in the cache while testing: " + cr.short_desc + ".";
      cr.kind_hint = std::string(taxonomy::to_string(kind.motivation));
      CAPTURE(cr.short_desc);
      CHECK(taxonomy::classify(cr, textprep::descriptive_tokens(cr)) == std::vector{kind});
    }
  }
}

TEST_CASE("empty corpus") {
  auto cfg = SynthConfig::defaults();
  cfg.num_requests = 0;
  const auto c = generate(cfg);
  CHECK(c.requests_jsonl.empty());
  CHECK(c.revisions_jsonl.empty());
}

TEST_CASE("fixed seed gives identical bytes") {
  auto cfg = SynthConfig::defaults();
  cfg.num_requests = 120;
  const auto a = generate(cfg), b = generate(cfg);
  CHECK(a.requests_jsonl == b.requests_jsonl);
  CHECK(a.revisions_jsonl == b.revisions_jsonl);
  cfg.seed = 43;
  CHECK(generate(cfg).revisions_jsonl != a.revisions_jsonl);
}

TEST_CASE("generated files parse back and classify as intended") {
  const auto c = generate(SynthConfig::defaults());
  const auto crs = ingest::parse_change_requests(c.requests_jsonl, ingest::RequestFormat::jsonl);
  const auto evs = ingest::parse_revision_log(c.revisions_jsonl, ingest::RevisionFormat::jsonl);
  CHECK(crs == c.requests);
  CHECK(evs == c.events);
  const auto cfg = SynthConfig::defaults();
  std::map<ArtifactKind, bool> fault_prone;
  for (const auto& s : cfg.mixture) fault_prone[s.kind] = s.kind == cfg.planted[0] || s.follows == cfg.planted[0];
  for (std::size_t i = 0; i < crs.size(); ++i) {
    CHECK(taxonomy::classify(crs[i], textprep::descriptive_tokens(crs[i])) == std::vector{c.intended[i]});
    CHECK(crs[i].ground_truth == fault_prone.at(c.intended[i]));
  }
}

TEST_CASE("planted kind carries heavier edges") {
  const auto cfg = SynthConfig::defaults();
  const auto c = generate(cfg);
  std::vector<std::vector<ArtifactKind>> kinds;
  for (const auto& k : c.intended) kinds.push_back({k});
  const auto arts = taxonomy::build_artifacts(c.requests, kinds);
  const auto g = graph::build_graph(c.events, arts);
  double planted_sum = 0.0, other_sum = 0.0;
  std::size_t planted_n = 0, other_n = 0;
  for (const auto& e : g.edges) {
    if (g.artifacts[e.artifact] == cfg.planted[0]) {
      planted_sum += e.weight;
      ++planted_n;
    } else {
      other_sum += e.weight;
      ++other_n;
    }
  }
  REQUIRE(planted_n > 0);
  REQUIRE(other_n > 0);
  CHECK(planted_sum / planted_n > other_sum / other_n);
}

TEST_CASE("invalid configs list every violation") {
  auto cfg = SynthConfig::defaults();
  cfg.num_blocks = 0;
  cfg.mixture[0].weight = 0.9;
  cfg.multiplier = 0.5;
  try {
    generate(cfg);
    FAIL("expected an error");
  } catch (const DataError& e) {
    const std::string what = e.what();
    CHECK(what.find("num_blocks") != std::string::npos);
    CHECK(what.find("sum to 1") != std::string::npos);
    CHECK(what.find("multiplier") != std::string::npos);
  }
  auto orphan = SynthConfig::defaults();
  orphan.planted = {ArtifactKind::make(taxonomy::Category::architectural, taxonomy::Aspect::dependency)};
  CHECK(orphan.violations().size() == 1);
  CHECK(SynthConfig::defaults().violations().empty());
}

}
