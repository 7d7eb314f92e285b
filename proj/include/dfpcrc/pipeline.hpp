#pragma once

// End-to-end composition: linked corpus -> descriptive tokens -> artifacts ->
// bipartite graph and revision support -> correlated sets -> dfp report.

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "dfpcrc/correlation.hpp"
#include "dfpcrc/dfp.hpp"
#include "dfpcrc/graph.hpp"
#include "dfpcrc/ingest.hpp"
#include "dfpcrc/taxonomy.hpp"
#include "dfpcrc/textprep.hpp"

namespace dfpcrc::pipeline {

struct AnalysisConfig {
  textprep::TextOptions text{};
  std::shared_ptr<const textprep::StopWords> stop_words;  // overrides text.stop_words when set
  std::shared_ptr<const taxonomy::ClassificationRuleSet> rules;  // defaults when null
  graph::HitsOptions hits{};
  correlation::ChiSquareMode chi_mode = correlation::ChiSquareMode::standard;
  std::optional<std::size_t> k;  // default_k(|CRA|) when unset
  std::uint64_t seed = 42;
  dfp::EffectiveRule effective = dfp::EffectiveRule::max;
  /// false replaces clustering with singleton sets (the correlation-free baseline).
  bool use_correlation = true;

  textprep::TextOptions text_options() const;
  const taxonomy::ClassificationRuleSet& rule_set() const;
};

struct Corpus {
  std::vector<ChangeRequest> requests;
  std::vector<RevisionEvent> events;  // linked
};

struct Analysis {
  std::vector<std::vector<taxonomy::ArtifactKind>> kinds;  // parallel to requests
  std::vector<taxonomy::ChangeRequestArtifact> artifacts;
  graph::BipartiteGraph graph;
  graph::HitsState hits;
  std::vector<graph::ArtifactScore> scores;
  std::optional<correlation::CorrelationMatrix> correlation;
  std::size_t k = 0;
  std::vector<correlation::CorrelatedArtifactSet> sets;
  dfp::DfpReport report;
};

/// Kinds for each request under the configured text options and rules.
std::vector<std::vector<taxonomy::ArtifactKind>> classify_requests(
    const std::vector<ChangeRequest>& requests, const AnalysisConfig& config);

Analysis analyze(const Corpus& corpus, const AnalysisConfig& config);

/// JSON report with `config`, `summary`, `sets`, `artifacts`, `band` and
/// `classifications`. Byte-identical for identical inputs and config.
std::string report_json(const Corpus& corpus, const Analysis& analysis, const AnalysisConfig& config);

/// request_id,dfp,class
std::string classifications_csv(const std::vector<dfp::RequestClassification>& rows);

/// What `score` needs from a finished analysis.
struct StoredModel {
  dfp::ThresholdBand band;
  std::map<taxonomy::ArtifactKind, double> artifact_dfp;
  dfp::EffectiveRule effective = dfp::EffectiveRule::max;
};

StoredModel model_from(const Analysis& analysis, const AnalysisConfig& config);
/// Reads the `band`, `artifacts` and `config.effective_dfp` sections of a report.
StoredModel load_model(std::string_view report_json);

/// Kinds missing from the model are skipped; a request left with none falls
/// back to the fallback kind, and fails when that is missing too.
std::vector<dfp::RequestClassification> score_requests(const StoredModel& model,
                                                        const std::vector<ChangeRequest>& requests,
                                                        const AnalysisConfig& config);

}  // namespace dfpcrc::pipeline
