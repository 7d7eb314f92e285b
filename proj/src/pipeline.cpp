#include "dfpcrc/pipeline.hpp"

#include <algorithm>
#include <sstream>
#include <unordered_map>

#include <json.hpp>

#include "dfpcrc/error.hpp"

namespace dfpcrc::pipeline {

using nlohmann::ordered_json;

textprep::TextOptions AnalysisConfig::text_options() const {
  textprep::TextOptions out = text;
  if (stop_words) out.stop_words = stop_words.get();
  return out;
}

const taxonomy::ClassificationRuleSet& AnalysisConfig::rule_set() const {
  return rules ? *rules : taxonomy::ClassificationRuleSet::defaults();
}

std::vector<std::vector<taxonomy::ArtifactKind>> classify_requests(
    const std::vector<ChangeRequest>& requests, const AnalysisConfig& config) {
  const auto text = config.text_options();
  const auto& rules = config.rule_set();
  std::vector<std::vector<taxonomy::ArtifactKind>> kinds;
  kinds.reserve(requests.size());
  for (const auto& cr : requests) {
    kinds.push_back(taxonomy::classify(cr, textprep::descriptive_tokens(cr, text), rules));
  }
  return kinds;
}

Analysis analyze(const Corpus& corpus, const AnalysisConfig& config) {
  Analysis a;
  a.kinds = classify_requests(corpus.requests, config);
  a.artifacts = taxonomy::build_artifacts(corpus.requests, a.kinds);

  a.graph = graph::build_graph(corpus.events, a.artifacts);
  a.hits = graph::run_hits(a.graph, config.hits);
  a.scores = graph::revision_support(a.graph, a.hits);

  const std::size_t n = a.artifacts.size();
  if (!config.use_correlation || n < 2) {
    a.sets = correlation::singleton_sets(n);
    a.k = n;
  } else {
    const auto index = correlation::CoRevisionIndex::from_events(corpus.events);
    a.correlation = correlation::correlation_matrix(a.artifacts, index, config.chi_mode);
    a.k = config.k.value_or(correlation::default_k(n));
    a.sets = correlation::k_medoids(correlation::dissimilarity(*a.correlation), a.k, config.seed).sets;
  }

  a.report = dfp::compute_report(a.artifacts, a.scores, a.sets);

  std::unordered_map<std::size_t, double> dfp_by_kind;
  for (const auto& art : a.report.artifacts) dfp_by_kind[art.kind.index()] = art.dfp;
  for (std::size_t i = 0; i < corpus.requests.size(); ++i) {
    std::vector<double> values;
    for (const auto& k : a.kinds[i]) values.push_back(dfp_by_kind.at(k.index()));
    a.report.classifications.push_back(
        dfp::classify_request(corpus.requests[i].id, values, a.report.band, config.effective));
  }
  return a;
}

namespace {

std::string_view hits_mode_name(graph::HitsMode m) {
  return m == graph::HitsMode::converged ? "converged" : "single_pass";
}

std::string_view chi_mode_name(correlation::ChiSquareMode m) {
  return m == correlation::ChiSquareMode::standard ? "standard" : "paper_literal";
}

std::string_view effective_name(dfp::EffectiveRule r) {
  return r == dfp::EffectiveRule::max ? "max" : "mean";
}

}  // namespace

std::string report_json(const Corpus& corpus, const Analysis& a, const AnalysisConfig& config) {
  ordered_json doc;
  doc["config"] = {
      {"hits_mode", hits_mode_name(config.hits.mode)},
      {"hits_tolerance", config.hits.tolerance},
      {"hits_max_iter", config.hits.max_iter},
      {"correlation_mode", chi_mode_name(config.chi_mode)},
      {"use_correlation", config.use_correlation},
      {"k", a.k},
      {"seed", config.seed},
      {"effective_dfp", effective_name(config.effective)},
      {"stem_mode", config.text.stem_mode == textprep::StemMode::minimal ? "minimal" : "porter"},
  };
  std::size_t weighted_edges = 0;
  for (const auto& e : a.graph.edges) weighted_edges += e.weight > 0.0 ? 1 : 0;
  doc["summary"] = {
      {"code_blocks", a.graph.block_count()},
      {"change_requests", corpus.requests.size()},
      {"revision_events", corpus.events.size()},
      {"artifacts", a.artifacts.size()},
      {"correlated_sets", a.sets.size()},
      {"edges", a.graph.edges.size()},
      {"weighted_edges", weighted_edges},
      {"hits_iterations", a.hits.iterations},
      {"hits_residual", a.hits.residual},
      {"hits_converged", a.hits.converged},
      {"degenerate_pairs", a.correlation ? a.correlation->degenerate_pairs : 0},
  };

  ordered_json sets = ordered_json::array();
  for (std::size_t s = 0; s < a.report.sets.size(); ++s) {
    const auto& set = a.report.sets[s];
    ordered_json members = ordered_json::array();
    for (std::size_t m : set.set.members) members.push_back(a.artifacts[m].kind.name());
    sets.push_back({{"id", s},
                    {"medoid", a.artifacts[set.set.medoid].kind.name()},
                    {"members", members},
                    {"dfp", set.dfp}});
  }
  doc["sets"] = std::move(sets);

  ordered_json artifacts = ordered_json::array();
  for (const auto& art : a.report.artifacts) {
    artifacts.push_back({{"kind", art.kind.name()},
                         {"members", art.members},
                         {"rs", art.rs},
                         {"dfp", art.dfp},
                         {"set", art.set}});
  }
  doc["artifacts"] = std::move(artifacts);

  const auto& band = a.report.band;
  doc["band"] = {{"dfpt", band.dfpt}, {"sdv", band.sdv}, {"lower", band.lower}, {"upper", band.upper}};

  ordered_json rows = ordered_json::array();
  for (const auto& c : a.report.classifications) {
    rows.push_back({{"id", c.request_id}, {"dfp", c.dfp}, {"class", dfp::to_string(c.fault_class)}});
  }
  doc["classifications"] = std::move(rows);
  return doc.dump(2) + "\n";
}

std::string classifications_csv(const std::vector<dfp::RequestClassification>& rows) {
  std::ostringstream out;
  out.precision(17);
  out << "request_id,dfp,class\n";
  for (const auto& r : rows) out << r.request_id << ',' << r.dfp << ',' << dfp::to_string(r.fault_class) << '\n';
  return out.str();
}

StoredModel model_from(const Analysis& analysis, const AnalysisConfig& config) {
  StoredModel m;
  m.band = analysis.report.band;
  m.effective = config.effective;
  for (const auto& art : analysis.report.artifacts) m.artifact_dfp[art.kind] = art.dfp;
  return m;
}

StoredModel load_model(std::string_view text) {
  StoredModel m;
  try {
    const auto doc = nlohmann::json::parse(text);
    const auto& band = doc.at("band");
    m.band = {band.at("dfpt").get<double>(), band.at("sdv").get<double>(),
              band.at("lower").get<double>(), band.at("upper").get<double>()};
    for (const auto& art : doc.at("artifacts")) {
      const auto name = art.at("kind").get<std::string>();
      auto kind = taxonomy::ArtifactKind::parse(name);
      if (!kind) throw DataError(Stage::dfp, "report names unknown artifact kind '" + name + "'");
      m.artifact_dfp[*kind] = art.at("dfp").get<double>();
    }
    if (auto cfg = doc.find("config"); cfg != doc.end() && cfg->contains("effective_dfp")) {
      auto rule = dfp::parse_effective_rule(cfg->at("effective_dfp").get<std::string>());
      if (!rule) throw DataError(Stage::dfp, "report has an unknown effective_dfp rule");
      m.effective = *rule;
    }
  } catch (const nlohmann::json::exception& e) {
    throw DataError(Stage::dfp, std::string("malformed report: ") + e.what());
  }
  return m;
}

std::vector<dfp::RequestClassification> score_requests(const StoredModel& model,
                                                        const std::vector<ChangeRequest>& requests,
                                                        const AnalysisConfig& config) {
  const auto kinds = classify_requests(requests, config);
  std::vector<dfp::RequestClassification> out;
  out.reserve(requests.size());
  for (std::size_t i = 0; i < requests.size(); ++i) {
    std::vector<double> values;
    for (const auto& k : kinds[i]) {
      if (auto it = model.artifact_dfp.find(k); it != model.artifact_dfp.end()) values.push_back(it->second);
    }
    if (values.empty()) {
      if (auto it = model.artifact_dfp.find(taxonomy::ArtifactKind::fallback());
          it != model.artifact_dfp.end())
        values.push_back(it->second);
    }
    out.push_back(dfp::classify_request(requests[i].id, values, model.band, model.effective));
  }
  return out;
}

}  // namespace dfpcrc::pipeline
