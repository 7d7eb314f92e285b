#include "dfpcrc/eval.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include <json.hpp>

#include "dfpcrc/error.hpp"

namespace dfpcrc::eval {

Split split(const std::vector<ChangeRequest>& crs, double train_fraction, std::uint64_t seed) {
  if (!(train_fraction > 0.0 && train_fraction < 1.0))
    throw DataError(Stage::eval, "train fraction must lie strictly between 0 and 1");
  const std::size_t n = crs.size();
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  std::mt19937_64 rng(seed);
  for (std::size_t i = n; i > 1; --i) {
    const std::size_t j = static_cast<std::size_t>(rng() % i);
    std::swap(order[i - 1], order[j]);
  }
  std::size_t cut = static_cast<std::size_t>(std::llround(train_fraction * static_cast<double>(n)));
  if (n >= 2) cut = std::clamp<std::size_t>(cut, 1, n - 1);
  Split s;
  for (std::size_t i = 0; i < n; ++i) (i < cut ? s.train : s.test).push_back(crs[order[i]]);
  return s;
}

bool is_positive(dfp::FaultClass c) noexcept { return c != dfp::FaultClass::safe; }

ConfusionCounts confusion(const std::vector<dfp::RequestClassification>& predictions,
                          const std::vector<ChangeRequest>& labelled) {
  std::unordered_map<std::string_view, bool> truth;
  for (const auto& cr : labelled) {
    if (!cr.ground_truth) throw DataError(Stage::eval, "change request '" + cr.id + "' has no ground truth");
    truth.emplace(cr.id, *cr.ground_truth);
  }
  ConfusionCounts c;
  for (const auto& p : predictions) {
    auto it = truth.find(p.request_id);
    if (it == truth.end()) throw DataError(Stage::eval, "prediction for unknown request '" + p.request_id + "'");
    const bool predicted = is_positive(p.fault_class);
    if (predicted && it->second) ++c.t_plus;
    else if (predicted) ++c.f_plus;
    else if (it->second) ++c.f_minus;
    else ++c.t_minus;
    ++c.total;
  }
  return c;
}

namespace {

double ratio(std::size_t num, std::size_t den) {
  return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
}

double harmonic(double p, double r) { return p + r == 0.0 ? 0.0 : 2.0 * p * r / (p + r); }

}  // namespace

MetricSet metrics(const ConfusionCounts& c) {
  MetricSet m;
  m.accuracy = ratio(c.t_plus + c.t_minus, c.total);
  m.precision = ratio(c.t_plus, c.t_plus + c.f_plus);
  m.recall = ratio(c.t_plus, c.t_plus + c.f_minus);
  m.f_measure = harmonic(m.precision, m.recall);
  m.paper_precision = ratio(c.t_plus, c.t_plus + c.t_minus);
  m.paper_f_measure = harmonic(m.paper_precision, m.recall);
  return m;
}

pipeline::Analysis baseline_dfp(const pipeline::Corpus& corpus, pipeline::AnalysisConfig config) {
  config.use_correlation = false;
  return pipeline::analyze(corpus, config);
}

namespace {

MethodResult run_method(std::string name, const pipeline::Corpus& train,
                        const std::vector<ChangeRequest>& test,
                        const pipeline::AnalysisConfig& config) {
  const auto analysis = pipeline::analyze(train, config);
  const auto model = pipeline::model_from(analysis, config);
  const auto predictions = pipeline::score_requests(model, test, config);
  MethodResult r;
  r.method = std::move(name);
  r.counts = confusion(predictions, test);
  r.metrics = metrics(r.counts);
  r.band = analysis.report.band;
  r.correlated_sets = analysis.sets.size();
  return r;
}

}  // namespace

EvaluationReport evaluate(const pipeline::Corpus& corpus, const pipeline::AnalysisConfig& config,
                          double train_fraction) {
  if (corpus.requests.size() < 2) throw DataError(Stage::eval, "evaluation needs at least two change requests");
  auto parts = split(corpus.requests, train_fraction, config.seed);

  std::unordered_set<std::string_view> train_ids;
  for (const auto& cr : parts.train) train_ids.insert(cr.id);
  pipeline::Corpus train;
  train.requests = parts.train;
  for (const auto& ev : corpus.events) {
    RevisionEvent kept = ev;
    std::erase_if(kept.linked_cr_ids, [&](const std::string& id) { return !train_ids.contains(id); });
    train.events.push_back(std::move(kept));
  }

  EvaluationReport report;
  report.train_size = parts.train.size();
  report.test_size = parts.test.size();
  report.train_fraction = train_fraction;
  report.seed = config.seed;
  auto correlated = config;
  correlated.use_correlation = true;
  auto baseline = config;
  baseline.use_correlation = false;
  report.methods.push_back(run_method("DFP-CRC", train, parts.test, correlated));
  report.methods.push_back(run_method("DFP", train, parts.test, baseline));
  return report;
}

std::string evaluation_json(const EvaluationReport& report) {
  nlohmann::ordered_json doc;
  doc["train_size"] = report.train_size;
  doc["test_size"] = report.test_size;
  doc["train_fraction"] = report.train_fraction;
  doc["seed"] = report.seed;
  auto methods = nlohmann::ordered_json::array();
  for (const auto& m : report.methods) {
    methods.push_back({
        {"method", m.method},
        {"correlated_sets", m.correlated_sets},
        {"band", {{"dfpt", m.band.dfpt}, {"sdv", m.band.sdv}, {"lower", m.band.lower}, {"upper", m.band.upper}}},
        {"counts",
         {{"t_plus", m.counts.t_plus},
          {"f_plus", m.counts.f_plus},
          {"f_minus", m.counts.f_minus},
          {"t_minus", m.counts.t_minus},
          {"total", m.counts.total}}},
        {"metrics",
         {{"accuracy", m.metrics.accuracy},
          {"precision", m.metrics.precision},
          {"recall", m.metrics.recall},
          {"f_measure", m.metrics.f_measure},
          {"paper_precision", m.metrics.paper_precision},
          {"paper_f_measure", m.metrics.paper_f_measure}}},
    });
  }
  doc["methods"] = std::move(methods);
  return doc.dump(2) + "\n";
}

std::string metrics_csv(const EvaluationReport& report) {
  std::ostringstream out;
  out.precision(17);
  out << "method,accuracy,precision,recall,f_measure\n";
  for (const auto& m : report.methods) {
    out << m.method << ',' << m.metrics.accuracy << ',' << m.metrics.precision << ','
        << m.metrics.recall << ',' << m.metrics.f_measure << '\n';
  }
  return out.str();
}

std::string comparison_csv(const EvaluationReport& report) {
  std::ostringstream out;
  out.precision(17);
  out << "method,metric,value\n";
  for (const auto& m : report.methods) {
    out << m.method << ",accuracy," << m.metrics.accuracy << '\n'
        << m.method << ",precision," << m.metrics.precision << '\n'
        << m.method << ",recall," << m.metrics.recall << '\n'
        << m.method << ",f_measure," << m.metrics.f_measure << '\n';
  }
  return out.str();
}

}  // namespace dfpcrc::eval
