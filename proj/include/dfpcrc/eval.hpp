#pragma once

// Holdout evaluation: deterministic split, confusion counts, accuracy /
// precision / recall / F-measure, and the comparison between the correlated
// model and the correlation-free baseline.

#include <cstdint>
#include <string>
#include <vector>

#include "dfpcrc/dfp.hpp"
#include "dfpcrc/ingest.hpp"
#include "dfpcrc/pipeline.hpp"

namespace dfpcrc::eval {

struct Split {
  std::vector<ChangeRequest> train;
  std::vector<ChangeRequest> test;
};

/// Seeded Fisher-Yates shuffle; round(fraction * n) items go to train, kept
/// within [1, n - 1] when n >= 2.
Split split(const std::vector<ChangeRequest>& crs, double train_fraction, std::uint64_t seed);

struct ConfusionCounts {
  std::size_t t_plus = 0;
  std::size_t f_plus = 0;
  std::size_t f_minus = 0;
  std::size_t t_minus = 0;
  std::size_t total = 0;

  bool operator==(const ConfusionCounts&) const = default;
};

/// Possibly and highly fault-prone both count as a positive prediction.
bool is_positive(dfp::FaultClass c) noexcept;

/// Truth is read from each request's ground_truth; missing truth is an error.
ConfusionCounts confusion(const std::vector<dfp::RequestClassification>& predictions,
                          const std::vector<ChangeRequest>& labelled);

struct MetricSet {
  double accuracy = 0.0;
  double precision = 0.0;
  double recall = 0.0;
  double f_measure = 0.0;
  // t+/(t+ + t-), reported beside the standard precision.
  double paper_precision = 0.0;
  double paper_f_measure = 0.0;
};

MetricSet metrics(const ConfusionCounts& c);

/// Same pipeline with singleton correlated sets.
pipeline::Analysis baseline_dfp(const pipeline::Corpus& corpus, pipeline::AnalysisConfig config);

struct MethodResult {
  std::string method;  // "DFP-CRC" or "DFP"
  ConfusionCounts counts;
  MetricSet metrics;
  dfp::ThresholdBand band;
  std::size_t correlated_sets = 0;
};

struct EvaluationReport {
  std::size_t train_size = 0;
  std::size_t test_size = 0;
  double train_fraction = 0.0;
  std::uint64_t seed = 0;
  std::vector<MethodResult> methods;  // DFP-CRC first, then DFP
};

/// Splits the requests, trains both methods on the training part (events
/// keep only links to training requests) and scores the held-out part.
EvaluationReport evaluate(const pipeline::Corpus& corpus, const pipeline::AnalysisConfig& config,
                          double train_fraction);

std::string evaluation_json(const EvaluationReport& report);
/// method,accuracy,precision,recall,f_measure
std::string metrics_csv(const EvaluationReport& report);
/// Plot-ready long format: method,metric,value
std::string comparison_csv(const EvaluationReport& report);

}  // namespace dfpcrc::eval
