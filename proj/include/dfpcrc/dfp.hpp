#pragma once

// Degree of fault proneness for correlated artifact sets, artifacts and
// change requests, plus the mean +/- one standard deviation band.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dfpcrc/correlation.hpp"
#include "dfpcrc/graph.hpp"

namespace dfpcrc::dfp {

enum class FaultClass { safe, possibly_fault_prone, highly_fault_prone };

std::string_view to_string(FaultClass c) noexcept;
std::optional<FaultClass> parse_fault_class(std::string_view s) noexcept;

/// 1 - sum(rs of members) / |CRA|. `scores[i]` is the rs of artifact i.
double dfp_of_set(const correlation::CorrelatedArtifactSet& set, const std::vector<double>& scores,
                  std::size_t total_artifacts);

/// 1 - sum(dfp of the sets holding `artifact`) / |CCRAS|.
double dfp_of_artifact(std::size_t artifact,
                       const std::vector<correlation::CorrelatedArtifactSet>& sets,
                       const std::vector<double>& set_dfps);

struct ThresholdBand {
  double dfpt = 0.0;
  double sdv = 0.0;
  double lower = 0.0;
  double upper = 0.0;
};

/// Mean and sample standard deviation (divisor n - 1); needs >= 2 values.
ThresholdBand threshold_band(const std::vector<double>& artifact_dfps);

/// dfp < lower -> safe; lower <= dfp < upper -> possibly; dfp >= upper -> highly.
FaultClass classify_dfp(double dfp, const ThresholdBand& band) noexcept;

enum class EffectiveRule { max, mean };
std::optional<EffectiveRule> parse_effective_rule(std::string_view s) noexcept;

/// Effective dfp of a request over the dfps of its artifacts. Throws
/// DataError when the request has no artifact.
double effective_dfp(const std::vector<double>& artifact_dfps, EffectiveRule rule,
                     std::string_view request_id = {});

struct RequestClassification {
  std::string request_id;
  double dfp = 0.0;
  FaultClass fault_class = FaultClass::safe;
};

RequestClassification classify_request(std::string request_id,
                                       const std::vector<double>& artifact_dfps,
                                       const ThresholdBand& band,
                                       EffectiveRule rule = EffectiveRule::max);

struct SetDfp {
  correlation::CorrelatedArtifactSet set;
  double dfp = 0.0;
};

struct ArtifactDfp {
  taxonomy::ArtifactKind kind;
  std::size_t members = 0;
  double rs = 0.0;
  double dfp = 0.0;
  std::size_t set = 0;  // index into DfpReport::sets
};

struct DfpReport {
  std::vector<SetDfp> sets;
  std::vector<ArtifactDfp> artifacts;
  ThresholdBand band;
  std::vector<RequestClassification> classifications;
};

/// Set and artifact dfps plus the band; classifications are left empty.
/// `artifacts` and `scores` are parallel; `sets` must partition them.
DfpReport compute_report(const std::vector<taxonomy::ChangeRequestArtifact>& artifacts,
                         const std::vector<graph::ArtifactScore>& scores,
                         const std::vector<correlation::CorrelatedArtifactSet>& sets);

}  // namespace dfpcrc::dfp
