#include "dfpcrc/dfp.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "dfpcrc/error.hpp"

namespace dfpcrc::dfp {

std::string_view to_string(FaultClass c) noexcept {
  switch (c) {
    case FaultClass::safe: return "safe";
    case FaultClass::possibly_fault_prone: return "possibly_fault_prone";
    case FaultClass::highly_fault_prone: return "highly_fault_prone";
  }
  return "safe";
}

std::optional<FaultClass> parse_fault_class(std::string_view s) noexcept {
  if (s == "safe") return FaultClass::safe;
  if (s == "possibly_fault_prone") return FaultClass::possibly_fault_prone;
  if (s == "highly_fault_prone") return FaultClass::highly_fault_prone;
  return std::nullopt;
}

std::optional<EffectiveRule> parse_effective_rule(std::string_view s) noexcept {
  if (s == "max") return EffectiveRule::max;
  if (s == "mean") return EffectiveRule::mean;
  return std::nullopt;
}

double dfp_of_set(const correlation::CorrelatedArtifactSet& set, const std::vector<double>& scores,
                  std::size_t total_artifacts) {
  if (total_artifacts == 0) throw DataError(Stage::dfp, "no change request artifacts");
  double support = 0.0;
  for (std::size_t member : set.members) {
    if (member >= scores.size())
      throw DataError(Stage::dfp, "artifact " + std::to_string(member) + " has no revision support");
    support += scores[member];
  }
  return std::clamp(1.0 - support / static_cast<double>(total_artifacts), 0.0, 1.0);
}

double dfp_of_artifact(std::size_t artifact,
                       const std::vector<correlation::CorrelatedArtifactSet>& sets,
                       const std::vector<double>& set_dfps) {
  if (sets.size() != set_dfps.size())
    throw InvariantError(Stage::dfp, "one dfp per correlated set expected");
  double sum = 0.0;
  bool found = false;
  for (std::size_t s = 0; s < sets.size(); ++s) {
    const auto& m = sets[s].members;
    if (std::find(m.begin(), m.end(), artifact) != m.end()) {
      sum += set_dfps[s];
      found = true;
    }
  }
  if (!found) {
    throw DataError(Stage::dfp, "artifact " + std::to_string(artifact) +
                                    " belongs to no correlated set");
  }
  return std::clamp(1.0 - sum / static_cast<double>(sets.size()), 0.0, 1.0);
}

ThresholdBand threshold_band(const std::vector<double>& artifact_dfps) {
  const std::size_t n = artifact_dfps.size();
  if (n < 2) throw DataError(Stage::dfp, "threshold band needs at least two artifacts");
  // Welford: identical inputs give an exact mean and a zero deviation.
  double mean = 0.0, m2 = 0.0;
  std::size_t k = 0;
  for (double v : artifact_dfps) {
    ++k;
    const double delta = v - mean;
    mean += delta / static_cast<double>(k);
    m2 += delta * (v - mean);
  }
  ThresholdBand band;
  band.dfpt = mean;
  band.sdv = std::sqrt(m2 / static_cast<double>(n - 1));
  band.lower = band.dfpt - band.sdv;
  band.upper = band.dfpt + band.sdv;
  return band;
}

FaultClass classify_dfp(double dfp, const ThresholdBand& band) noexcept {
  if (dfp >= band.upper) return FaultClass::highly_fault_prone;
  if (dfp >= band.lower) return FaultClass::possibly_fault_prone;
  return FaultClass::safe;
}

double effective_dfp(const std::vector<double>& artifact_dfps, EffectiveRule rule,
                     std::string_view request_id) {
  if (artifact_dfps.empty()) {
    throw DataError(Stage::dfp, "change request '" + std::string(request_id) +
                                    "' is not mapped to any artifact");
  }
  if (rule == EffectiveRule::max) return *std::max_element(artifact_dfps.begin(), artifact_dfps.end());
  return std::accumulate(artifact_dfps.begin(), artifact_dfps.end(), 0.0) /
         static_cast<double>(artifact_dfps.size());
}

RequestClassification classify_request(std::string request_id,
                                       const std::vector<double>& artifact_dfps,
                                       const ThresholdBand& band, EffectiveRule rule) {
  const double value = effective_dfp(artifact_dfps, rule, request_id);
  return {std::move(request_id), value, classify_dfp(value, band)};
}

DfpReport compute_report(const std::vector<taxonomy::ChangeRequestArtifact>& artifacts,
                         const std::vector<graph::ArtifactScore>& scores,
                         const std::vector<correlation::CorrelatedArtifactSet>& sets) {
  const std::size_t n = artifacts.size();
  if (scores.size() != n) throw InvariantError(Stage::dfp, "one revision support per artifact expected");
  std::vector<double> rs(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (scores[i].kind != artifacts[i].kind)
      throw InvariantError(Stage::dfp, "revision support order does not match artifacts");
    rs[i] = scores[i].rs;
  }

  std::vector<std::size_t> owner(n, sets.size());
  for (std::size_t s = 0; s < sets.size(); ++s) {
    for (std::size_t m : sets[s].members) {
      if (m >= n) throw InvariantError(Stage::dfp, "correlated set names an unknown artifact");
      if (owner[m] != sets.size()) throw InvariantError(Stage::dfp, "correlated sets overlap");
      owner[m] = s;
    }
  }

  DfpReport report;
  std::vector<double> set_dfps;
  for (const auto& set : sets) {
    set_dfps.push_back(dfp_of_set(set, rs, n));
    report.sets.push_back({set, set_dfps.back()});
  }
  std::vector<double> artifact_dfps;
  for (std::size_t i = 0; i < n; ++i) {
    if (owner[i] == sets.size())
      throw DataError(Stage::dfp, "artifact " + artifacts[i].kind.name() + " belongs to no correlated set");
    artifact_dfps.push_back(dfp_of_artifact(i, sets, set_dfps));
    report.artifacts.push_back(
        {artifacts[i].kind, artifacts[i].members.size(), rs[i], artifact_dfps.back(), owner[i]});
  }
  report.band = threshold_band(artifact_dfps);
  return report;
}

}  // namespace dfpcrc::dfp
