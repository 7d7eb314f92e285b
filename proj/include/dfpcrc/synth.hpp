#pragma once

// Seeded synthetic corpora: change requests with keyword-bearing
// descriptions, revision events on numbered code blocks, and planted
// fault-proneness with ground-truth labels.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "dfpcrc/ingest.hpp"
#include "dfpcrc/taxonomy.hpp"

namespace dfpcrc::synth {

/// One entry of the kind mixture. A kind with `follows` set revises a subset
/// of the blocks of an earlier request of that lead kind; otherwise it owns a
/// block region of its own.
struct KindSpec {
  taxonomy::ArtifactKind kind;
  double weight = 0.0;
  std::optional<taxonomy::ArtifactKind> follows;
};

struct SynthConfig {
  std::uint64_t seed = 42;
  std::size_t num_requests = 500;
  std::size_t num_blocks = 2000;
  std::vector<KindSpec> mixture;
  std::vector<taxonomy::ArtifactKind> planted;
  double multiplier = 5.0;
  /// Revisions per touched block: 1 + geometric(p_continue), times the
  /// multiplier for planted kinds.
  double continue_probability = 0.5;
  std::size_t min_blocks_per_request = 1;
  std::size_t max_blocks_per_request = 4;

  /// Two families: a planted lead with four followers and an unplanted lead
  /// with two.
  static SynthConfig defaults();

  /// Violated constraints, one per entry; empty when valid.
  std::vector<std::string> violations() const;
  /// Throws DataError listing every violation.
  void validate() const;
};

struct SynthCorpus {
  std::string requests_jsonl;
  std::string revisions_jsonl;
  std::vector<ChangeRequest> requests;  // with ground_truth set
  std::vector<RevisionEvent> events;    // already linked
  std::vector<taxonomy::ArtifactKind> intended;  // parallel to requests
};

/// A request is labelled fault-prone when its kind is planted or follows a
/// planted lead.
SynthCorpus generate(const SynthConfig& config);

/// Short description that classifies as exactly `kind` under the default rules.
std::string describe(const taxonomy::ArtifactKind& kind, std::size_t variant);

}  // namespace dfpcrc::synth
