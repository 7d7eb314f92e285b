#pragma once

// Weighted bipartite graph between code blocks (hubs) and change-request
// artifacts (authorities), the hub/authority iteration over it, and the
// revision support of each artifact.

#include <cstdint>
#include <string>
#include <vector>

#include "dfpcrc/ingest.hpp"
#include "dfpcrc/taxonomy.hpp"

namespace dfpcrc::graph {

/// Edge weight for r revisions: 1 - 1/r. Requires r >= 1.
double edge_weight(std::uint64_t revisions);

struct Edge {
  std::uint32_t block = 0;     // row in the weight matrix
  std::uint32_t artifact = 0;  // column in the weight matrix
  std::uint64_t revisions = 0;
  double weight = 0.0;

  bool operator==(const Edge&) const = default;
};

struct BipartiteGraph {
  std::vector<std::string> code_blocks;           // sorted ids, size m
  std::vector<taxonomy::ArtifactKind> artifacts;  // size n
  std::vector<Edge> edges;                        // sorted by (block, artifact)

  std::size_t block_count() const noexcept { return code_blocks.size(); }
  std::size_t artifact_count() const noexcept { return artifacts.size(); }
  bool operator==(const BipartiteGraph&) const = default;
};

/// r(cra, cb) counts the events on cb linked to at least one member of cra.
BipartiteGraph build_graph(const std::vector<RevisionEvent>& events,
                           const std::vector<taxonomy::ChangeRequestArtifact>& artifacts);

/// jsonl lines of {artifact, block, r, ew}.
std::string dump_graph_jsonl(const BipartiteGraph& g);

enum class HitsMode { converged, single_pass };
enum class MatrixLayout { automatic, dense, sparse };

struct HitsOptions {
  HitsMode mode = HitsMode::converged;
  double tolerance = 1e-9;
  std::size_t max_iter = 1000;
  MatrixLayout layout = MatrixLayout::automatic;
  /// automatic layout goes dense while blocks * artifacts stays at or below this.
  std::size_t dense_cell_limit = std::size_t{1} << 22;
};

struct HitsState {
  std::vector<double> hub;        // per code block
  std::vector<double> authority;  // per artifact
  std::size_t iterations = 0;
  double residual = 0.0;
  bool converged = false;
};

/// Hub weights start at one. Each round computes authority = A^T hub and
/// hub = A authority (rows of A are code blocks). In converged mode both
/// vectors are L2-normalized every round and the loop stops once the largest
/// change of either drops to the tolerance; single_pass runs one
/// unnormalized round.
HitsState run_hits(const BipartiteGraph& g, const HitsOptions& options = {});

struct ArtifactScore {
  taxonomy::ArtifactKind kind;
  double rs = 0.0;
};

/// rs(cra) = sum of hub weights of blocks with ew(cra, cb) > 0, divided by
/// the total hub weight.
std::vector<ArtifactScore> revision_support(const BipartiteGraph& g, const HitsState& h);

}  // namespace dfpcrc::graph
