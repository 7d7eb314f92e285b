#pragma once

// Mean-square contingency coefficient between change-request artifacts and
// k-medoids grouping of artifacts into correlated sets.

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "dfpcrc/ingest.hpp"
#include "dfpcrc/taxonomy.hpp"

namespace dfpcrc::correlation {

/// Code blocks revised under each change request; the co-occurrence basis
/// for contingency tables.
class CoRevisionIndex {
 public:
  static CoRevisionIndex from_events(const std::vector<RevisionEvent>& events);

  void add(std::string_view cr_id, std::uint32_t block);
  /// Sorted, unique; empty for unknown requests.
  std::span<const std::uint32_t> blocks_of(std::string_view cr_id) const;
  std::uint64_t shared_blocks(std::string_view a, std::string_view b) const;

 private:
  void finalize();

  std::unordered_map<std::string, std::vector<std::uint32_t>> blocks_;
};

struct ContingencyTable {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<std::uint64_t> counts;  // row-major
  std::vector<std::uint64_t> row_totals;
  std::vector<std::uint64_t> col_totals;
  std::uint64_t total = 0;

  static ContingencyTable from_counts(std::size_t rows, std::size_t cols,
                                      std::vector<std::uint64_t> counts);
  std::uint64_t at(std::size_t i, std::size_t j) const { return counts[i * cols + j]; }
};

/// o(a_i, b_j) = number of code blocks revised under both a_i and b_j.
ContingencyTable contingency_table(const taxonomy::ChangeRequestArtifact& a,
                                   const taxonomy::ChangeRequestArtifact& b,
                                   const CoRevisionIndex& index);

/// Same table holding only its non-zero cells; built through a block ->
/// member inverted index, so cost follows co-revisions instead of m * n.
struct SparseContingencyTable {
  struct Cell {
    std::uint32_t row = 0;
    std::uint32_t col = 0;
    std::uint64_t count = 0;
  };
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<Cell> cells;  // row-major order
  std::vector<std::uint64_t> row_totals;
  std::vector<std::uint64_t> col_totals;
  std::uint64_t total = 0;

  static SparseContingencyTable from_dense(const ContingencyTable& t);
};

SparseContingencyTable sparse_contingency_table(const taxonomy::ChangeRequestArtifact& a,
                                                const taxonomy::ChangeRequestArtifact& b,
                                                const CoRevisionIndex& index);

enum class ChiSquareMode { standard, paper_literal };

/// 1/(min(m,n)-1) * sum (p_ij - p_i p_j)^2 / (p_i p_j).
/// standard: p = count / N, zero-marginal cells skipped, clamped to [0, 1].
/// paper_literal: p = 1 - 1/count (0 for a zero count), no clamping.
/// Throws DataError for a table with a single row or column, or (standard)
/// an empty table.
double chi_square(const ContingencyTable& t, ChiSquareMode mode = ChiSquareMode::standard);

/// Same value from the non-zero cells; zero cells enter through the sum of
/// all expected fractions.
double chi_square(const SparseContingencyTable& t, ChiSquareMode mode = ChiSquareMode::standard);

struct CorrelationMatrix {
  std::vector<taxonomy::ArtifactKind> kinds;
  std::vector<double> values;  // n x n, symmetric
  std::size_t degenerate_pairs = 0;

  std::size_t size() const noexcept { return kinds.size(); }
  double at(std::size_t i, std::size_t j) const { return values[i * kinds.size() + j]; }
};

/// Pairwise coefficients, each unordered pair computed once. Degenerate pairs
/// are recorded as 0 and counted. The standard-mode diagonal is 1.
CorrelationMatrix correlation_matrix(const std::vector<taxonomy::ChangeRequestArtifact>& artifacts,
                                     const CoRevisionIndex& index,
                                     ChiSquareMode mode = ChiSquareMode::standard);

/// CSV with an artifact-kind header row and one row per artifact.
std::string correlation_csv(const CorrelationMatrix& m);

struct DissimilarityMatrix {
  std::size_t n = 0;
  std::vector<double> values;  // n x n

  double at(std::size_t i, std::size_t j) const { return values[i * n + j]; }
};

/// d = 1 - clamp(coefficient, 0, 1) with a zero diagonal.
DissimilarityMatrix dissimilarity(const CorrelationMatrix& m);

struct CorrelatedArtifactSet {
  std::size_t medoid = 0;            // index into the artifact list
  std::vector<std::size_t> members;  // sorted, contains medoid

  bool operator==(const CorrelatedArtifactSet&) const = default;
};

struct KMedoidsResult {
  std::vector<CorrelatedArtifactSet> sets;  // ordered by smallest member
  double cost = 0.0;
  std::vector<double> cost_history;  // after every assignment step
  std::size_t iterations = 0;
};

/// round(sqrt(n / 2)), at least 1.
std::size_t default_k(std::size_t n);

/// Greedy start from a seeded first medoid, alternating assignment / medoid
/// update until stable (at most 100 rounds), then single-swap refinement.
/// Repeated from up to eight seeded first medoids; the cheapest run wins and
/// its cost_history is reported. Throws DataError when k is outside [1, n].
KMedoidsResult k_medoids(const DissimilarityMatrix& dist, std::size_t k, std::uint64_t seed);

/// Sum over points of the distance to the nearest of `medoids`.
double clustering_cost(const DissimilarityMatrix& dist, const std::vector<std::size_t>& medoids);

/// Every artifact in its own set.
std::vector<CorrelatedArtifactSet> singleton_sets(std::size_t n);

}  // namespace dfpcrc::correlation
