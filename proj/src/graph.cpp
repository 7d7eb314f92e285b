#include "dfpcrc/graph.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <unordered_map>

#include <json.hpp>

#include "dfpcrc/error.hpp"
#include "dfpcrc/kernels.hpp"

namespace dfpcrc::graph {

double edge_weight(std::uint64_t revisions) {
  if (revisions == 0) throw DataError(Stage::graph, "edge weight needs at least one revision");
  return 1.0 - 1.0 / static_cast<double>(revisions);
}

BipartiteGraph build_graph(const std::vector<RevisionEvent>& events,
                           const std::vector<taxonomy::ChangeRequestArtifact>& artifacts) {
  BipartiteGraph g;
  for (const auto& block : ingest::code_blocks(events)) g.code_blocks.push_back(block.id);
  std::unordered_map<std::string_view, std::uint32_t> block_index;
  for (std::uint32_t i = 0; i < g.code_blocks.size(); ++i) block_index.emplace(g.code_blocks[i], i);

  std::unordered_map<std::string_view, std::vector<std::uint32_t>> artifacts_of;
  for (std::uint32_t a = 0; a < artifacts.size(); ++a) {
    g.artifacts.push_back(artifacts[a].kind);
    for (const auto& id : artifacts[a].members) artifacts_of[id].push_back(a);
  }

  std::map<std::pair<std::uint32_t, std::uint32_t>, std::uint64_t> counts;
  std::vector<std::uint32_t> touched;
  for (const auto& e : events) {
    touched.clear();
    for (const auto& cr : e.linked_cr_ids) {
      auto it = artifacts_of.find(cr);
      if (it == artifacts_of.end()) continue;
      touched.insert(touched.end(), it->second.begin(), it->second.end());
    }
    std::sort(touched.begin(), touched.end());
    touched.erase(std::unique(touched.begin(), touched.end()), touched.end());
    const std::uint32_t b = block_index.at(e.code_block_id);
    for (std::uint32_t a : touched) ++counts[{b, a}];
  }
  g.edges.reserve(counts.size());
  for (const auto& [key, r] : counts) g.edges.push_back({key.first, key.second, r, edge_weight(r)});
  return g;
}

std::string dump_graph_jsonl(const BipartiteGraph& g) {
  std::string out;
  for (const auto& e : g.edges) {
    nlohmann::json line = {{"artifact", g.artifacts[e.artifact].name()},
                           {"block", g.code_blocks[e.block]},
                           {"r", e.revisions},
                           {"ew", e.weight}};
    out += line.dump();
    out += '\n';
  }
  return out;
}

namespace {

// Row-major blocks x artifacts.
class DenseMatrix {
 public:
  explicit DenseMatrix(const BipartiteGraph& g)
      : rows_(g.block_count()), cols_(g.artifact_count()), data_(rows_ * cols_, 0.0) {
    for (const auto& e : g.edges) data_[e.block * cols_ + e.artifact] = e.weight;
  }

  // out = A^T x
  void transpose_times(std::span<const double> x, std::span<double> out) const {
    std::fill(out.begin(), out.end(), 0.0);
    for (std::size_t i = 0; i < rows_; ++i) {
      if (x[i] != 0.0) kernels::axpy(x[i], row(i), out);
    }
  }

  // out = A x
  void times(std::span<const double> x, std::span<double> out) const {
    for (std::size_t i = 0; i < rows_; ++i) out[i] = kernels::dot(row(i), x);
  }

 private:
  std::span<const double> row(std::size_t i) const { return {data_.data() + i * cols_, cols_}; }

  std::size_t rows_;
  std::size_t cols_;
  std::vector<double> data_;
};

// CSR over code-block rows; edges are already sorted by (block, artifact).
class SparseMatrix {
 public:
  explicit SparseMatrix(const BipartiteGraph& g) : row_start_(g.block_count() + 1, 0) {
    values_.reserve(g.edges.size());
    cols_.reserve(g.edges.size());
    for (const auto& e : g.edges) {
      ++row_start_[e.block + 1];
      values_.push_back(e.weight);
      cols_.push_back(e.artifact);
    }
    for (std::size_t i = 1; i < row_start_.size(); ++i) row_start_[i] += row_start_[i - 1];
  }

  void transpose_times(std::span<const double> x, std::span<double> out) const {
    std::fill(out.begin(), out.end(), 0.0);
    for (std::size_t i = 0; i + 1 < row_start_.size(); ++i) {
      const double xi = x[i];
      if (xi == 0.0) continue;
      for (std::size_t k = row_start_[i]; k < row_start_[i + 1]; ++k) out[cols_[k]] += values_[k] * xi;
    }
  }

  void times(std::span<const double> x, std::span<double> out) const {
    const std::span<const double> values(values_);
    const std::span<const std::uint32_t> cols(cols_);
    for (std::size_t i = 0; i + 1 < row_start_.size(); ++i) {
      const std::size_t lo = row_start_[i];
      const std::size_t n = row_start_[i + 1] - lo;
      out[i] = kernels::sparse_dot(values.subspan(lo, n), cols.subspan(lo, n), x);
    }
  }

 private:
  std::vector<std::size_t> row_start_;
  std::vector<double> values_;
  std::vector<std::uint32_t> cols_;
};

// Scales to unit L2 norm; returns false (leaving zeros) for a zero vector.
bool normalize(std::span<double> v) {
  const double norm = kernels::norm2(v);
  if (norm == 0.0 || !std::isfinite(norm)) return false;
  kernels::scale(1.0 / norm, v);
  return true;
}

template <typename Matrix>
HitsState iterate(const Matrix& a, std::size_t m, std::size_t n, const HitsOptions& options) {
  HitsState s;
  s.hub.assign(m, 1.0);
  s.authority.assign(n, 0.0);
  std::vector<double> next_hub(m, 0.0);
  std::vector<double> next_authority(n, 0.0);

  if (options.mode == HitsMode::single_pass) {
    a.transpose_times(s.hub, s.authority);
    a.times(s.authority, next_hub);
    s.residual = kernels::max_abs_diff(next_hub, s.hub);
    s.hub.swap(next_hub);
    s.iterations = 1;
    s.converged = true;
    return s;
  }

  for (std::size_t it = 0; it < options.max_iter; ++it) {
    a.transpose_times(s.hub, next_authority);
    const bool nonzero = normalize(next_authority);
    a.times(next_authority, next_hub);
    normalize(next_hub);
    s.residual = std::max(kernels::max_abs_diff(next_hub, s.hub),
                          kernels::max_abs_diff(next_authority, s.authority));
    s.hub.swap(next_hub);
    s.authority.swap(next_authority);
    s.iterations = it + 1;
    if (!nonzero || s.residual <= options.tolerance) {
      // A zero authority vector is a fixed point of the iteration.
      s.converged = true;
      break;
    }
  }
  return s;
}

}  // namespace

HitsState run_hits(const BipartiteGraph& g, const HitsOptions& options) {
  if (g.edges.empty()) throw DataError(Stage::graph, "no edges");
  if (!(options.tolerance > 0.0)) throw DataError(Stage::graph, "tolerance must be positive");
  const std::size_t m = g.block_count();
  const std::size_t n = g.artifact_count();
  bool dense = options.layout == MatrixLayout::dense;
  if (options.layout == MatrixLayout::automatic) dense = m * n <= options.dense_cell_limit;
  if (dense) return iterate(DenseMatrix(g), m, n, options);
  return iterate(SparseMatrix(g), m, n, options);
}

std::vector<ArtifactScore> revision_support(const BipartiteGraph& g, const HitsState& h) {
  if (h.hub.size() != g.block_count() || h.authority.size() != g.artifact_count())
    throw InvariantError(Stage::graph, "hub/authority vectors do not match the graph");
  const double total = kernels::sum(h.hub);
  if (!(total > 0.0)) throw DataError(Stage::graph, "degenerate hub vector");
  std::vector<double> numerator(g.artifact_count(), 0.0);
  for (const auto& e : g.edges) {
    if (e.weight > 0.0) numerator[e.artifact] += h.hub[e.block];
  }
  std::vector<ArtifactScore> out;
  out.reserve(g.artifact_count());
  for (std::size_t a = 0; a < g.artifact_count(); ++a) {
    out.push_back({g.artifacts[a], std::clamp(numerator[a] / total, 0.0, 1.0)});
  }
  return out;
}

}  // namespace dfpcrc::graph
