#include "dfpcrc/correlation.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "dfpcrc/error.hpp"

namespace dfpcrc::correlation {

CoRevisionIndex CoRevisionIndex::from_events(const std::vector<RevisionEvent>& events) {
  CoRevisionIndex index;
  const auto blocks = ingest::code_blocks(events);
  std::unordered_map<std::string_view, std::uint32_t> block_ids;
  for (std::uint32_t i = 0; i < blocks.size(); ++i) block_ids.emplace(blocks[i].id, i);
  for (const auto& e : events) {
    const std::uint32_t b = block_ids.at(e.code_block_id);
    for (const auto& cr : e.linked_cr_ids) index.blocks_[cr].push_back(b);
  }
  index.finalize();
  return index;
}

void CoRevisionIndex::add(std::string_view cr_id, std::uint32_t block) {
  auto& blocks = blocks_[std::string(cr_id)];
  auto pos = std::lower_bound(blocks.begin(), blocks.end(), block);
  if (pos == blocks.end() || *pos != block) blocks.insert(pos, block);
}

void CoRevisionIndex::finalize() {
  for (auto& [id, blocks] : blocks_) {
    std::sort(blocks.begin(), blocks.end());
    blocks.erase(std::unique(blocks.begin(), blocks.end()), blocks.end());
  }
}

std::span<const std::uint32_t> CoRevisionIndex::blocks_of(std::string_view cr_id) const {
  auto it = blocks_.find(std::string(cr_id));
  if (it == blocks_.end()) return {};
  return it->second;
}

std::uint64_t CoRevisionIndex::shared_blocks(std::string_view a, std::string_view b) const {
  const auto x = blocks_of(a);
  const auto y = blocks_of(b);
  std::uint64_t n = 0;
  std::size_t i = 0, j = 0;
  while (i < x.size() && j < y.size()) {
    if (x[i] < y[j]) ++i;
    else if (y[j] < x[i]) ++j;
    else {
      ++n;
      ++i;
      ++j;
    }
  }
  return n;
}

ContingencyTable ContingencyTable::from_counts(std::size_t rows, std::size_t cols,
                                               std::vector<std::uint64_t> counts) {
  if (counts.size() != rows * cols)
    throw InvariantError(Stage::correlation, "contingency counts do not match dimensions");
  ContingencyTable t;
  t.rows = rows;
  t.cols = cols;
  t.counts = std::move(counts);
  t.row_totals.assign(rows, 0);
  t.col_totals.assign(cols, 0);
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < cols; ++j) {
      const auto c = t.counts[i * cols + j];
      t.row_totals[i] += c;
      t.col_totals[j] += c;
      t.total += c;
    }
  }
  return t;
}

ContingencyTable contingency_table(const taxonomy::ChangeRequestArtifact& a,
                                   const taxonomy::ChangeRequestArtifact& b,
                                   const CoRevisionIndex& index) {
  if (a.members.empty() || b.members.empty())
    throw DataError(Stage::correlation, "artifact without change requests");
  std::vector<std::uint64_t> counts(a.members.size() * b.members.size());
  for (std::size_t i = 0; i < a.members.size(); ++i) {
    if (index.blocks_of(a.members[i]).empty()) continue;
    for (std::size_t j = 0; j < b.members.size(); ++j) {
      counts[i * b.members.size() + j] = index.shared_blocks(a.members[i], b.members[j]);
    }
  }
  return ContingencyTable::from_counts(a.members.size(), b.members.size(), std::move(counts));
}

SparseContingencyTable SparseContingencyTable::from_dense(const ContingencyTable& t) {
  SparseContingencyTable s;
  s.rows = t.rows;
  s.cols = t.cols;
  s.row_totals = t.row_totals;
  s.col_totals = t.col_totals;
  s.total = t.total;
  for (std::uint32_t i = 0; i < t.rows; ++i)
    for (std::uint32_t j = 0; j < t.cols; ++j)
      if (t.at(i, j) != 0) s.cells.push_back({i, j, t.at(i, j)});
  return s;
}

SparseContingencyTable sparse_contingency_table(const taxonomy::ChangeRequestArtifact& a,
                                                const taxonomy::ChangeRequestArtifact& b,
                                                const CoRevisionIndex& index) {
  if (a.members.empty() || b.members.empty())
    throw DataError(Stage::correlation, "artifact without change requests");
  SparseContingencyTable t;
  t.rows = a.members.size();
  t.cols = b.members.size();
  t.row_totals.assign(t.rows, 0);
  t.col_totals.assign(t.cols, 0);

  std::unordered_map<std::uint32_t, std::vector<std::uint32_t>> touching;  // block -> columns
  for (std::uint32_t j = 0; j < t.cols; ++j)
    for (auto block : index.blocks_of(b.members[j])) touching[block].push_back(j);

  std::vector<std::uint64_t> scratch(t.cols, 0);
  std::vector<std::uint32_t> hit;
  for (std::uint32_t i = 0; i < t.rows; ++i) {
    for (auto block : index.blocks_of(a.members[i])) {
      auto it = touching.find(block);
      if (it == touching.end()) continue;
      for (auto j : it->second)
        if (scratch[j]++ == 0) hit.push_back(j);
    }
    std::sort(hit.begin(), hit.end());
    for (auto j : hit) {
      t.cells.push_back({i, j, scratch[j]});
      t.row_totals[i] += scratch[j];
      t.col_totals[j] += scratch[j];
      t.total += scratch[j];
      scratch[j] = 0;
    }
    hit.clear();
  }
  return t;
}

namespace {
double literal_fraction(std::uint64_t count) {
  return count == 0 ? 0.0 : 1.0 - 1.0 / static_cast<double>(count);
}
}  // namespace

double chi_square(const ContingencyTable& t, ChiSquareMode mode) {
  const std::size_t q = std::min(t.rows, t.cols);
  if (q < 2) throw DataError(Stage::correlation, "degenerate table");
  if (mode == ChiSquareMode::standard && t.total == 0)
    throw DataError(Stage::correlation, "empty table");

  const double n = static_cast<double>(t.total);
  auto fraction = [&](std::uint64_t count) {
    return mode == ChiSquareMode::standard ? static_cast<double>(count) / n : literal_fraction(count);
  };

  double acc = 0.0;
  for (std::size_t i = 0; i < t.rows; ++i) {
    const double pi = fraction(t.row_totals[i]);
    if (pi == 0.0) continue;
    for (std::size_t j = 0; j < t.cols; ++j) {
      const double pj = fraction(t.col_totals[j]);
      const double expected = pi * pj;
      if (expected == 0.0) continue;
      const double diff = fraction(t.at(i, j)) - expected;
      acc += diff * diff / expected;
    }
  }
  const double value = acc / static_cast<double>(q - 1);
  return mode == ChiSquareMode::standard ? std::clamp(value, 0.0, 1.0) : value;
}

double chi_square(const SparseContingencyTable& t, ChiSquareMode mode) {
  const std::size_t q = std::min(t.rows, t.cols);
  if (q < 2) throw DataError(Stage::correlation, "degenerate table");
  if (mode == ChiSquareMode::standard && t.total == 0)
    throw DataError(Stage::correlation, "empty table");

  const double n = static_cast<double>(t.total);
  auto fraction = [&](std::uint64_t count) {
    return mode == ChiSquareMode::standard ? static_cast<double>(count) / n : literal_fraction(count);
  };
  std::vector<double> pr(t.rows), pc(t.cols);
  double sum_r = 0.0, sum_c = 0.0;
  std::size_t live_r = 0, live_c = 0;
  for (std::size_t i = 0; i < t.rows; ++i) {
    pr[i] = fraction(t.row_totals[i]);
    sum_r += pr[i];
    live_r += pr[i] > 0.0;
  }
  for (std::size_t j = 0; j < t.cols; ++j) {
    pc[j] = fraction(t.col_totals[j]);
    sum_c += pc[j];
    live_c += pc[j] > 0.0;
  }

  // Cells with a positive expectation: listed ones directly, the rest contribute
  // their expectation, which is the total expectation minus the listed part.
  double acc = 0.0, listed_expected = 0.0;
  std::size_t listed = 0;
  for (const auto& c : t.cells) {
    const double expected = pr[c.row] * pc[c.col];
    if (expected == 0.0) continue;
    const double diff = fraction(c.count) - expected;
    acc += diff * diff / expected;
    listed_expected += expected;
    ++listed;
  }
  if (listed < live_r * live_c) acc += std::max(0.0, sum_r * sum_c - listed_expected);

  const double value = acc / static_cast<double>(q - 1);
  return mode == ChiSquareMode::standard ? std::clamp(value, 0.0, 1.0) : value;
}

CorrelationMatrix correlation_matrix(const std::vector<taxonomy::ChangeRequestArtifact>& artifacts,
                                     const CoRevisionIndex& index, ChiSquareMode mode) {
  CorrelationMatrix m;
  const std::size_t n = artifacts.size();
  for (const auto& a : artifacts) m.kinds.push_back(a.kind);
  m.values.assign(n * n, 0.0);
  auto coefficient = [&](std::size_t i, std::size_t j) {
    try {
      return chi_square(sparse_contingency_table(artifacts[i], artifacts[j], index), mode);
    } catch (const DataError&) {
      ++m.degenerate_pairs;
      return 0.0;
    }
  };
  for (std::size_t i = 0; i < n; ++i) {
    m.values[i * n + i] = mode == ChiSquareMode::standard ? 1.0 : coefficient(i, i);
    for (std::size_t j = i + 1; j < n; ++j) {
      const double v = coefficient(i, j);
      m.values[i * n + j] = v;
      m.values[j * n + i] = v;
    }
  }
  return m;
}

std::string correlation_csv(const CorrelationMatrix& m) {
  std::ostringstream out;
  out.precision(17);
  out << "artifact";
  for (const auto& k : m.kinds) out << ',' << k.name();
  out << '\n';
  for (std::size_t i = 0; i < m.size(); ++i) {
    out << m.kinds[i].name();
    for (std::size_t j = 0; j < m.size(); ++j) out << ',' << m.at(i, j);
    out << '\n';
  }
  return out.str();
}

DissimilarityMatrix dissimilarity(const CorrelationMatrix& m) {
  DissimilarityMatrix d;
  d.n = m.size();
  d.values.resize(d.n * d.n);
  for (std::size_t i = 0; i < d.n; ++i)
    for (std::size_t j = 0; j < d.n; ++j)
      d.values[i * d.n + j] = i == j ? 0.0 : 1.0 - std::clamp(m.at(i, j), 0.0, 1.0);
  return d;
}

}  // namespace dfpcrc::correlation
