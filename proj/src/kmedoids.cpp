#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "dfpcrc/correlation.hpp"
#include "dfpcrc/error.hpp"

namespace dfpcrc::correlation {

namespace {

constexpr std::size_t kMaxRounds = 100;
constexpr std::size_t kStarts = 8;
constexpr double kImprovementEps = 1e-12;

// Nearest medoid per point; a medoid always owns itself, other ties go to the
// earlier medoid in `medoids`.
std::vector<std::size_t> assign(const DissimilarityMatrix& d, const std::vector<std::size_t>& medoids,
                                double& cost) {
  std::vector<std::size_t> owner(d.n);
  cost = 0.0;
  for (std::size_t p = 0; p < d.n; ++p) {
    std::size_t best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t s = 0; s < medoids.size(); ++s) {
      if (medoids[s] == p) {
        best = s;
        best_d = 0.0;
        break;
      }
      if (d.at(p, medoids[s]) < best_d) {
        best_d = d.at(p, medoids[s]);
        best = s;
      }
    }
    owner[p] = best;
    cost += best_d;
  }
  return owner;
}

}  // namespace

std::size_t default_k(std::size_t n) {
  const auto k = static_cast<std::size_t>(std::llround(std::sqrt(static_cast<double>(n) / 2.0)));
  return std::clamp<std::size_t>(k, 1, std::max<std::size_t>(n, 1));
}

double clustering_cost(const DissimilarityMatrix& dist, const std::vector<std::size_t>& medoids) {
  double cost = 0.0;
  (void)assign(dist, medoids, cost);
  return cost;
}

std::vector<CorrelatedArtifactSet> singleton_sets(std::size_t n) {
  std::vector<CorrelatedArtifactSet> sets;
  sets.reserve(n);
  for (std::size_t i = 0; i < n; ++i) sets.push_back({i, {i}});
  return sets;
}

namespace {

KMedoidsResult run_from(const DissimilarityMatrix& dist, std::size_t k, std::size_t first) {
  const std::size_t n = dist.n;
  KMedoidsResult result;

  // Greedy additions that lower the cost most.
  std::vector<std::size_t> medoids{first};
  std::vector<char> is_medoid(n, 0);
  is_medoid[medoids[0]] = 1;
  while (medoids.size() < k) {
    std::size_t best = n;
    double best_cost = std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < n; ++c) {
      if (is_medoid[c]) continue;
      medoids.push_back(c);
      const double cost = clustering_cost(dist, medoids);
      medoids.pop_back();
      if (cost < best_cost) {
        best_cost = cost;
        best = c;
      }
    }
    medoids.push_back(best);
    is_medoid[best] = 1;
  }

  double cost = 0.0;
  std::vector<std::size_t> owner = assign(dist, medoids, cost);
  result.cost_history.push_back(cost);

  // Alternate: move each medoid to its cluster's cost-minimizing member.
  for (std::size_t round = 0; round < kMaxRounds; ++round) {
    ++result.iterations;
    bool moved = false;
    for (std::size_t s = 0; s < medoids.size(); ++s) {
      std::size_t best = medoids[s];
      double best_sum = 0.0;
      for (std::size_t p = 0; p < n; ++p)
        if (owner[p] == s) best_sum += dist.at(p, best);
      for (std::size_t c = 0; c < n; ++c) {
        if (owner[c] != s || c == medoids[s]) continue;
        double sum = 0.0;
        for (std::size_t p = 0; p < n; ++p)
          if (owner[p] == s) sum += dist.at(p, c);
        if (sum < best_sum - kImprovementEps) {
          best_sum = sum;
          best = c;
        }
      }
      if (best != medoids[s]) {
        is_medoid[medoids[s]] = 0;
        is_medoid[best] = 1;
        medoids[s] = best;
        moved = true;
      }
    }
    if (!moved) break;
    auto next = assign(dist, medoids, cost);
    result.cost_history.push_back(cost);
    if (next == owner) break;
    owner = std::move(next);
  }

  // Single-swap refinement: take the best improving (medoid, non-medoid) swap.
  for (std::size_t round = 0; round < kMaxRounds; ++round) {
    double best_cost = cost - kImprovementEps;
    std::size_t best_slot = medoids.size();
    std::size_t best_point = n;
    for (std::size_t s = 0; s < medoids.size(); ++s) {
      const std::size_t old = medoids[s];
      for (std::size_t c = 0; c < n; ++c) {
        if (is_medoid[c]) continue;
        medoids[s] = c;
        const double trial = clustering_cost(dist, medoids);
        if (trial < best_cost) {
          best_cost = trial;
          best_slot = s;
          best_point = c;
        }
      }
      medoids[s] = old;
    }
    if (best_slot == medoids.size()) break;
    ++result.iterations;
    is_medoid[medoids[best_slot]] = 0;
    is_medoid[best_point] = 1;
    medoids[best_slot] = best_point;
    owner = assign(dist, medoids, cost);
    result.cost_history.push_back(cost);
  }

  result.cost = cost;
  for (std::size_t s = 0; s < medoids.size(); ++s) {
    CorrelatedArtifactSet set{medoids[s], {}};
    for (std::size_t p = 0; p < n; ++p)
      if (owner[p] == s) set.members.push_back(p);
    result.sets.push_back(std::move(set));
  }
  std::sort(result.sets.begin(), result.sets.end(),
            [](const auto& a, const auto& b) { return a.members.front() < b.members.front(); });
  return result;
}

}  // namespace

KMedoidsResult k_medoids(const DissimilarityMatrix& dist, std::size_t k, std::uint64_t seed) {
  const std::size_t n = dist.n;
  if (k < 1 || k > n) {
    throw DataError(Stage::correlation, "k = " + std::to_string(k) + " outside [1, " +
                                            std::to_string(n) + "]");
  }
  // Seeded Fisher-Yates over the points; the first few are starting medoids.
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  std::mt19937_64 rng(seed);
  for (std::size_t i = n; i > 1; --i) std::swap(order[i - 1], order[static_cast<std::size_t>(rng() % i)]);

  KMedoidsResult best = run_from(dist, k, order[0]);
  for (std::size_t s = 1; s < std::min(kStarts, n); ++s) {
    KMedoidsResult trial = run_from(dist, k, order[s]);
    if (trial.cost < best.cost - kImprovementEps) best = std::move(trial);
  }
  return best;
}

}  // namespace dfpcrc::correlation
