// One line per acceptance criterion; exit status is the number of failures.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

#include "dfpcrc/correlation.hpp"
#include "dfpcrc/dfp.hpp"
#include "dfpcrc/eval.hpp"
#include "dfpcrc/graph.hpp"
#include "dfpcrc/pipeline.hpp"
#include "dfpcrc/synth.hpp"
#include "oracles.hpp"

using namespace dfpcrc;

namespace {

int failures = 0;

void report(const char* id, bool ok, const std::string& detail) {
  std::printf("%s %s  %s\n", id, ok ? "PASS" : "FAIL", detail.c_str());
  if (!ok) ++failures;
}

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

void ac1() {
  const auto crc = eval::metrics({931, 48, 9, 12, 1000});
  const auto base = eval::metrics({662, 56, 187, 95, 1000});
  const bool ok = crc.accuracy == 0.943 && std::abs(crc.recall - 0.990425) <= 1e-6 &&
                  std::abs(base.recall - 0.779740) <= 1e-6;
  report("AC1", ok, fmt("metric arithmetic: accuracy %.6f, recall %.6f / %.6f", crc.accuracy, crc.recall, base.recall));
}

void ac2() {
  bool ok = graph::edge_weight(1) == 0.0 && graph::edge_weight(2) == 0.5 && graph::edge_weight(10) == 0.9;
  for (std::uint64_t r = 1; r < 10000 && ok; ++r) ok = graph::edge_weight(r + 1) >= graph::edge_weight(r);
  report("AC2", ok, "edge weight fixtures and monotonicity over r in [1, 10^4]");
}

void ac3() {
  const auto kinds = taxonomy::enumerate_kinds();
  std::mt19937_64 rng(2024);
  double worst = 0.0;
  int graphs = 0;
  while (graphs < 40) {
    const std::size_t m = 1 + rng() % 6, n = 1 + rng() % 6;
    graph::BipartiteGraph g;
    oracle::Matrix a(m, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < m; ++i) g.code_blocks.push_back("b" + std::to_string(i));
    for (std::size_t j = 0; j < n; ++j) g.artifacts.push_back(kinds[j]);
    bool any = false;
    for (std::uint32_t i = 0; i < m; ++i)
      for (std::uint32_t j = 0; j < n; ++j) {
        if (rng() % 3 == 0) continue;
        const std::uint64_t r = 1 + rng() % 9;
        a[i][j] = 1.0 - 1.0 / static_cast<double>(r);
        any = any || a[i][j] > 0.0;
        g.edges.push_back({i, j, r, a[i][j]});
      }
    if (!any) continue;
    const auto want = oracle::unit(oracle::hub_power_iteration(a));
    const auto got = oracle::unit(graph::run_hits(g).hub);
    for (std::size_t i = 0; i < m; ++i) worst = std::max(worst, std::abs(want[i] - got[i]));
    ++graphs;
  }
  graph::BipartiteGraph ex;
  ex.code_blocks = {"b1", "b2"};
  ex.artifacts = {kinds[0], kinds[1]};
  ex.edges = {{0, 0, 2, 0.5}, {1, 0, 2, 0.5}, {1, 1, 2, 0.5}};
  const auto single = graph::run_hits(ex, {.mode = graph::HitsMode::single_pass});
  const bool exact = single.authority == std::vector<double>{1.0, 0.5} && single.hub == std::vector<double>{0.5, 0.75};
  report("AC3", worst <= 1e-6 && exact,
         fmt("hub weights vs power iteration on %g graphs: max diff %.3g; single-pass example ", graphs, worst) +
             (exact ? "exact" : "differs"));
}

void ac4() {
  std::mt19937_64 rng(99);
  double worst = 0.0;
  bool ranged = true, symmetric = true;
  for (int t = 0; t < 100; ++t) {
    const std::size_t m = 2 + rng() % 3, n = 2 + rng() % 3;
    std::vector<std::vector<std::uint64_t>> rows(m, std::vector<std::uint64_t>(n));
    std::vector<std::uint64_t> flat, flat_t(m * n);
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        rows[i][j] = rng() % 7;
        if (i == 0 && j == 0) rows[i][j] += 1;
        flat.push_back(rows[i][j]);
        flat_t[j * m + i] = rows[i][j];
      }
    const double v = correlation::chi_square(correlation::ContingencyTable::from_counts(m, n, flat));
    const double vt = correlation::chi_square(correlation::ContingencyTable::from_counts(n, m, flat_t));
    worst = std::max(worst, std::abs(v - oracle::cramers_v2(rows)));
    ranged = ranged && v >= 0.0 && v <= 1.0;
    symmetric = symmetric && std::abs(v - vt) <= 1e-12;
  }
  const double indep = correlation::chi_square(correlation::ContingencyTable::from_counts(2, 3, {1, 2, 3, 2, 4, 6}));
  report("AC4", worst <= 1e-9 && ranged && symmetric && indep == 0.0,
         fmt("100 tables vs expected-count oracle: max diff %.3g; independent table %g", worst, indep));
}

void ac5() {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst_ratio = 0.0;
  bool partitions = true, monotone = true, deterministic = true;
  for (int t = 0; t < 200; ++t) {
    const std::size_t n = 2 + rng() % 7;
    const std::size_t k = 1 + rng() % std::min<std::size_t>(3, n);
    oracle::Matrix d(n, std::vector<double>(n, 0.0));
    correlation::DissimilarityMatrix dm{n, std::vector<double>(n * n, 0.0)};
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) {
        d[i][j] = d[j][i] = u(rng);
        dm.values[i * n + j] = dm.values[j * n + i] = d[i][j];
      }
    const auto r = correlation::k_medoids(dm, k, static_cast<std::uint64_t>(t));
    std::vector<int> seen(n, 0);
    for (const auto& s : r.sets)
      for (auto m : s.members) ++seen[m];
    for (int c : seen) partitions = partitions && c == 1;
    partitions = partitions && r.sets.size() == k;
    for (std::size_t i = 1; i < r.cost_history.size(); ++i)
      monotone = monotone && r.cost_history[i] <= r.cost_history[i - 1] + 1e-12;
    const double opt = oracle::exhaustive_kmedoids(d, k);
    if (opt > 0.0) worst_ratio = std::max(worst_ratio, r.cost / opt);
    const auto again = correlation::k_medoids(dm, k, static_cast<std::uint64_t>(t));
    deterministic = deterministic && again.sets == r.sets && again.cost_history == r.cost_history;
  }
  report("AC5", partitions && monotone && deterministic && worst_ratio <= 1.05,
         fmt("200 instances: worst cost / exhaustive optimum %.4f", worst_ratio) +
             (partitions ? ", partitions ok" : ", bad partition") + (monotone ? ", monotone" : ", not monotone") +
             (deterministic ? ", seed-deterministic" : ", nondeterministic"));
}

void ac6() {
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst = 0.0;
  for (int f = 0; f < 10; ++f) {
    const std::size_t n = 2 + rng() % 6;
    std::vector<double> rs(n);
    for (auto& x : rs) x = u(rng);
    // split artifacts into two sets at a random cut
    const std::size_t cut = 1 + rng() % (n - 1);
    std::vector<correlation::CorrelatedArtifactSet> sets(2);
    sets[0].medoid = 0;
    sets[1].medoid = cut;
    for (std::size_t i = 0; i < n; ++i) sets[i < cut ? 0 : 1].members.push_back(i);
    double s0 = 0.0, s1 = 0.0;
    for (std::size_t i = 0; i < cut; ++i) s0 += rs[i];
    for (std::size_t i = cut; i < n; ++i) s1 += rs[i];
    const double hand0 = 1.0 - s0 / n, hand1 = 1.0 - s1 / n;
    const double got0 = dfp::dfp_of_set(sets[0], rs, n), got1 = dfp::dfp_of_set(sets[1], rs, n);
    worst = std::max({worst, std::abs(got0 - hand0), std::abs(got1 - hand1)});
    for (std::size_t i = 0; i < n; ++i) {
      const double hand = 1.0 - (i < cut ? hand0 : hand1) / 2.0;
      worst = std::max(worst, std::abs(dfp::dfp_of_artifact(i, sets, {got0, got1}) - hand));
    }
  }
  bool symmetric = true;
  for (int t = 0; t < 100; ++t) {
    std::vector<double> v(2 + rng() % 20);
    for (auto& x : v) x = u(rng);
    const auto b = dfp::threshold_band(v);
    symmetric = symmetric && std::abs((b.upper - b.dfpt) - (b.dfpt - b.lower)) <= 1e-12;
  }
  const dfp::ThresholdBand reference{0.394412607, 0.0, 0.318610008, 0.443901512};
  const bool classes = dfp::classify_dfp(0.30, reference) == dfp::FaultClass::safe &&
                       dfp::classify_dfp(0.40, reference) == dfp::FaultClass::possibly_fault_prone &&
                       dfp::classify_dfp(0.45, reference) == dfp::FaultClass::highly_fault_prone;
  report("AC6", worst <= 1e-12 && symmetric && classes,
         fmt("10 fixtures vs hand substitution: max diff %.3g; band symmetric on 100 samples", worst) +
             (classes ? "; 0.30/0.40/0.45 -> safe/possibly/highly" : "; reference band classes wrong"));
}

void ac7() {
  const auto start = std::chrono::steady_clock::now();
  auto cfg = synth::SynthConfig::defaults();
  cfg.seed = 42;
  cfg.num_requests = 500;
  cfg.num_blocks = 2000;
  cfg.multiplier = 5.0;
  const auto corpus = synth::generate(cfg);
  const auto requests = ingest::parse_change_requests(corpus.requests_jsonl, ingest::RequestFormat::jsonl);
  auto events = ingest::parse_revision_log(corpus.revisions_jsonl, ingest::RevisionFormat::jsonl);
  events = ingest::link_revisions(std::move(events), requests);
  const auto r = eval::evaluate({requests, events}, {}, 0.85);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  const double crc = r.methods[0].metrics.accuracy, base = r.methods[1].metrics.accuracy;
  report("AC7", crc >= 0.85 && crc >= base && secs < 30.0,
         fmt("synthetic recovery: DFP-CRC accuracy %.4f, baseline %.4f, %.2f s", crc, base, secs));
}

void ac8() {
  auto cfg = synth::SynthConfig::defaults();
  cfg.num_requests = 300;
  const auto c = synth::generate(cfg);
  auto run = [&] {
    pipeline::Corpus corpus;
    corpus.requests = ingest::parse_change_requests(c.requests_jsonl, ingest::RequestFormat::jsonl);
    corpus.events = ingest::link_revisions(
        ingest::parse_revision_log(c.revisions_jsonl, ingest::RevisionFormat::jsonl), corpus.requests);
    const pipeline::AnalysisConfig config;
    return pipeline::report_json(corpus, pipeline::analyze(corpus, config), config);
  };
  const auto a = run(), b = run();
  report("AC8", a == b && !a.empty(), fmt("two analyze runs, %g report bytes, identical", static_cast<double>(a.size())));
}

}  // namespace

int main() {
  ac1();
  ac2();
  ac3();
  ac4();
  ac5();
  ac6();
  ac7();
  ac8();
  return failures;
}
