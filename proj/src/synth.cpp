#include "dfpcrc/synth.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <map>
#include <random>
#include <set>

#include "dfpcrc/error.hpp"

namespace dfpcrc::synth {

using taxonomy::Aspect;
using taxonomy::ArtifactKind;
using taxonomy::Category;

SynthConfig SynthConfig::defaults() {
  const auto P = ArtifactKind::make(Category::corrective, Aspect::dependency);
  const auto U = ArtifactKind::make(Category::preventive, Aspect::source_code);
  SynthConfig c;
  c.mixture = {
      {P, 0.25, std::nullopt},
      {ArtifactKind::make(Category::refactor, Aspect::source_code), 0.1, P},
      {ArtifactKind::make(Category::adaptive, Aspect::coupling), 0.1, P},
      {ArtifactKind::make(Category::perfective, Aspect::inheritance), 0.1, P},
      {ArtifactKind::make(Category::functional, Aspect::structure), 0.1, P},
      {U, 0.2, std::nullopt},
      {ArtifactKind::make(Category::architectural, Aspect::coupling), 0.075, U},
      {ArtifactKind::make(Category::adaptive, Aspect::structure), 0.075, U},
  };
  c.planted = {P};
  return c;
}

std::vector<std::string> SynthConfig::violations() const {
  std::vector<std::string> out;
  if (num_blocks == 0) out.push_back("num_blocks must be positive");
  if (mixture.empty()) out.push_back("kind mixture must not be empty");
  double total = 0.0;
  std::set<ArtifactKind> kinds;
  std::set<ArtifactKind> leads;
  for (const auto& spec : mixture) {
    if (!spec.kind.valid()) out.push_back("mixture holds an invalid kind");
    if (!(spec.weight >= 0.0)) out.push_back("weight of " + spec.kind.name() + " must be non-negative");
    total += spec.weight;
    if (!kinds.insert(spec.kind).second) out.push_back("kind " + spec.kind.name() + " listed twice");
    if (!spec.follows) leads.insert(spec.kind);
  }
  if (!mixture.empty() && std::abs(total - 1.0) > 1e-9) out.push_back("mixture weights must sum to 1");
  for (const auto& spec : mixture) {
    if (spec.follows && !leads.contains(*spec.follows))
      out.push_back(spec.kind.name() + " follows " + spec.follows->name() + ", which is not a lead kind");
  }
  for (const auto& p : planted) {
    if (!kinds.contains(p)) out.push_back("planted kind " + p.name() + " is not in the mixture");
  }
  if (!(multiplier >= 1.0)) out.push_back("multiplier must be at least 1");
  if (!(continue_probability >= 0.0 && continue_probability < 1.0))
    out.push_back("continue_probability must lie in [0, 1)");
  if (min_blocks_per_request == 0) out.push_back("min_blocks_per_request must be positive");
  if (min_blocks_per_request > max_blocks_per_request)
    out.push_back("min_blocks_per_request exceeds max_blocks_per_request");
  if (!leads.empty() && num_blocks < leads.size())
    out.push_back("num_blocks must give every lead kind at least one block");
  return out;
}

void SynthConfig::validate() const {
  const auto v = violations();
  if (v.empty()) return;
  std::string msg = "invalid config:";
  for (const auto& s : v) msg += " " + s + ";";
  msg.pop_back();
  throw DataError(Stage::synth, msg);
}

namespace {

std::string_view category_word(Category c, std::size_t v) {
  static const std::map<Category, std::array<std::string_view, 2>> words = {
      {Category::corrective, {"crash", "error"}},
      {Category::perfective, {"slow", "clean"}},
      {Category::adaptive, {"port", "upgrade"}},
      {Category::preventive, {"prevent", "guard"}},
      {Category::refactor, {"refactor", "rename"}},
      {Category::functional, {"feature", "support"}},
      {Category::architectural, {"redesign", "architecture"}},
  };
  return words.at(c)[v % 2];
}

std::string_view aspect_word(Aspect a, std::size_t v) {
  switch (a) {
    case Aspect::source_code: return {};
    case Aspect::inheritance: return v % 2 ? "subclass" : "inheritance";
    case Aspect::coupling: return v % 2 ? "interface" : "coupling";
    case Aspect::dependency: return v % 2 ? "library" : "dependency";
    case Aspect::structure: return v % 2 ? "package" : "module";
  }
  return {};
}

constexpr std::array<std::string_view, 10> kFiller = {"parser",  "renderer", "scheduler", "cache",
                                                      "socket",  "widget",   "exporter",  "indexer",
                                                      "logger",  "session"};

// Portable draws: the standard distributions differ across libraries.
double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }
std::size_t below(std::mt19937_64& rng, std::size_t n) { return static_cast<std::size_t>(rng() % n); }

std::size_t pick_weighted(std::mt19937_64& rng, const std::vector<KindSpec>& mixture) {
  const double u = uniform01(rng);
  double acc = 0.0;
  std::size_t last = 0;
  for (std::size_t i = 0; i < mixture.size(); ++i) {
    if (mixture[i].weight <= 0.0) continue;
    last = i;
    acc += mixture[i].weight;
    if (u < acc) return i;
  }
  return last;
}

std::vector<std::uint32_t> sample_blocks(std::mt19937_64& rng, std::uint32_t lo, std::uint32_t size,
                                         std::size_t count) {
  count = std::min<std::size_t>(count, size);
  std::set<std::uint32_t> picked;
  while (picked.size() < count) picked.insert(lo + static_cast<std::uint32_t>(below(rng, size)));
  return {picked.begin(), picked.end()};
}

}  // namespace

std::string describe(const ArtifactKind& kind, std::size_t variant) {
  std::string s(category_word(kind.category, variant));
  s += ' ';
  s += kFiller[variant % kFiller.size()];
  if (auto a = aspect_word(kind.aspect, variant / 2); !a.empty()) {
    s += ' ';
    s += a;
  }
  return s;
}

SynthCorpus generate(const SynthConfig& config) {
  config.validate();
  std::mt19937_64 rng(config.seed);
  const auto& mix = config.mixture;

  std::vector<std::size_t> leads;
  std::map<ArtifactKind, std::size_t> region_of;
  for (std::size_t i = 0; i < mix.size(); ++i) {
    if (!mix[i].follows) {
      region_of[mix[i].kind] = leads.size();
      leads.push_back(i);
    }
  }
  const auto region_size = static_cast<std::uint32_t>(config.num_blocks / leads.size());
  const std::set<ArtifactKind> planted(config.planted.begin(), config.planted.end());

  SynthCorpus out;
  const std::size_t n = config.num_requests;
  std::vector<std::size_t> spec_of(n);
  for (std::size_t r = 0; r < n; ++r) spec_of[r] = pick_weighted(rng, mix);

  std::vector<std::vector<std::uint32_t>> blocks(n);
  std::map<ArtifactKind, std::vector<std::size_t>> requests_of_lead;
  const std::size_t span = config.max_blocks_per_request - config.min_blocks_per_request + 1;
  for (std::size_t r = 0; r < n; ++r) {
    const auto& spec = mix[spec_of[r]];
    if (spec.follows) continue;
    const auto lo = static_cast<std::uint32_t>(region_of.at(spec.kind) * region_size);
    blocks[r] = sample_blocks(rng, lo, region_size, config.min_blocks_per_request + below(rng, span));
    requests_of_lead[spec.kind].push_back(r);
  }
  for (std::size_t r = 0; r < n; ++r) {
    const auto& spec = mix[spec_of[r]];
    if (!spec.follows) continue;
    const auto& pool = requests_of_lead[*spec.follows];
    if (pool.empty()) {
      const auto lo = static_cast<std::uint32_t>(region_of.at(*spec.follows) * region_size);
      blocks[r] = sample_blocks(rng, lo, region_size, config.min_blocks_per_request);
      continue;
    }
    const auto& source = blocks[pool[below(rng, pool.size())]];
    std::vector<std::uint32_t> subset;
    for (auto b : source)
      if (uniform01(rng) < 0.5) subset.push_back(b);
    if (subset.empty()) subset.push_back(source[below(rng, source.size())]);
    blocks[r] = std::move(subset);
  }

  const auto epoch = std::chrono::sys_days{std::chrono::year{2014} / 1 / 1};
  std::size_t seq = 0;
  for (std::size_t r = 0; r < n; ++r) {
    const auto& spec = mix[spec_of[r]];
    const bool is_planted = planted.contains(spec.kind);
    const bool fault_prone = is_planted || (spec.follows && planted.contains(*spec.follows));

    ChangeRequest cr;
    cr.id = "CR-" + std::to_string(r + 1);
    const std::size_t variant = below(rng, 40);
    cr.short_desc = describe(spec.kind, variant);
    cr.long_desc = "Observed in the " + std::string(kFiller[(variant + 3) % kFiller.size()]) +
                   " while testing: " + cr.short_desc + ".";
    cr.kind_hint = std::string(taxonomy::to_string(spec.kind.motivation));
    cr.ground_truth = fault_prone;

    for (auto b : blocks[r]) {
      std::size_t base = 1;
      while (uniform01(rng) < config.continue_probability) ++base;
      const auto count = is_planted
                             ? static_cast<std::size_t>(std::llround(static_cast<double>(base) * config.multiplier))
                             : base;
      for (std::size_t k = 0; k < count; ++k) {
        ++seq;
        RevisionEvent ev;
        ev.revision_id = "r" + std::to_string(seq);
        ev.code_block_id = "src/mod" + std::to_string(b / 100) + "/file" + std::to_string(b) + ".c";
        ev.timestamp = epoch + std::chrono::minutes(seq);
        ev.message = cr.id + ": " + cr.short_desc;
        ev.linked_cr_ids = {cr.id};
        out.events.push_back(std::move(ev));
      }
    }
    out.requests.push_back(std::move(cr));
    out.intended.push_back(spec.kind);
  }
  out.requests_jsonl = ingest::write_change_requests_jsonl(out.requests);
  out.revisions_jsonl = ingest::write_revisions_jsonl(out.events);
  return out;
}

}  // namespace dfpcrc::synth
