#include <algorithm>
#include <map>
#include <regex>

#include "dfpcrc/error.hpp"
#include "dfpcrc/ingest.hpp"

namespace dfpcrc::ingest {

std::vector<LinkPattern> LinkOptions::default_link_patterns() {
  return {{R"(\bCR-(\d+)\b)"}, {R"(#(\d+)\b)"}, {R"(\b[Bb]ug\s+(\d+)\b)"}};
}

namespace {

// Trailing digit run of an id ("CR-12" -> "12"), without leading zeros.
std::string numeric_key(std::string_view id) {
  std::size_t end = id.size();
  std::size_t start = end;
  while (start > 0 && id[start - 1] >= '0' && id[start - 1] <= '9') --start;
  if (start == end) return {};
  while (start + 1 < end && id[start] == '0') ++start;
  return std::string(id.substr(start, end - start));
}

void add_link(RevisionEvent& e, const std::string& id) {
  if (std::find(e.linked_cr_ids.begin(), e.linked_cr_ids.end(), id) == e.linked_cr_ids.end())
    e.linked_cr_ids.push_back(id);
}

}  // namespace

std::vector<RevisionEvent> link_revisions(std::vector<RevisionEvent> events,
                                          const std::vector<ChangeRequest>& crs,
                                          const LinkOptions& options) {
  const bool use_explicit = options.mode != LinkMode::token_overlap;
  const bool use_overlap = options.mode != LinkMode::explicit_id;

  std::vector<std::regex> patterns;
  if (use_explicit) {
    for (const auto& p : options.patterns) {
      try {
        patterns.emplace_back(p.regex, std::regex::ECMAScript | std::regex::optimize);
      } catch (const std::regex_error& e) {
        throw DataError(Stage::ingest, "bad link pattern '" + p.regex + "': " + e.what());
      }
    }
  }

  std::map<std::string, std::string, std::less<>> by_id;
  std::multimap<std::string, std::string, std::less<>> by_number;
  for (const auto& cr : crs) {
    by_id.emplace(cr.id, cr.id);
    if (auto key = numeric_key(cr.id); !key.empty()) by_number.emplace(key, cr.id);
  }

  std::vector<textprep::DescriptiveTokenSet> cr_tokens;
  if (use_overlap) {
    cr_tokens.reserve(crs.size());
    for (const auto& cr : crs) cr_tokens.push_back(textprep::descriptive_tokens(cr, options.text));
  }

  for (auto& event : events) {
    bool explicit_hit = false;
    for (const auto& re : patterns) {
      for (auto it = std::sregex_iterator(event.message.begin(), event.message.end(), re);
           it != std::sregex_iterator(); ++it) {
        const std::smatch& m = *it;
        if (auto exact = by_id.find(m.str(0)); exact != by_id.end()) {
          add_link(event, exact->second);
          explicit_hit = true;
          continue;
        }
        if (m.size() < 2 || !m[1].matched) continue;
        const std::string key = numeric_key(m.str(1));
        auto [lo, hi] = by_number.equal_range(key);
        for (auto n = lo; n != hi; ++n) {
          add_link(event, n->second);
          explicit_hit = true;
        }
      }
    }
    if (!use_overlap || explicit_hit || crs.empty()) continue;

    const auto query = textprep::descriptive_tokens(event.revision_id, event.message, options.text);
    if (query.tokens.size() < options.min_overlap) continue;
    const auto ranked = textprep::rank_descriptors(query, cr_tokens);
    if (!ranked.empty() && ranked.front().score >= options.min_overlap && ranked.front().score > 0)
      add_link(event, ranked.front().descriptor_id);
  }
  return events;
}

}  // namespace dfpcrc::ingest
