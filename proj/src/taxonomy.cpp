#include "dfpcrc/taxonomy.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

#include "dfpcrc/error.hpp"

namespace dfpcrc::taxonomy {

namespace {

constexpr std::array<std::string_view, 2> kMotivationNames = {"feature_request", "bug_fix"};
constexpr std::array<std::string_view, 7> kCategoryNames = {
    "refactor", "functional", "architectural", "preventive", "perfective", "corrective", "adaptive"};
constexpr std::array<std::string_view, 5> kAspectNames = {"source_code", "inheritance", "coupling",
                                                          "dependency", "structure"};

template <typename Enum, std::size_t N>
std::optional<Enum> lookup(const std::array<std::string_view, N>& names, std::string_view s) {
  for (std::size_t i = 0; i < N; ++i)
    if (names[i] == s) return static_cast<Enum>(i);
  return std::nullopt;
}

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  return s.substr(first, s.find_last_not_of(" \t\r") - first + 1);
}

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

constexpr std::string_view kDefaultRules = R"(# level1.level2.level3: keywords
bug_fix.corrective.*: fix, crash, bug, error
bug_fix.perfective.*: slow, clean, improv
bug_fix.adaptive.*: port, upgrad, compat, compatibl
bug_fix.preventive.*: prevent, guard
feature_request.refactor.*: refactor, renam
feature_request.functional.*: featur, add, support
feature_request.architectural.*: architect, architectur, redesign
*.*.inheritance: inherit, inheritanc, subclass
*.*.coupling: coupl, interfac
*.*.dependency: depend, dependency, dependenci, import, library, librari
*.*.structure: modul, structur, packag
)";

}  // namespace

Motivation motivation_of(Category c) noexcept {
  switch (c) {
    case Category::refactor:
    case Category::functional:
    case Category::architectural: return Motivation::feature_request;
    default: return Motivation::bug_fix;
  }
}

ArtifactKind ArtifactKind::make(Motivation m, Category c, Aspect a) {
  if (motivation_of(c) != m) {
    throw std::invalid_argument("category '" + std::string(to_string(c)) +
                                "' is not legal for '" + std::string(to_string(m)) + "'");
  }
  return ArtifactKind{m, c, a};
}

std::size_t ArtifactKind::index() const noexcept {
  return static_cast<std::size_t>(category) * kAspectNames.size() + static_cast<std::size_t>(aspect);
}

std::string ArtifactKind::name() const {
  std::string out(to_string(motivation));
  out += '.';
  out += to_string(category);
  out += '.';
  out += to_string(aspect);
  return out;
}

std::optional<ArtifactKind> ArtifactKind::parse(std::string_view name) {
  const auto d1 = name.find('.');
  const auto d2 = d1 == std::string_view::npos ? d1 : name.find('.', d1 + 1);
  if (d2 == std::string_view::npos) return std::nullopt;
  auto m = parse_motivation(name.substr(0, d1));
  auto c = parse_category(name.substr(d1 + 1, d2 - d1 - 1));
  auto a = parse_aspect(name.substr(d2 + 1));
  if (!m || !c || !a || motivation_of(*c) != *m) return std::nullopt;
  return ArtifactKind{*m, *c, *a};
}

std::string_view to_string(Motivation m) noexcept { return kMotivationNames[static_cast<std::size_t>(m)]; }
std::string_view to_string(Category c) noexcept { return kCategoryNames[static_cast<std::size_t>(c)]; }
std::string_view to_string(Aspect a) noexcept { return kAspectNames[static_cast<std::size_t>(a)]; }

std::optional<Motivation> parse_motivation(std::string_view s) noexcept {
  return lookup<Motivation>(kMotivationNames, s);
}
std::optional<Category> parse_category(std::string_view s) noexcept {
  return lookup<Category>(kCategoryNames, s);
}
std::optional<Aspect> parse_aspect(std::string_view s) noexcept {
  return lookup<Aspect>(kAspectNames, s);
}

std::vector<ArtifactKind> enumerate_kinds() {
  std::vector<ArtifactKind> kinds;
  kinds.reserve(kKindCount);
  for (std::size_t c = 0; c < kCategoryNames.size(); ++c) {
    for (std::size_t a = 0; a < kAspectNames.size(); ++a) {
      kinds.push_back(ArtifactKind::make(static_cast<Category>(c), static_cast<Aspect>(a)));
    }
  }
  return kinds;
}

// ---------------------------------------------------------------------------

ClassificationRuleSet::ClassificationRuleSet(std::vector<Rule> rules) : rules_(std::move(rules)) {
  const auto reachable = reachable_kinds();
  if (reachable.size() != kKindCount) {
    std::string missing;
    for (const auto& k : enumerate_kinds()) {
      if (std::find(reachable.begin(), reachable.end(), k) == reachable.end()) {
        if (!missing.empty()) missing += ", ";
        missing += k.name();
      }
    }
    throw DataError(Stage::taxonomy, "rule set leaves kinds unreachable: " + missing);
  }
}

const ClassificationRuleSet& ClassificationRuleSet::defaults() {
  static const ClassificationRuleSet rules = parse(kDefaultRules);
  return rules;
}

ClassificationRuleSet ClassificationRuleSet::parse(std::string_view text) {
  std::vector<Rule> rules;
  std::istringstream in{std::string(text)};
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = raw;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    auto fail = [&](const std::string& what) {
      throw DataError(Stage::taxonomy, "rules line " + std::to_string(line_no) + ": " + what);
    };
    const auto colon = line.find(':');
    if (colon == std::string_view::npos) fail("missing ':'");
    const std::string_view target = trim(line.substr(0, colon));
    const auto d1 = target.find('.');
    const auto d2 = d1 == std::string_view::npos ? d1 : target.find('.', d1 + 1);
    if (d2 == std::string_view::npos) fail("target must be level1.level2.level3");
    const std::string_view l1 = target.substr(0, d1);
    const std::string_view l2 = target.substr(d1 + 1, d2 - d1 - 1);
    const std::string_view l3 = target.substr(d2 + 1);

    Rule rule;
    if (l2 == "*") {
      if (l1 != "*") fail("a motivation without a category is not a valid rule target");
    } else {
      auto m = parse_motivation(l1);
      auto c = parse_category(l2);
      if (!m || !c) fail("unknown level1/level2 '" + std::string(l1) + "." + std::string(l2) + "'");
      if (motivation_of(*c) != *m) fail("'" + std::string(l2) + "' is not legal under '" + std::string(l1) + "'");
      rule.category = c;
    }
    if (l3 != "*") {
      rule.aspect = parse_aspect(l3);
      if (!rule.aspect) fail("unknown level3 '" + std::string(l3) + "'");
    }
    if (!rule.category && !rule.aspect) fail("rule targets nothing");

    std::string_view rest = line.substr(colon + 1);
    while (!rest.empty()) {
      const auto comma = rest.find(',');
      std::string token = lower(trim(rest.substr(0, comma)));
      if (!token.empty()) rule.patterns.push_back(std::move(token));
      if (comma == std::string_view::npos) break;
      rest = rest.substr(comma + 1);
    }
    if (rule.patterns.empty()) fail("rule has no keywords");
    rules.push_back(std::move(rule));
  }
  return ClassificationRuleSet(std::move(rules));
}

ClassificationRuleSet ClassificationRuleSet::from_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError(Stage::taxonomy, "cannot open rules file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse(buf.str());
}

std::vector<ArtifactKind> ClassificationRuleSet::reachable_kinds() const {
  std::set<Category> categories = {Category::corrective, Category::functional};
  std::set<Aspect> aspects = {Aspect::source_code};
  for (const auto& r : rules_) {
    if (r.category) categories.insert(*r.category);
    if (r.aspect) aspects.insert(*r.aspect);
  }
  std::vector<ArtifactKind> out;
  for (Category c : categories)
    for (Aspect a : aspects) out.push_back(ArtifactKind::make(c, a));
  std::sort(out.begin(), out.end());
  return out;
}

bool keyword_matches(std::string_view token, std::string_view keyword) noexcept {
  auto drop_e = [](std::string_view s) {
    return (s.size() > 1 && s.back() == 'e') ? s.substr(0, s.size() - 1) : s;
  };
  return token == keyword || drop_e(token) == drop_e(keyword);
}

std::optional<Motivation> motivation_from_hint(std::string_view hint) noexcept {
  const std::string h = lower(trim(hint));
  if (auto m = parse_motivation(h)) return m;
  for (std::string_view key : {"bug", "defect", "fix", "fault"})
    if (h.find(key) != std::string::npos) return Motivation::bug_fix;
  for (std::string_view key : {"feature", "enhancement", "request", "improvement"})
    if (h.find(key) != std::string::npos) return Motivation::feature_request;
  return std::nullopt;
}

std::vector<ArtifactKind> classify(const ChangeRequest& cr,
                                   const textprep::DescriptiveTokenSet& tokens,
                                   const ClassificationRuleSet& rules) {
  const std::optional<Motivation> hint =
      cr.kind_hint ? motivation_from_hint(*cr.kind_hint) : std::nullopt;

  auto fires = [&](const Rule& rule) {
    for (const auto& token : tokens.tokens)
      for (const auto& pattern : rule.patterns)
        if (keyword_matches(token, pattern)) return true;
    return false;
  };

  std::optional<Category> category;
  std::set<Aspect> aspects;
  for (const auto& rule : rules.rules()) {
    if (!fires(rule)) continue;
    if (rule.category && !category && (!hint || motivation_of(*rule.category) == *hint)) {
      category = rule.category;
    }
    if (rule.aspect) aspects.insert(*rule.aspect);
  }
  if (!category) {
    category = (hint == Motivation::feature_request) ? Category::functional : Category::corrective;
  }
  if (aspects.empty()) aspects.insert(Aspect::source_code);

  std::vector<ArtifactKind> kinds;
  for (Aspect a : aspects) kinds.push_back(ArtifactKind::make(*category, a));
  return kinds;
}

std::vector<ChangeRequestArtifact> build_artifacts(const std::vector<ChangeRequest>& crs,
                                                   const std::vector<std::vector<ArtifactKind>>& kinds) {
  if (crs.size() != kinds.size())
    throw InvariantError(Stage::taxonomy, "one kind list per change request expected");
  std::map<std::size_t, std::set<std::string>> members;
  for (std::size_t i = 0; i < crs.size(); ++i) {
    if (kinds[i].empty())
      throw DataError(Stage::taxonomy, "change request '" + crs[i].id + "' has no artifact kind");
    for (const auto& k : kinds[i]) members[k.index()].insert(crs[i].id);
  }
  const auto all = enumerate_kinds();
  std::vector<ChangeRequestArtifact> out;
  out.reserve(members.size());
  for (auto& [index, ids] : members) {
    out.push_back({all[index], std::vector<std::string>(ids.begin(), ids.end())});
  }
  return out;
}

}  // namespace dfpcrc::taxonomy
