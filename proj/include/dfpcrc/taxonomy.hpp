#pragma once

// Three-level change-request artifact taxonomy (motivation -> category ->
// affected aspect) and the keyword rules that map descriptive tokens onto it.

#include <array>
#include <compare>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dfpcrc/ingest.hpp"
#include "dfpcrc/textprep.hpp"

namespace dfpcrc::taxonomy {

enum class Motivation { feature_request, bug_fix };
enum class Category { refactor, functional, architectural, preventive, perfective, corrective, adaptive };
enum class Aspect { source_code, inheritance, coupling, dependency, structure };

inline constexpr std::size_t kKindCount = 35;

Motivation motivation_of(Category c) noexcept;

struct ArtifactKind {
  Motivation motivation = Motivation::bug_fix;
  Category category = Category::corrective;
  Aspect aspect = Aspect::source_code;

  /// Throws std::invalid_argument when the category does not belong to the
  /// motivation.
  static ArtifactKind make(Motivation m, Category c, Aspect a);
  static ArtifactKind make(Category c, Aspect a) { return make(motivation_of(c), c, a); }
  static ArtifactKind fallback() { return make(Category::corrective, Aspect::source_code); }

  /// Position in enumerate_kinds(), 0..34.
  std::size_t index() const noexcept;
  /// "bug_fix.corrective.source_code"
  std::string name() const;
  static std::optional<ArtifactKind> parse(std::string_view name);

  bool valid() const noexcept { return motivation_of(category) == motivation; }

  friend bool operator==(const ArtifactKind& a, const ArtifactKind& b) noexcept {
    return a.index() == b.index();
  }
  friend std::strong_ordering operator<=>(const ArtifactKind& a, const ArtifactKind& b) noexcept {
    return a.index() <=> b.index();
  }
};

std::string_view to_string(Motivation m) noexcept;
std::string_view to_string(Category c) noexcept;
std::string_view to_string(Aspect a) noexcept;
std::optional<Motivation> parse_motivation(std::string_view s) noexcept;
std::optional<Category> parse_category(std::string_view s) noexcept;
std::optional<Aspect> parse_aspect(std::string_view s) noexcept;

/// All 35 kinds: feature categories then bug-fix categories, each crossed
/// with the five aspects.
std::vector<ArtifactKind> enumerate_kinds();

/// One keyword rule. A rule either names a category (and so a motivation),
/// an aspect, or both; `*` in the rules file leaves a level open.
struct Rule {
  std::optional<Category> category;
  std::optional<Aspect> aspect;
  std::vector<std::string> patterns;  // stemmed keywords
};

class ClassificationRuleSet {
 public:
  static const ClassificationRuleSet& defaults();
  /// Lines of `level1.level2.level3: token, token, ...`; `*` wildcards;
  /// `#` comments. Throws DataError on malformed lines or unreachable kinds.
  static ClassificationRuleSet parse(std::string_view text);
  static ClassificationRuleSet from_file(const std::string& path);

  explicit ClassificationRuleSet(std::vector<Rule> rules);

  const std::vector<Rule>& rules() const noexcept { return rules_; }

  /// Kinds that some combination of fired rules (plus the source_code and
  /// per-motivation category defaults) can produce.
  std::vector<ArtifactKind> reachable_kinds() const;

 private:
  std::vector<Rule> rules_;
};

/// Token matches a keyword when equal, ignoring one trailing 'e' on either
/// side (so "rename" and "renam" agree).
bool keyword_matches(std::string_view token, std::string_view keyword) noexcept;

/// Tracker label -> motivation ("bug", "defect", "fix" / "feature",
/// "enhancement"); nullopt when the label is not recognized.
std::optional<Motivation> motivation_from_hint(std::string_view hint) noexcept;

/// Category comes from the first fired category rule compatible with the
/// hint; every fired aspect rule contributes one kind. Defaults: corrective
/// for bug fixes, functional for features, source_code for the aspect.
std::vector<ArtifactKind> classify(const ChangeRequest& cr,
                                   const textprep::DescriptiveTokenSet& tokens,
                                   const ClassificationRuleSet& rules = ClassificationRuleSet::defaults());

struct ChangeRequestArtifact {
  ArtifactKind kind;
  std::vector<std::string> members;  // sorted change request ids

  bool operator==(const ChangeRequestArtifact&) const = default;
};

/// One artifact per kind with at least one member, in kind order. `kinds[i]`
/// belongs to `crs[i]` and must be non-empty.
std::vector<ChangeRequestArtifact> build_artifacts(const std::vector<ChangeRequest>& crs,
                                                   const std::vector<std::vector<ArtifactKind>>& kinds);

}  // namespace dfpcrc::taxonomy
