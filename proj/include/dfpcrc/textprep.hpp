#pragma once

// Text preparation for change-request and commit-message descriptors:
// tokenizing, stop-word removal, suffix stripping, de-duplication and
// ranking of work descriptors by shared descriptive tokens.

#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

namespace dfpcrc {

struct ChangeRequest;

namespace textprep {

class StopWords {
 public:
  /// Embedded English list.
  static const StopWords& english();
  /// One lowercase word per line, `#` starts a comment.
  static StopWords parse(std::string_view text);
  static StopWords from_file(const std::string& path);

  explicit StopWords(std::vector<std::string> words);

  bool contains(std::string_view word) const;
  std::size_t size() const noexcept { return words_.size(); }

 private:
  std::unordered_set<std::string> words_;
};

enum class StemMode { minimal, porter };

struct TextOptions {
  const StopWords* stop_words = &StopWords::english();
  StemMode stem_mode = StemMode::minimal;
};

struct DescriptiveTokenSet {
  std::string owner_id;
  std::vector<std::string> tokens;  // first-occurrence order, unique

  bool contains(std::string_view token) const;
  bool operator==(const DescriptiveTokenSet&) const = default;
};

struct RankedDescriptor {
  std::string descriptor_id;
  std::size_t score = 0;
  std::size_t rank = 0;

  bool operator==(const RankedDescriptor&) const = default;
};

std::vector<std::string> tokenize(std::string_view text);

std::vector<std::string> remove_stop_words(std::vector<std::string> words,
                                           const StopWords& stop_words = StopWords::english());

/// Minimal suffix stripper: -ing, -ed, -es, -s (longest first) when at least
/// three letters remain, with doubled-consonant reduction after -ing/-ed.
/// Applied until the word stops changing, so stem(stem(w)) == stem(w).
std::string stem(std::string_view word);

/// Classic Porter (1980) stemmer.
std::string porter_stem(std::string_view word);

std::string stem(std::string_view word, StemMode mode);

/// tokenize -> stop words -> stem -> stop words -> de-duplicate.
DescriptiveTokenSet descriptive_tokens(std::string owner_id, std::string_view text,
                                       const TextOptions& options = {});
DescriptiveTokenSet descriptive_tokens(const ChangeRequest& cr, const TextOptions& options = {});

std::size_t overlap(const DescriptiveTokenSet& a, const DescriptiveTokenSet& b);

/// Score = number of shared tokens; descending score, ties by id ascending;
/// ranks 1..n.
std::vector<RankedDescriptor> rank_descriptors(const DescriptiveTokenSet& query,
                                               const std::vector<DescriptiveTokenSet>& descriptors);

}  // namespace textprep
}  // namespace dfpcrc
