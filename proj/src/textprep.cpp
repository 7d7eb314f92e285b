#include "dfpcrc/textprep.hpp"

#include <algorithm>
#include <cctype>
#include <array>
#include <fstream>
#include <sstream>

#include "dfpcrc/error.hpp"
#include "dfpcrc/ingest.hpp"

namespace dfpcrc::textprep {

namespace {

// None of these may collide with a taxonomy keyword.
constexpr std::array<std::string_view, 130> kEnglishStopWords = {
    "a",       "about",    "above",     "after",      "again",  "against", "all",
    "also",    "am",       "an",        "and",        "any",    "are",     "as",
    "at",      "be",       "because",   "been",       "before", "being",   "below",
    "between", "both",     "but",       "by",         "can",    "could",   "did",
    "do",      "does",     "doing",     "down",       "during", "each",    "either",
    "etc",     "few",      "for",       "from",       "further", "had",    "has",
    "have",    "having",   "he",        "her",        "here",   "hers",    "herself",
    "him",     "himself",  "his",       "how",        "i",      "if",      "in",
    "into",    "is",       "it",        "its",        "itself", "just",    "may",
    "me",      "might",    "more",      "most",       "must",   "my",      "myself",
    "no",      "nor",      "not",       "now",        "of",     "off",     "on",
    "once",    "only",     "or",        "other",      "our",    "ours",    "ourselves",
    "out",     "over",     "own",       "same",       "shall",  "she",     "should",
    "so",      "some",     "such",      "than",       "that",   "the",     "their",
    "theirs",  "them",     "themselves", "then",      "there",  "these",   "they",
    "this",    "those",    "through",   "to",         "too",    "under",   "until",
    "up",      "us",       "very",      "was",        "we",     "were",    "what",
    "when",    "where",    "which",     "while",      "who",    "whom",    "why",
    "will",    "with",     "would",     "you"};

bool ends_with(std::string_view word, std::string_view suffix) {
  return word.size() >= suffix.size() && word.substr(word.size() - suffix.size()) == suffix;
}

bool is_vowel(char c) {
  return c == 'a' || c == 'e' || c == 'i' || c == 'o' || c == 'u';
}

bool is_word_byte(unsigned char c) {
  // Bytes >= 0x80 belong to multi-byte UTF-8 sequences and stay inside words.
  return (c >= '0' && c <= '9') || (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c >= 0x80;
}

std::string strip_once(const std::string& word) {
  constexpr std::array<std::string_view, 4> suffixes = {"ing", "ed", "es", "s"};
  for (std::string_view suffix : suffixes) {
    if (!ends_with(word, suffix) || word.size() - suffix.size() < 3) continue;
    if (suffix == "s" && (ends_with(word, "ss") || ends_with(word, "us") || ends_with(word, "is"))) {
      continue;
    }
    std::string residue = word.substr(0, word.size() - suffix.size());
    if (suffix == "ing" || suffix == "ed") {
      const std::size_t n = residue.size();
      const char last = residue[n - 1];
      if (n >= 4 && last == residue[n - 2] && !is_vowel(last) && last != 'l' && last != 's' &&
          last != 'z' && (last >= 'a' && last <= 'z')) {
        residue.pop_back();
      }
    }
    return residue;
  }
  return word;
}

}  // namespace

const StopWords& StopWords::english() {
  static const StopWords list = [] {
    std::vector<std::string> words;
    words.reserve(kEnglishStopWords.size());
    for (std::string_view w : kEnglishStopWords) words.emplace_back(w);
    return StopWords(std::move(words));
  }();
  return list;
}

StopWords::StopWords(std::vector<std::string> words)
    : words_(std::make_move_iterator(words.begin()), std::make_move_iterator(words.end())) {}

StopWords StopWords::parse(std::string_view text) {
  std::vector<std::string> words;
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    auto last = line.find_last_not_of(" \t\r");
    std::string word = line.substr(first, last - first + 1);
    std::transform(word.begin(), word.end(), word.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    words.push_back(std::move(word));
  }
  return StopWords(std::move(words));
}

StopWords StopWords::from_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError(Stage::textprep, "cannot open stop-word file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse(buf.str());
}

bool StopWords::contains(std::string_view word) const {
  return words_.find(std::string(word)) != words_.end();
}

bool DescriptiveTokenSet::contains(std::string_view token) const {
  return std::find(tokens.begin(), tokens.end(), token) != tokens.end();
}

std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> words;
  std::string current;
  for (char ch : text) {
    const auto c = static_cast<unsigned char>(ch);
    if (is_word_byte(c)) {
      current.push_back((c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : ch);
    } else if (!current.empty()) {
      words.push_back(std::move(current));
      current.clear();
    }
  }
  if (!current.empty()) words.push_back(std::move(current));
  return words;
}

std::vector<std::string> remove_stop_words(std::vector<std::string> words,
                                           const StopWords& stop_words) {
  std::erase_if(words, [&](const std::string& w) { return stop_words.contains(w); });
  return words;
}

std::string stem(std::string_view word) {
  std::string current(word);
  for (;;) {
    std::string next = strip_once(current);
    if (next == current) return current;
    current = std::move(next);
  }
}

std::string stem(std::string_view word, StemMode mode) {
  return mode == StemMode::porter ? porter_stem(word) : stem(word);
}

DescriptiveTokenSet descriptive_tokens(std::string owner_id, std::string_view text,
                                       const TextOptions& options) {
  const StopWords& stop = *options.stop_words;
  DescriptiveTokenSet out{std::move(owner_id), {}};
  for (std::string& word : remove_stop_words(tokenize(text), stop)) {
    std::string s = stem(word, options.stem_mode);
    // A stem can itself be a stop word ("others" -> "other").
    if (s.empty() || stop.contains(s)) continue;
    if (std::find(out.tokens.begin(), out.tokens.end(), s) == out.tokens.end()) {
      out.tokens.push_back(std::move(s));
    }
  }
  return out;
}

DescriptiveTokenSet descriptive_tokens(const ChangeRequest& cr, const TextOptions& options) {
  std::string text = cr.short_desc;
  text += ' ';
  text += cr.long_desc;
  return descriptive_tokens(cr.id, text, options);
}

std::size_t overlap(const DescriptiveTokenSet& a, const DescriptiveTokenSet& b) {
  const auto& small = a.tokens.size() <= b.tokens.size() ? a : b;
  const auto& large = a.tokens.size() <= b.tokens.size() ? b : a;
  std::size_t count = 0;
  for (const auto& t : small.tokens) count += large.contains(t) ? 1 : 0;
  return count;
}

std::vector<RankedDescriptor> rank_descriptors(const DescriptiveTokenSet& query,
                                               const std::vector<DescriptiveTokenSet>& descriptors) {
  std::vector<RankedDescriptor> ranked;
  ranked.reserve(descriptors.size());
  for (const auto& d : descriptors) ranked.push_back({d.owner_id, overlap(query, d), 0});
  std::stable_sort(ranked.begin(), ranked.end(), [](const auto& x, const auto& y) {
    if (x.score != y.score) return x.score > y.score;
    return x.descriptor_id < y.descriptor_id;
  });
  for (std::size_t i = 0; i < ranked.size(); ++i) ranked[i].rank = i + 1;
  return ranked;
}

}  // namespace dfpcrc::textprep
