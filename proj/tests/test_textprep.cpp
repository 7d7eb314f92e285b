#include <doctest.h>

#include <algorithm>
#include <random>
#include <string>
#include <utility>

#include "dfpcrc/ingest.hpp"
#include "dfpcrc/textprep.hpp"

using namespace dfpcrc;
using namespace dfpcrc::textprep;

using Words = std::vector<std::string>;

namespace {

std::string join(const Words& w) {
  std::string s;
  for (const auto& t : w) s += (s.empty() ? "" : " ") + t;
  return s;
}

}  // namespace

TEST_SUITE("textprep") {

TEST_CASE("tokenize") {
  CHECK(tokenize("").empty());
  CHECK(tokenize("Fixed the NULL-pointer crash") == Words{"fixed", "the", "null", "pointer", "crash"});
  CHECK(tokenize("a,a,,a") == Words{"a", "a", "a"});
  CHECK(tokenize("v2 build_id caf\xc3\xa9") == Words{"v2", "build", "id", "caf\xc3\xa9"});
}

TEST_CASE("stop words") {
  CHECK(remove_stop_words({"the", "and", "of", "a"}).empty());
  CHECK(remove_stop_words({}).empty());
  CHECK(remove_stop_words({"fix", "the", "crash"}) == Words{"fix", "crash"});
  CHECK(StopWords::english().size() >= 100);
  const auto custom = StopWords::parse("# comment\nfix\n\ncrash  \n");
  CHECK(custom.size() == 2);
  CHECK(remove_stop_words({"fix", "the", "crash"}, custom) == Words{"the"});
}

TEST_CASE("minimal stemmer") {
  CHECK(stem("running") == "run");
  CHECK(stem("fix") == "fix");
  CHECK(stem("crashed") == "crash");
  CHECK(stem("crashing") == "crash");
  CHECK(stem("bugs") == "bug");
  CHECK(stem("fixes") == "fix");
  CHECK(stem("class") == "class");
  CHECK(stem("status") == "status");
  CHECK(stem("analysis") == "analysis");
  CHECK(stem("falling") == "fall");
  CHECK(stem("sing") == "sing");
  CHECK(stem("red") == "red");
}

TEST_CASE("stemmer never lengthens, keeps three letters, and is idempotent") {
  std::mt19937_64 rng(3);
  const std::string letters = "abcdeginrsz";
  for (int i = 0; i < 5000; ++i) {
    std::string w;
    const std::size_t len = 1 + rng() % 9;
    for (std::size_t k = 0; k < len; ++k) w += letters[rng() % letters.size()];
    const std::string s = stem(w);
    CAPTURE(w);
    CHECK(s.size() <= w.size());
    CHECK((s == w || s.size() >= 3));
    CHECK(stem(s) == s);
  }
}

TEST_CASE("porter stemmer reference vectors") {
  const std::pair<const char*, const char*> cases[] = {
      {"caresses", "caress"}, {"ponies", "poni"},     {"ties", "ti"},          {"caress", "caress"},
      {"cats", "cat"},        {"feed", "feed"},       {"agreed", "agre"},      {"plastered", "plaster"},
      {"motoring", "motor"},  {"sing", "sing"},       {"conflated", "conflat"}, {"troubled", "troubl"},
      {"sized", "size"},      {"hopping", "hop"},     {"tanned", "tan"},       {"falling", "fall"},
      {"hissing", "hiss"},    {"fizzed", "fizz"},     {"failing", "fail"},     {"filing", "file"},
      {"happy", "happi"},     {"sky", "sky"},         {"relational", "relat"}, {"conditional", "condit"},
      {"rational", "ration"}, {"generalization", "gener"}, {"oscillators", "oscil"},
      {"connection", "connect"}, {"adjustment", "adjust"}, {"effective", "effect"},
      {"probate", "probat"},  {"rate", "rate"},       {"controll", "control"}, {"roll", "roll"},
      {"cease", "ceas"},      {"hopeful", "hope"},    {"electrical", "electr"}, {"formaliti", "formal"},
  };
  for (const auto& [in, out] : cases) {
    CAPTURE(in);
    CHECK(porter_stem(in) == out);
  }
  CHECK(stem("running", StemMode::porter) == "run");
}

TEST_CASE("descriptive tokens") {
  CHECK(descriptive_tokens("x", "").tokens.empty());
  CHECK(descriptive_tokens("x", "Fixed the crashing bugs").tokens == Words{"fix", "crash", "bug"});
  CHECK(descriptive_tokens("x", "the and of").tokens.empty());
  ChangeRequest cr;
  cr.id = "CR-1";
  cr.short_desc = "crash";
  cr.long_desc = "crashes in parser";
  const auto t = descriptive_tokens(cr);
  CHECK(t.owner_id == "CR-1");
  CHECK(t.tokens == Words{"crash", "parser"});
}

TEST_CASE("descriptive tokens are a fixed point of themselves") {
  const char* texts[] = {"Fixed the crashing bugs in the running parsers",
                         "Statuses of classes were passing analyses",
                         "is was uses buses caused issues",
                         "hopping stopped dresses; addresses added"};
  for (const char* t : texts) {
    const auto once = descriptive_tokens("x", t);
    CAPTURE(t);
    CHECK(descriptive_tokens("x", join(once.tokens)) == once);
    for (const auto& tok : once.tokens) CHECK_FALSE(StopWords::english().contains(tok));
  }
}

TEST_CASE("descriptor ranking") {
  const DescriptiveTokenSet q{"q", {"a", "b", "c"}};
  CHECK(rank_descriptors(q, {}).empty());
  const auto r = rank_descriptors(q, {{"D2", {"c"}}, {"D1", {"a", "b"}}});
  REQUIRE(r.size() == 2);
  CHECK(r[0] == RankedDescriptor{"D1", 2, 1});
  CHECK(r[1] == RankedDescriptor{"D2", 1, 2});
  const auto tie = rank_descriptors(q, {{"B", {"a"}}, {"A", {"b"}}, {"C", {}}});
  CHECK(tie[0].descriptor_id == "A");
  CHECK(tie[1].descriptor_id == "B");
  CHECK(tie[2].descriptor_id == "C");
  CHECK(tie[2].rank == 3);
  CHECK(overlap(q, {"d", {"c", "a", "z"}}) == 2);
}

}
