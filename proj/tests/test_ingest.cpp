#include <doctest.h>

#include <algorithm>
#include <string>

#include "dfpcrc/error.hpp"
#include "dfpcrc/ingest.hpp"

using namespace dfpcrc;
using namespace dfpcrc::ingest;

namespace {

const char* kGitLog =
    "commit 1a2b3c4d\n"
    "Author: Dana <dana@example.org>\n"
    "Date:   Wed Jan 1 10:00:00 2014 +0100\n"
    "\n"
    "    Bug 7: fix crash in parser\n"
    "\n"
    "3\t1\tsrc/parser.c\n"
    "0\t2\tsrc/{old => new}/lexer.c\n"
    "\n"
    "commit 5e6f7a8b\n"
    "Author: Dana <dana@example.org>\n"
    "Date:   Thu Jan 2 09:30:00 2014 +0000\n"
    "\n"
    "    Add exporter, see #12\n"
    "\n"
    "10\t0\tsrc/exporter.c\n";

const char* kRlog =
    "\n"
    "RCS file: /cvs/proj/src/Attic/cache.c,v\n"
    "head: 1.2\n"
    "branch:\n"
    "locks: strict\n"
    "access list:\n"
    "symbolic names:\n"
    "keyword substitution: kv\n"
    "total revisions: 2;\tselected revisions: 2\n"
    "description:\n"
    "----------------------------\n"
    "revision 1.2\n"
    "date: 2014/01/02 10:00:00;  author: bob;  state: Exp;  lines: +1 -0;  commitid: 100abc;\n"
    "CR-7 guard cache\n"
    "second line\n"
    "----------------------------\n"
    "revision 1.1\n"
    "date: 2014/01/01 10:00:00;  author: bob;  state: Exp;\n"
    "branches:  1.1.2;\n"
    "Initial import\n"
    "=============================================================================\n";

ChangeRequest cr(std::string id, std::string s, std::string l = {}) {
  ChangeRequest c;
  c.id = std::move(id);
  c.short_desc = std::move(s);
  c.long_desc = std::move(l);
  return c;
}

RevisionEvent ev(std::string rev, std::string block, std::string msg) {
  RevisionEvent e;
  e.revision_id = std::move(rev);
  e.code_block_id = std::move(block);
  e.message = std::move(msg);
  return e;
}

}  // namespace

TEST_SUITE("ingest") {

TEST_CASE("change requests from jsonl") {
  CHECK(parse_change_requests("", RequestFormat::jsonl).empty());
  const auto crs = parse_change_requests(R"({"id":"CR-1","short":"fix crash","long":""})", RequestFormat::jsonl);
  REQUIRE(crs.size() == 1);
  CHECK(crs[0].id == "CR-1");
  CHECK(crs[0].short_desc == "fix crash");
  CHECK(crs[0].long_desc.empty());
  CHECK_FALSE(crs[0].kind_hint.has_value());
  CHECK_FALSE(crs[0].ground_truth.has_value());
}

TEST_CASE("duplicate ids and malformed lines are rejected with context") {
  const std::string dup = "{\"id\":\"CR-1\",\"short\":\"a\"}\n{\"id\":\"CR-1\",\"short\":\"b\"}\n";
  try {
    parse_change_requests(dup, RequestFormat::jsonl);
    FAIL("expected an error");
  } catch (const DataError& e) {
    CHECK(std::string(e.what()).find("CR-1") != std::string::npos);
  }
  try {
    parse_change_requests("{\"id\":\"CR-1\",\"short\":\"a\"}\n{oops\n", RequestFormat::jsonl);
    FAIL("expected an error");
  } catch (const DataError& e) {
    CHECK(std::string(e.what()).find("line 2") != std::string::npos);
  }
  CHECK_THROWS_AS(parse_change_requests(R"({"id":"","short":"a"})", RequestFormat::jsonl), DataError);
  CHECK_THROWS_AS(parse_change_requests(R"({"id":"x","short":"","long":""})", RequestFormat::jsonl), DataError);
}

TEST_CASE("change requests from csv with quoting") {
  const auto crs = parse_change_requests(
      "id,short,long,kind_hint,fault\r\nCR-1,\"fix, crash\",\"said \"\"hi\"\"\",bug,true\nCR-2,add feature,,,\n",
      RequestFormat::csv);
  REQUIRE(crs.size() == 2);
  CHECK(crs[0].short_desc == "fix, crash");
  CHECK(crs[0].long_desc == "said \"hi\"");
  CHECK(crs[0].kind_hint == "bug");
  CHECK(crs[0].ground_truth == true);
  CHECK_FALSE(crs[1].kind_hint.has_value());
}

TEST_CASE("revision events from jsonl") {
  CHECK(parse_revision_log("", RevisionFormat::jsonl).empty());
  const auto evs = parse_revision_log(
      R"({"rev":"r1","block":"src/a","ts":"2014-01-01T00:00:00Z","msg":"Bug 7 fix"})", RevisionFormat::jsonl);
  REQUIRE(evs.size() == 1);
  CHECK(evs[0].revision_id == "r1");
  CHECK(evs[0].code_block_id == "src/a");
  CHECK(format_rfc3339(evs[0].timestamp) == "2014-01-01T00:00:00Z");
  CHECK(evs[0].message == "Bug 7 fix");
  CHECK(evs[0].linked_cr_ids.empty());
  const std::string twice =
      "{\"rev\":\"r1\",\"block\":\"a\",\"ts\":\"2014-01-01T00:00:00Z\",\"msg\":\"\"}\n"
      "{\"rev\":\"r1\",\"block\":\"a\",\"ts\":\"2014-01-01T00:00:00Z\",\"msg\":\"\"}\n";
  CHECK_THROWS_AS(parse_revision_log(twice, RevisionFormat::jsonl), DataError);
}

TEST_CASE("git log numstat adapter") {
  const auto evs = parse_revision_log(kGitLog, RevisionFormat::git_log);
  REQUIRE(evs.size() == 3);
  CHECK(evs[0].revision_id == evs[1].revision_id);
  CHECK(evs[0].code_block_id == "src/parser.c");
  CHECK(evs[1].code_block_id == "src/new/lexer.c");
  CHECK(evs[0].message == "Bug 7: fix crash in parser");
  CHECK(format_rfc3339(evs[0].timestamp) == "2014-01-01T09:00:00Z");
  CHECK(evs[2].code_block_id == "src/exporter.c");
}

TEST_CASE("cvs rlog adapter") {
  const auto evs = parse_revision_log(kRlog, RevisionFormat::cvs_rlog);
  REQUIRE(evs.size() == 2);
  CHECK(evs[0].code_block_id == "/cvs/proj/src/cache.c");
  CHECK(evs[0].revision_id == "100abc");
  CHECK(evs[0].message == "CR-7 guard cache\nsecond line");
  CHECK(evs[1].revision_id == "1.1");
  CHECK(evs[1].message == "Initial import");
  CHECK(format_rfc3339(evs[1].timestamp) == "2014-01-01T10:00:00Z");
}

TEST_CASE("malformed logs report a byte offset") {
  try {
    parse_revision_log("RCS file: a,v\ndescription:\n----------------------------\nrev 1.1\n", RevisionFormat::cvs_rlog);
    FAIL("expected an error");
  } catch (const DataError& e) {
    CHECK(std::string(e.what()).find("byte offset") != std::string::npos);
  }
  CHECK_THROWS_AS(parse_revision_log("not a commit\n", RevisionFormat::git_log), DataError);
  CHECK_THROWS_AS(parse_revision_format("svn"), DataError);
}

TEST_CASE("jsonl round trip") {
  auto crs = parse_change_requests(
      "{\"id\":\"CR-1\",\"short\":\"fix crash\",\"long\":\"x\",\"kind_hint\":\"bug\",\"fault\":true}\n"
      "{\"id\":\"CR-2\",\"short\":\"add caf\\u00e9 support\",\"long\":\"\"}\n",
      RequestFormat::jsonl);
  CHECK(parse_change_requests(write_change_requests_jsonl(crs), RequestFormat::jsonl) == crs);
  const auto evs = parse_revision_log(kGitLog, RevisionFormat::git_log);
  CHECK(parse_revision_log(write_revisions_jsonl(evs), RevisionFormat::jsonl) == evs);
  CHECK(parse_revision_log(kGitLog, RevisionFormat::git_log) == evs);
}

TEST_CASE("rfc3339 parsing") {
  CHECK(format_rfc3339(*parse_rfc3339("2014-01-01T01:30:00+01:30")) == "2014-01-01T00:00:00Z");
  CHECK(format_rfc3339(*parse_rfc3339("2014-01-01T00:00:00.250Z")) == "2014-01-01T00:00:00Z");
  CHECK_FALSE(parse_rfc3339("2014-13-01T00:00:00Z").has_value());
  CHECK_FALSE(parse_rfc3339("yesterday").has_value());
}

TEST_CASE("code blocks count their revisions") {
  const auto blocks = code_blocks(parse_revision_log(kGitLog, RevisionFormat::git_log));
  REQUIRE(blocks.size() == 3);
  CHECK(blocks[0].id == "src/exporter.c");
  for (const auto& b : blocks) CHECK(b.revision_count_total == 1);
}

TEST_CASE("explicit id linking") {
  const std::vector<ChangeRequest> crs = {cr("CR-7", "crash"), cr("CR-12", "exporter")};
  auto out = link_revisions({ev("r1", "a", "Bug CR-7 fixed"), ev("r2", "a", "see #12"), ev("r3", "a", "bug 7 again")},
                            crs, LinkOptions{.mode = LinkMode::explicit_id});
  CHECK(out[0].linked_cr_ids == std::vector<std::string>{"CR-7"});
  CHECK(out[1].linked_cr_ids == std::vector<std::string>{"CR-12"});
  CHECK(out[2].linked_cr_ids == std::vector<std::string>{"CR-7"});
}

TEST_CASE("token overlap linking") {
  const std::vector<ChangeRequest> crs = {cr("CR-1", "parser crash on unicode input"), cr("CR-2", "slow exporter")};
  LinkOptions opts;
  opts.mode = LinkMode::token_overlap;
  auto out = link_revisions({ev("r1", "a", "parser crash unicode"), ev("r2", "a", "nothing related here"),
                             ev("r3", "a", "exporter tweak")},
                            crs, opts);
  CHECK(out[0].linked_cr_ids == std::vector<std::string>{"CR-1"});
  CHECK(out[1].linked_cr_ids.empty());
  CHECK(out[2].linked_cr_ids.empty());
}

TEST_CASE("linking keeps existing links") {
  auto e = ev("r1", "a", "CR-2 follow up");
  e.linked_cr_ids = {"CR-1"};
  const auto out = link_revisions({e}, {cr("CR-1", "x"), cr("CR-2", "y")});
  REQUIRE(out.size() == 1);
  CHECK(std::find(out[0].linked_cr_ids.begin(), out[0].linked_cr_ids.end(), "CR-1") != out[0].linked_cr_ids.end());
  CHECK(std::find(out[0].linked_cr_ids.begin(), out[0].linked_cr_ids.end(), "CR-2") != out[0].linked_cr_ids.end());
}

TEST_CASE("utf8 validation") {
  CHECK(is_valid_utf8("caf\xc3\xa9"));
  CHECK_FALSE(is_valid_utf8("\xc3"));
  CHECK_FALSE(is_valid_utf8("\xed\xa0\x80"));
  CHECK_THROWS_AS(parse_change_requests("{\"id\":\"a\",\"short\":\"\xff\"}", RequestFormat::jsonl), DataError);
}

}
