#pragma once

// Change-request and revision-log ingestion. The normalized interchange
// format is JSONL; `cvs rlog` and `git log --numstat` outputs are adapters
// that produce the same records.

#include <chrono>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dfpcrc/textprep.hpp"

namespace dfpcrc {

using Timestamp = std::chrono::sys_seconds;

struct ChangeRequest {
  std::string id;
  std::string short_desc;
  std::string long_desc;
  std::optional<std::string> kind_hint;
  std::optional<bool> ground_truth;  // "became fault-prone"; evaluation only

  bool operator==(const ChangeRequest&) const = default;
};

struct RevisionEvent {
  std::string revision_id;
  std::string code_block_id;
  Timestamp timestamp{};
  std::string message;
  std::vector<std::string> linked_cr_ids;

  bool operator==(const RevisionEvent&) const = default;
};

struct CodeBlock {
  std::string id;
  std::size_t revision_count_total = 0;

  bool operator==(const CodeBlock&) const = default;
};

namespace ingest {

enum class RequestFormat { jsonl, csv };
enum class RevisionFormat { jsonl, cvs_rlog, git_log };
enum class LinkMode { explicit_id, token_overlap, both };

std::optional<RequestFormat> parse_request_format(std::string_view tag) noexcept;
/// Throws DataError for an unknown tag.
RevisionFormat parse_revision_format(std::string_view tag);
std::optional<LinkMode> parse_link_mode(std::string_view tag) noexcept;

std::vector<ChangeRequest> parse_change_requests(std::string_view source, RequestFormat format);
std::vector<RevisionEvent> parse_revision_log(std::string_view source, RevisionFormat format);

std::vector<ChangeRequest> read_change_requests(const std::string& path, RequestFormat format);
std::vector<RevisionEvent> read_revision_log(const std::string& path, RevisionFormat format);

std::string write_change_requests_jsonl(const std::vector<ChangeRequest>& crs);
std::string write_revisions_jsonl(const std::vector<RevisionEvent>& events);

/// RFC 3339 (`2014-01-01T00:00:00Z`, offsets and fractions accepted).
std::optional<Timestamp> parse_rfc3339(std::string_view text);
std::string format_rfc3339(Timestamp ts);

/// Distinct code blocks in id order with their revision counts.
std::vector<CodeBlock> code_blocks(const std::vector<RevisionEvent>& events);

struct LinkPattern {
  std::string regex;  // group 1 captures the numeric part of the id
};

struct LinkOptions {
  LinkMode mode = LinkMode::both;
  std::vector<LinkPattern> patterns = default_link_patterns();
  std::size_t min_overlap = 2;
  textprep::TextOptions text{};

  static std::vector<LinkPattern> default_link_patterns();
};

/// Adds links from commit messages to change requests. Existing links are
/// kept. Explicit ids match a request whose id equals the matched text or
/// whose trailing number equals the captured number. Token overlap links the
/// single best-overlapping request (ties by id) when no explicit id matched.
std::vector<RevisionEvent> link_revisions(std::vector<RevisionEvent> events,
                                          const std::vector<ChangeRequest>& crs,
                                          const LinkOptions& options = {});

bool is_valid_utf8(std::string_view text) noexcept;

}  // namespace ingest
}  // namespace dfpcrc
