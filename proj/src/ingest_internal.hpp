#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "dfpcrc/ingest.hpp"

namespace dfpcrc::ingest::detail {

struct Line {
  std::string_view text;  // without the trailing newline / carriage return
  std::size_t number = 0;  // 1-based
  std::size_t offset = 0;  // byte offset of the first character
};

std::vector<Line> split_lines(std::string_view source);

std::string_view trim(std::string_view s) noexcept;
bool starts_with(std::string_view s, std::string_view prefix) noexcept;

/// Throws DataError naming the byte offset of the first invalid sequence.
void require_utf8(std::string_view source);

std::vector<RevisionEvent> parse_cvs_rlog(std::string_view source);
std::vector<RevisionEvent> parse_git_log(std::string_view source);

/// Accepts RFC 3339, `YYYY-MM-DD HH:MM:SS [+ZZZZ]`, `YYYY/MM/DD HH:MM:SS` and
/// git's default `Www Mmm D HH:MM:SS YYYY +ZZZZ`.
std::optional<Timestamp> parse_log_date(std::string_view text);

void check_unique_events(const std::vector<RevisionEvent>& events);

}  // namespace dfpcrc::ingest::detail
