#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <json.hpp>

#include "dfpcrc/error.hpp"
#include "dfpcrc/ingest.hpp"
#include "ingest_internal.hpp"

namespace dfpcrc::ingest {

using nlohmann::json;

namespace detail {

std::vector<Line> split_lines(std::string_view source) {
  std::vector<Line> lines;
  std::size_t start = 0;
  std::size_t number = 1;
  while (start < source.size()) {
    std::size_t end = source.find('\n', start);
    if (end == std::string_view::npos) end = source.size();
    std::string_view text = source.substr(start, end - start);
    if (!text.empty() && text.back() == '\r') text.remove_suffix(1);
    lines.push_back({text, number, start});
    start = end + 1;
    ++number;
  }
  return lines;
}

std::string_view trim(std::string_view s) noexcept {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

bool starts_with(std::string_view s, std::string_view prefix) noexcept {
  return s.substr(0, prefix.size()) == prefix;
}

namespace {
std::size_t first_invalid_utf8(std::string_view text) noexcept {
  const auto* p = reinterpret_cast<const unsigned char*>(text.data());
  const std::size_t n = text.size();
  std::size_t i = 0;
  while (i < n) {
    const unsigned char c = p[i];
    std::size_t len = 0;
    std::uint32_t cp = 0;
    if (c < 0x80) {
      ++i;
      continue;
    } else if ((c & 0xE0) == 0xC0) {
      len = 2;
      cp = c & 0x1F;
    } else if ((c & 0xF0) == 0xE0) {
      len = 3;
      cp = c & 0x0F;
    } else if ((c & 0xF8) == 0xF0) {
      len = 4;
      cp = c & 0x07;
    } else {
      return i;
    }
    if (i + len > n) return i;
    for (std::size_t k = 1; k < len; ++k) {
      if ((p[i + k] & 0xC0) != 0x80) return i;
      cp = (cp << 6) | (p[i + k] & 0x3F);
    }
    const bool overlong = (len == 2 && cp < 0x80) || (len == 3 && cp < 0x800) ||
                          (len == 4 && cp < 0x10000);
    if (overlong || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) return i;
    i += len;
  }
  return std::string_view::npos;
}
}  // namespace

void require_utf8(std::string_view source) {
  if (auto bad = first_invalid_utf8(source); bad != std::string_view::npos) {
    throw DataError(Stage::ingest, "invalid UTF-8 at byte offset " + std::to_string(bad));
  }
}

void check_unique_events(const std::vector<RevisionEvent>& events) {
  std::set<std::pair<std::string_view, std::string_view>> seen;
  for (const auto& e : events) {
    if (!seen.emplace(e.revision_id, e.code_block_id).second) {
      throw DataError(Stage::ingest, "duplicate revision/block pair '" + e.revision_id + "' / '" +
                                         e.code_block_id + "'");
    }
  }
}

}  // namespace detail

using detail::Line;

bool is_valid_utf8(std::string_view text) noexcept {
  return detail::first_invalid_utf8(text) == std::string_view::npos;
}

std::optional<RequestFormat> parse_request_format(std::string_view tag) noexcept {
  if (tag == "jsonl") return RequestFormat::jsonl;
  if (tag == "csv") return RequestFormat::csv;
  return std::nullopt;
}

RevisionFormat parse_revision_format(std::string_view tag) {
  if (tag == "jsonl") return RevisionFormat::jsonl;
  if (tag == "cvs_rlog") return RevisionFormat::cvs_rlog;
  if (tag == "git_log") return RevisionFormat::git_log;
  throw DataError(Stage::ingest, "unknown revision log format '" + std::string(tag) + "'");
}

std::optional<LinkMode> parse_link_mode(std::string_view tag) noexcept {
  if (tag == "explicit_id") return LinkMode::explicit_id;
  if (tag == "token_overlap") return LinkMode::token_overlap;
  if (tag == "both") return LinkMode::both;
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Timestamps

namespace {

bool read_int(std::string_view s, std::size_t pos, std::size_t width, int& out) {
  if (pos + width > s.size()) return false;
  for (std::size_t i = pos; i < pos + width; ++i)
    if (s[i] < '0' || s[i] > '9') return false;
  return std::from_chars(s.data() + pos, s.data() + pos + width, out).ec == std::errc{};
}

std::optional<Timestamp> make_timestamp(int y, int mo, int d, int h, int mi, int s) {
  using namespace std::chrono;
  const year_month_day ymd{year{y}, month{static_cast<unsigned>(mo)},
                           day{static_cast<unsigned>(d)}};
  if (!ymd.ok() || h > 23 || mi > 59 || s > 60) return std::nullopt;
  return sys_days{ymd} + hours{h} + minutes{mi} + seconds{s};
}

}  // namespace

std::optional<Timestamp> parse_rfc3339(std::string_view text) {
  text = detail::trim(text);
  int y, mo, d, h, mi, s;
  if (!read_int(text, 0, 4, y) || text.size() < 19 || text[4] != '-' || !read_int(text, 5, 2, mo) ||
      text[7] != '-' || !read_int(text, 8, 2, d) ||
      !(text[10] == 'T' || text[10] == 't' || text[10] == ' ') || !read_int(text, 11, 2, h) ||
      text[13] != ':' || !read_int(text, 14, 2, mi) || text[16] != ':' ||
      !read_int(text, 17, 2, s)) {
    return std::nullopt;
  }
  std::size_t pos = 19;
  if (pos < text.size() && text[pos] == '.') {
    ++pos;
    const std::size_t digits_start = pos;
    while (pos < text.size() && text[pos] >= '0' && text[pos] <= '9') ++pos;
    if (pos == digits_start) return std::nullopt;
  }
  auto ts = make_timestamp(y, mo, d, h, mi, s);
  if (!ts || pos >= text.size()) return std::nullopt;
  const char zone = text[pos];
  if ((zone == 'Z' || zone == 'z') && pos + 1 == text.size()) return ts;
  if ((zone == '+' || zone == '-') && text.size() == pos + 6 && text[pos + 3] == ':') {
    int oh, om;
    if (!read_int(text, pos + 1, 2, oh) || !read_int(text, pos + 4, 2, om)) return std::nullopt;
    const auto offset = std::chrono::hours{oh} + std::chrono::minutes{om};
    return zone == '+' ? *ts - offset : *ts + offset;
  }
  return std::nullopt;
}

std::string format_rfc3339(Timestamp ts) {
  using namespace std::chrono;
  const auto days = floor<std::chrono::days>(ts);
  const year_month_day ymd{days};
  const hh_mm_ss hms{ts - days};
  char buf[32];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02d:%02d:%02dZ", static_cast<int>(ymd.year()),
                static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()),
                static_cast<int>(hms.hours().count()), static_cast<int>(hms.minutes().count()),
                static_cast<int>(hms.seconds().count()));
  return buf;
}

// ---------------------------------------------------------------------------
// Change requests

namespace {

[[noreturn]] void fail_line(std::size_t line, const std::string& what) {
  throw DataError(Stage::ingest, "line " + std::to_string(line) + ": " + what);
}

std::optional<bool> parse_bool_field(std::string_view v) {
  v = detail::trim(v);
  std::string lower(v);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (lower.empty()) return std::nullopt;
  if (lower == "true" || lower == "1" || lower == "yes") return true;
  if (lower == "false" || lower == "0" || lower == "no") return false;
  throw std::invalid_argument("not a boolean: '" + std::string(v) + "'");
}

void check_request(const ChangeRequest& cr, std::size_t line) {
  if (cr.id.empty()) fail_line(line, "empty change request id");
  if (cr.short_desc.empty() && cr.long_desc.empty())
    fail_line(line, "change request '" + cr.id + "' has no description");
}

std::string optional_string(const json& obj, const char* key, std::size_t line) {
  auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) return {};
  if (!it->is_string()) fail_line(line, std::string("field '") + key + "' must be a string");
  return it->get<std::string>();
}

std::vector<ChangeRequest> parse_requests_jsonl(std::string_view source) {
  std::vector<ChangeRequest> out;
  for (const Line& line : detail::split_lines(source)) {
    if (detail::trim(line.text).empty()) continue;
    json obj;
    try {
      obj = json::parse(line.text);
    } catch (const json::parse_error& e) {
      fail_line(line.number, std::string("malformed JSON: ") + e.what());
    }
    if (!obj.is_object()) fail_line(line.number, "record is not a JSON object");
    auto id = obj.find("id");
    if (id == obj.end() || !id->is_string()) fail_line(line.number, "missing string field 'id'");
    ChangeRequest cr;
    cr.id = id->get<std::string>();
    cr.short_desc = optional_string(obj, "short", line.number);
    cr.long_desc = optional_string(obj, "long", line.number);
    if (auto hint = obj.find("kind_hint"); hint != obj.end() && !hint->is_null()) {
      if (!hint->is_string()) fail_line(line.number, "field 'kind_hint' must be a string");
      cr.kind_hint = hint->get<std::string>();
    }
    if (auto fault = obj.find("fault"); fault != obj.end() && !fault->is_null()) {
      if (!fault->is_boolean()) fail_line(line.number, "field 'fault' must be a boolean");
      cr.ground_truth = fault->get<bool>();
    }
    check_request(cr, line.number);
    out.push_back(std::move(cr));
  }
  return out;
}

struct CsvRecord {
  std::vector<std::string> fields;
  std::size_t line = 0;
};

// RFC 4180: quoted fields may contain commas, doubled quotes and newlines.
std::vector<CsvRecord> split_csv(std::string_view source) {
  std::vector<CsvRecord> records;
  CsvRecord current;
  std::string field;
  std::size_t line = 1;
  current.line = 1;
  bool in_quotes = false;
  bool any = false;
  for (std::size_t i = 0; i < source.size(); ++i) {
    const char c = source[i];
    if (in_quotes) {
      if (c == '"') {
        if (i + 1 < source.size() && source[i + 1] == '"') {
          field.push_back('"');
          ++i;
        } else {
          in_quotes = false;
        }
      } else {
        if (c == '\n') ++line;
        field.push_back(c);
      }
      continue;
    }
    if (c == '"') {
      if (!field.empty()) fail_line(line, "quote inside unquoted CSV field");
      in_quotes = true;
      any = true;
    } else if (c == ',') {
      current.fields.push_back(std::move(field));
      field.clear();
      any = true;
    } else if (c == '\n' || c == '\r') {
      if (c == '\r' && i + 1 < source.size() && source[i + 1] == '\n') ++i;
      if (any || !field.empty()) {
        current.fields.push_back(std::move(field));
        records.push_back(std::move(current));
      }
      field.clear();
      current = CsvRecord{};
      any = false;
      ++line;
      current.line = line;
    } else {
      field.push_back(c);
      any = true;
    }
  }
  if (in_quotes) fail_line(current.line, "unterminated quoted CSV field");
  if (any || !field.empty()) {
    current.fields.push_back(std::move(field));
    records.push_back(std::move(current));
  }
  return records;
}

std::vector<ChangeRequest> parse_requests_csv(std::string_view source) {
  auto records = split_csv(source);
  std::vector<ChangeRequest> out;
  if (records.empty()) return out;
  std::map<std::string, std::size_t> column;
  for (std::size_t i = 0; i < records[0].fields.size(); ++i)
    column[std::string(detail::trim(records[0].fields[i]))] = i;
  for (const char* required : {"id"}) {
    if (!column.count(required)) fail_line(1, std::string("CSV header lacks column '") + required + "'");
  }
  auto cell = [&](const CsvRecord& r, const char* name) -> std::optional<std::string> {
    auto it = column.find(name);
    if (it == column.end() || it->second >= r.fields.size()) return std::nullopt;
    return r.fields[it->second];
  };
  for (std::size_t k = 1; k < records.size(); ++k) {
    const CsvRecord& r = records[k];
    if (r.fields.size() != records[0].fields.size()) {
      fail_line(r.line, "expected " + std::to_string(records[0].fields.size()) + " fields, got " +
                            std::to_string(r.fields.size()));
    }
    ChangeRequest cr;
    cr.id = std::string(detail::trim(*cell(r, "id")));
    cr.short_desc = cell(r, "short").value_or("");
    cr.long_desc = cell(r, "long").value_or("");
    if (auto hint = cell(r, "kind_hint"); hint && !detail::trim(*hint).empty())
      cr.kind_hint = std::string(detail::trim(*hint));
    if (auto fault = cell(r, "fault")) {
      try {
        cr.ground_truth = parse_bool_field(*fault);
      } catch (const std::invalid_argument& e) {
        fail_line(r.line, e.what());
      }
    }
    check_request(cr, r.line);
    out.push_back(std::move(cr));
  }
  return out;
}

}  // namespace

std::vector<ChangeRequest> parse_change_requests(std::string_view source, RequestFormat format) {
  detail::require_utf8(source);
  auto out = format == RequestFormat::jsonl ? parse_requests_jsonl(source)
                                            : parse_requests_csv(source);
  std::set<std::string_view> ids;
  for (const auto& cr : out) {
    if (!ids.insert(cr.id).second)
      throw DataError(Stage::ingest, "duplicate change request id '" + cr.id + "'");
  }
  return out;
}

// ---------------------------------------------------------------------------
// Revision logs

namespace {

std::vector<RevisionEvent> parse_revisions_jsonl(std::string_view source) {
  std::vector<RevisionEvent> out;
  for (const Line& line : detail::split_lines(source)) {
    if (detail::trim(line.text).empty()) continue;
    json obj;
    try {
      obj = json::parse(line.text);
    } catch (const json::parse_error& e) {
      fail_line(line.number, std::string("malformed JSON: ") + e.what());
    }
    if (!obj.is_object()) fail_line(line.number, "record is not a JSON object");
    auto require_string = [&](const char* key) {
      auto it = obj.find(key);
      if (it == obj.end() || !it->is_string())
        fail_line(line.number, std::string("missing string field '") + key + "'");
      return it->get<std::string>();
    };
    RevisionEvent e;
    e.revision_id = require_string("rev");
    e.code_block_id = require_string("block");
    if (e.revision_id.empty() || e.code_block_id.empty())
      fail_line(line.number, "empty 'rev' or 'block'");
    const std::string ts = require_string("ts");
    auto parsed = parse_rfc3339(ts);
    if (!parsed) fail_line(line.number, "bad RFC 3339 timestamp '" + ts + "'");
    e.timestamp = *parsed;
    e.message = optional_string(obj, "msg", line.number);
    if (auto crs = obj.find("crs"); crs != obj.end() && !crs->is_null()) {
      if (!crs->is_array()) fail_line(line.number, "field 'crs' must be an array");
      for (const auto& id : *crs) {
        if (!id.is_string()) fail_line(line.number, "field 'crs' must hold strings");
        e.linked_cr_ids.push_back(id.get<std::string>());
      }
    }
    out.push_back(std::move(e));
  }
  detail::check_unique_events(out);
  return out;
}

}  // namespace

std::vector<RevisionEvent> parse_revision_log(std::string_view source, RevisionFormat format) {
  detail::require_utf8(source);
  switch (format) {
    case RevisionFormat::jsonl: return parse_revisions_jsonl(source);
    case RevisionFormat::cvs_rlog: return detail::parse_cvs_rlog(source);
    case RevisionFormat::git_log: return detail::parse_git_log(source);
  }
  throw DataError(Stage::ingest, "unknown revision log format");
}

namespace {
std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError(Stage::ingest, "cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}
}  // namespace

std::vector<ChangeRequest> read_change_requests(const std::string& path, RequestFormat format) {
  return parse_change_requests(slurp(path), format);
}

std::vector<RevisionEvent> read_revision_log(const std::string& path, RevisionFormat format) {
  return parse_revision_log(slurp(path), format);
}

std::string write_change_requests_jsonl(const std::vector<ChangeRequest>& crs) {
  std::string out;
  for (const auto& cr : crs) {
    json obj = {{"id", cr.id}, {"short", cr.short_desc}, {"long", cr.long_desc}};
    if (cr.kind_hint) obj["kind_hint"] = *cr.kind_hint;
    if (cr.ground_truth) obj["fault"] = *cr.ground_truth;
    out += obj.dump();
    out += '\n';
  }
  return out;
}

std::string write_revisions_jsonl(const std::vector<RevisionEvent>& events) {
  std::string out;
  for (const auto& e : events) {
    json obj = {{"rev", e.revision_id},
                {"block", e.code_block_id},
                {"ts", format_rfc3339(e.timestamp)},
                {"msg", e.message}};
    if (!e.linked_cr_ids.empty()) obj["crs"] = e.linked_cr_ids;
    out += obj.dump();
    out += '\n';
  }
  return out;
}

std::vector<CodeBlock> code_blocks(const std::vector<RevisionEvent>& events) {
  std::map<std::string_view, std::size_t> counts;
  for (const auto& e : events) ++counts[e.code_block_id];
  std::vector<CodeBlock> out;
  out.reserve(counts.size());
  for (const auto& [id, n] : counts) out.push_back({std::string(id), n});
  return out;
}

}  // namespace dfpcrc::ingest
