// Adapters for `cvs rlog` stanzas and `git log --numstat` output.

#include <array>
#include <charconv>

#include "dfpcrc/error.hpp"
#include "ingest_internal.hpp"

namespace dfpcrc::ingest::detail {

namespace {

[[noreturn]] void fail_at(std::size_t offset, const std::string& what) {
  throw DataError(Stage::ingest, "byte offset " + std::to_string(offset) + ": " + what);
}

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s)
    if (c < '0' || c > '9') return false;
  return true;
}

int to_int(std::string_view s) {
  int v = 0;
  std::from_chars(s.data(), s.data() + s.size(), v);
  return v;
}

std::optional<Timestamp> civil(int y, int mo, int d, int h, int mi, int s) {
  using namespace std::chrono;
  const year_month_day ymd{year{y}, month{static_cast<unsigned>(mo)},
                           day{static_cast<unsigned>(d)}};
  if (!ymd.ok() || h > 23 || mi > 59 || s > 60) return std::nullopt;
  return sys_days{ymd} + hours{h} + minutes{mi} + seconds{s};
}

// "+HHMM" / "-HHMM" / "+HH:MM"; empty means UTC.
std::optional<std::chrono::minutes> parse_offset(std::string_view z) {
  z = trim(z);
  if (z.empty() || z == "Z" || z == "UTC" || z == "GMT") return std::chrono::minutes{0};
  if (z.size() == 6 && z[3] == ':') {
    std::string compact{z.substr(0, 3)};
    compact += z.substr(4);
    return parse_offset(compact);
  }
  if (z.size() != 5 || (z[0] != '+' && z[0] != '-') || !all_digits(z.substr(1))) return std::nullopt;
  const std::chrono::minutes off{to_int(z.substr(1, 2)) * 60 + to_int(z.substr(3, 2))};
  return z[0] == '+' ? off : -off;
}

// "HH:MM:SS"
bool parse_clock(std::string_view t, int& h, int& mi, int& s) {
  if (t.size() < 8 || t[2] != ':' || t[5] != ':' || !all_digits(t.substr(0, 2)) ||
      !all_digits(t.substr(3, 2)) || !all_digits(t.substr(6, 2)))
    return false;
  h = to_int(t.substr(0, 2));
  mi = to_int(t.substr(3, 2));
  s = to_int(t.substr(6, 2));
  return true;
}

std::vector<std::string_view> words(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
    std::size_t j = i;
    while (j < s.size() && s[j] != ' ' && s[j] != '\t') ++j;
    if (j > i) out.push_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

constexpr std::array<std::string_view, 12> kMonths = {"Jan", "Feb", "Mar", "Apr", "May", "Jun",
                                                      "Jul", "Aug", "Sep", "Oct", "Nov", "Dec"};

// Strips "a/{x => y}/b" and "x => y" rename notation down to the new path.
std::string resolve_rename(std::string_view path) {
  const auto arrow = path.find(" => ");
  if (arrow == std::string_view::npos) return std::string(path);
  const auto open = path.rfind('{', arrow);
  const auto close = path.find('}', arrow);
  if (open != std::string_view::npos && close != std::string_view::npos) {
    std::string out(path.substr(0, open));
    out += path.substr(arrow + 4, close - arrow - 4);
    std::string_view tail = path.substr(close + 1);
    if (!out.empty() && out.back() == '/' && !tail.empty() && tail.front() == '/')
      tail.remove_prefix(1);
    out += tail;
    return out;
  }
  return std::string(path.substr(arrow + 4));
}

}  // namespace

std::optional<Timestamp> parse_log_date(std::string_view text) {
  text = trim(text);
  if (auto ts = parse_rfc3339(text)) return ts;
  const auto w = words(text);
  int h, mi, s;
  // YYYY-MM-DD HH:MM:SS [zone]  or  YYYY/MM/DD HH:MM:SS [zone]
  if (w.size() >= 2 && w[0].size() == 10 && (w[0][4] == '-' || w[0][4] == '/') &&
      w[0][7] == w[0][4] && all_digits(w[0].substr(0, 4)) && all_digits(w[0].substr(5, 2)) &&
      all_digits(w[0].substr(8, 2)) && parse_clock(w[1], h, mi, s) && w.size() <= 3) {
    auto ts = civil(to_int(w[0].substr(0, 4)), to_int(w[0].substr(5, 2)),
                    to_int(w[0].substr(8, 2)), h, mi, s);
    auto off = parse_offset(w.size() == 3 ? w[2] : std::string_view{});
    if (!ts || !off) return std::nullopt;
    return *ts - *off;
  }
  // Www Mmm D HH:MM:SS YYYY [zone]
  if (w.size() >= 5 && w.size() <= 6 && parse_clock(w[3], h, mi, s) && all_digits(w[2]) &&
      all_digits(w[4])) {
    int month = 0;
    for (std::size_t i = 0; i < kMonths.size(); ++i)
      if (w[1] == kMonths[i]) month = static_cast<int>(i) + 1;
    if (month == 0) return std::nullopt;
    auto ts = civil(to_int(w[4]), month, to_int(w[2]), h, mi, s);
    auto off = parse_offset(w.size() == 6 ? w[5] : std::string_view{});
    if (!ts || !off) return std::nullopt;
    return *ts - *off;
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------

std::vector<RevisionEvent> parse_cvs_rlog(std::string_view source) {
  static constexpr std::string_view kRevSep = "----------------------------";
  static constexpr std::string_view kFileSep =
      "=============================================================================";

  enum class State { header, description, rev_header, rev_date, message };
  std::vector<RevisionEvent> out;
  State state = State::header;
  std::string rcs_file;
  std::string working_file;
  RevisionEvent current;
  std::string message;
  bool have_file = false;

  auto block_id = [&]() -> std::string {
    if (!working_file.empty()) return working_file;
    std::string p = rcs_file;
    if (p.size() > 2 && p.compare(p.size() - 2, 2, ",v") == 0) p.resize(p.size() - 2);
    if (auto attic = p.find("/Attic/"); attic != std::string::npos) p.erase(attic, 6);
    return p;
  };
  auto finish_revision = [&] {
    while (!message.empty() && message.back() == '\n') message.pop_back();
    current.message = std::move(message);
    message.clear();
    out.push_back(std::move(current));
    current = RevisionEvent{};
  };

  for (const Line& line : split_lines(source)) {
    const std::string_view t = line.text;
    switch (state) {
      case State::header:
        if (starts_with(t, "RCS file:")) {
          rcs_file = std::string(trim(t.substr(9)));
          working_file.clear();
          have_file = true;
        } else if (starts_with(t, "Working file:")) {
          working_file = std::string(trim(t.substr(13)));
        } else if (starts_with(t, "description:")) {
          if (!have_file) fail_at(line.offset, "stanza without 'RCS file:' header");
          state = State::description;
        } else if (!trim(t).empty() && !have_file) {
          fail_at(line.offset, "expected 'RCS file:' header");
        }
        break;
      case State::description:
        if (t == kRevSep) state = State::rev_header;
        else if (t == kFileSep) {
          state = State::header;
          have_file = false;
        }
        break;
      case State::rev_header: {
        if (!starts_with(t, "revision ")) fail_at(line.offset, "expected 'revision' line");
        const auto parts = words(t.substr(9));
        if (parts.empty()) fail_at(line.offset, "revision line without a number");
        current.revision_id = std::string(parts[0]);
        current.code_block_id = block_id();
        state = State::rev_date;
        break;
      }
      case State::rev_date: {
        if (!starts_with(t, "date:")) fail_at(line.offset, "expected 'date:' line");
        const auto semi = t.find(';');
        auto ts = parse_log_date(t.substr(5, semi == std::string_view::npos ? t.npos : semi - 5));
        if (!ts) fail_at(line.offset, "unparseable revision date");
        current.timestamp = *ts;
        if (auto cid = t.find("commitid:"); cid != std::string_view::npos) {
          std::string_view rest = t.substr(cid + 9);
          rest = trim(rest.substr(0, rest.find(';')));
          if (!rest.empty()) current.revision_id = std::string(rest);
        }
        state = State::message;
        break;
      }
      case State::message:
        if (t == kRevSep) {
          finish_revision();
          state = State::rev_header;
        } else if (t == kFileSep) {
          finish_revision();
          state = State::header;
          have_file = false;
        } else if (message.empty() && starts_with(t, "branches:")) {
          // branch list belongs to the revision header
        } else {
          message += t;
          message += '\n';
        }
        break;
    }
  }
  if (state == State::rev_header || state == State::rev_date) {
    fail_at(source.size(), "truncated revision stanza");
  }
  if (state == State::message) finish_revision();
  check_unique_events(out);
  return out;
}

// ---------------------------------------------------------------------------

std::vector<RevisionEvent> parse_git_log(std::string_view source) {
  std::vector<RevisionEvent> out;
  std::string hash;
  std::optional<Timestamp> date;
  std::string message;
  std::vector<std::string> files;
  std::size_t commit_offset = 0;
  bool in_header = false;
  bool in_commit = false;

  auto flush = [&] {
    if (!in_commit) return;
    if (!date) fail_at(commit_offset, "commit " + hash + " has no Date header");
    while (!message.empty() && message.back() == '\n') message.pop_back();
    for (auto& f : files) {
      out.push_back(RevisionEvent{hash, std::move(f), *date, message, {}});
    }
    files.clear();
    message.clear();
    date.reset();
    in_commit = false;
  };

  for (const Line& line : split_lines(source)) {
    const std::string_view t = line.text;
    if (starts_with(t, "commit ")) {
      flush();
      const auto parts = words(t.substr(7));
      if (parts.empty()) fail_at(line.offset, "commit line without a hash");
      hash = std::string(parts[0]);
      commit_offset = line.offset;
      in_commit = true;
      in_header = true;
      continue;
    }
    if (!in_commit) {
      if (!trim(t).empty()) fail_at(line.offset, "expected 'commit' line");
      continue;
    }
    if (in_header) {
      if (trim(t).empty()) {
        in_header = false;
        continue;
      }
      if (starts_with(t, "    ")) {
        in_header = false;  // no blank separator before the message
      } else {
        const auto colon = t.find(':');
        if (colon == std::string_view::npos) fail_at(line.offset, "malformed commit header line");
        const std::string_view key = t.substr(0, colon);
        if (key == "Date" || key == "AuthorDate") {
          date = parse_log_date(t.substr(colon + 1));
          if (!date) fail_at(line.offset, "unparseable commit date");
        }
        continue;
      }
    }
    if (trim(t).empty()) continue;
    if (starts_with(t, "    ")) {
      message += t.substr(4);
      message += '\n';
      continue;
    }
    // numstat: <added>\t<deleted>\t<path>
    const auto tab1 = t.find('\t');
    const auto tab2 = tab1 == std::string_view::npos ? tab1 : t.find('\t', tab1 + 1);
    if (tab2 == std::string_view::npos) fail_at(line.offset, "expected numstat line");
    const auto added = t.substr(0, tab1);
    const auto deleted = t.substr(tab1 + 1, tab2 - tab1 - 1);
    if (!(all_digits(added) || added == "-") || !(all_digits(deleted) || deleted == "-"))
      fail_at(line.offset, "malformed numstat counts");
    std::string path = resolve_rename(t.substr(tab2 + 1));
    if (path.empty()) fail_at(line.offset, "numstat line without a path");
    files.push_back(std::move(path));
  }
  flush();
  check_unique_events(out);
  return out;
}

}  // namespace dfpcrc::ingest::detail
