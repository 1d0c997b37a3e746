#include "ontorec/log.hpp"

#include <algorithm>
#include <istream>
#include <map>
#include <ostream>
#include <tuple>

#include "ontorec/errors.hpp"
#include "ontorec/text.hpp"

namespace ontorec {

const char* line_error_name(LineError error) {
  switch (error) {
    case LineError::None: return "none";
    case LineError::MalformedLine: return "malformed-line";
    case LineError::BadTimestamp: return "bad-timestamp";
    case LineError::BadStatus: return "bad-status";
  }
  return "unknown";
}

bool entry_order(const LogEntry& a, const LogEntry& b) {
  return std::tie(a.timestamp, a.url, a.method, a.status, a.bytes, a.referrer,
                  a.client_id, a.user_agent) <
         std::tie(b.timestamp, b.url, b.method, b.status, b.bytes, b.referrer,
                  b.client_id, b.user_agent);
}

namespace {

constexpr const char* kMonths[] = {"Jan", "Feb", "Mar", "Apr", "May", "Jun",
                                   "Jul", "Aug", "Sep", "Oct", "Nov", "Dec"};

int month_from_name(std::string_view name) {
  for (int m = 0; m < 12; ++m) {
    if (name == kMonths[m]) return m + 1;
  }
  return 0;
}

// Howard Hinnant's days-from-civil; valid for all proleptic Gregorian dates.
int64_t days_from_civil(int y, int m, int d) {
  y -= m <= 2;
  const int64_t era = (y >= 0 ? y : y - 399) / 400;
  const unsigned yoe = static_cast<unsigned>(y - era * 400);
  const unsigned doy = (153u * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
  const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
  return era * 146097 + static_cast<int64_t>(doe) - 719468;
}

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (c < '0' || c > '9') return false;
  }
  return true;
}

// "10/Oct/2000:13:55:36 -0700" -> epoch seconds
bool parse_clf_timestamp(std::string_view text, int64_t* out) {
  // dd/Mon/yyyy:HH:MM:SS zone
  if (text.size() < 26) return false;
  const auto parts = split(text, ' ');
  if (parts.size() != 2) return false;
  const std::string_view stamp = parts[0];
  const std::string_view zone = parts[1];

  if (stamp.size() != 20 || stamp[2] != '/' || stamp[6] != '/' ||
      stamp[11] != ':' || stamp[14] != ':' || stamp[17] != ':') {
    return false;
  }
  const std::string_view dd = stamp.substr(0, 2);
  const std::string_view mon = stamp.substr(3, 3);
  const std::string_view yyyy = stamp.substr(7, 4);
  const std::string_view hh = stamp.substr(12, 2);
  const std::string_view mi = stamp.substr(15, 2);
  const std::string_view ss = stamp.substr(18, 2);
  if (!all_digits(dd) || !all_digits(yyyy) || !all_digits(hh) ||
      !all_digits(mi) || !all_digits(ss)) {
    return false;
  }
  const int month = month_from_name(mon);
  if (month == 0) return false;
  const int day = (dd[0] - '0') * 10 + (dd[1] - '0');
  const int year = (yyyy[0] - '0') * 1000 + (yyyy[1] - '0') * 100 +
                   (yyyy[2] - '0') * 10 + (yyyy[3] - '0');
  const int hour = (hh[0] - '0') * 10 + (hh[1] - '0');
  const int minute = (mi[0] - '0') * 10 + (mi[1] - '0');
  const int second = (ss[0] - '0') * 10 + (ss[1] - '0');
  if (day < 1 || day > 31 || hour > 23 || minute > 59 || second > 60) {
    return false;
  }

  if (zone.size() != 5 || (zone[0] != '+' && zone[0] != '-') ||
      !all_digits(zone.substr(1))) {
    return false;
  }
  const int zh = (zone[1] - '0') * 10 + (zone[2] - '0');
  const int zm = (zone[3] - '0') * 10 + (zone[4] - '0');
  if (zh > 14 || zm > 59) return false;
  int64_t offset = zh * 3600 + zm * 60;
  if (zone[0] == '-') offset = -offset;

  const int64_t local = days_from_civil(year, month, day) * 86400 +
                        hour * 3600 + minute * 60 + second;
  *out = local - offset;  // local = utc + offset
  return true;
}

struct Cursor {
  std::string_view text;
  size_t pos = 0;

  void skip_spaces() {
    while (pos < text.size() && text[pos] == ' ') ++pos;
  }

  bool done() {
    skip_spaces();
    return pos >= text.size();
  }

  // plain token up to the next space
  bool token(std::string_view* out) {
    skip_spaces();
    if (pos >= text.size()) return false;
    const size_t start = pos;
    while (pos < text.size() && text[pos] != ' ') ++pos;
    *out = text.substr(start, pos - start);
    return true;
  }

  // [ ... ]
  bool bracketed(std::string_view* out) {
    skip_spaces();
    if (pos >= text.size() || text[pos] != '[') return false;
    const size_t start = ++pos;
    const size_t end = text.find(']', pos);
    if (end == std::string_view::npos) return false;
    *out = text.substr(start, end - start);
    pos = end + 1;
    return true;
  }

  // " ... " with \" and \\ escapes
  bool quoted(std::string* out) {
    skip_spaces();
    if (pos >= text.size() || text[pos] != '"') return false;
    ++pos;
    out->clear();
    while (pos < text.size()) {
      const char c = text[pos];
      if (c == '\\' && pos + 1 < text.size() &&
          (text[pos + 1] == '"' || text[pos + 1] == '\\')) {
        out->push_back(text[pos + 1]);
        pos += 2;
        continue;
      }
      if (c == '"') {
        ++pos;
        return true;
      }
      out->push_back(c);
      ++pos;
    }
    return false;  // unterminated
  }
};

bool has_suffix_ci(const std::string& text, const std::string& suffix) {
  if (suffix.size() > text.size()) return false;
  const size_t off = text.size() - suffix.size();
  for (size_t i = 0; i < suffix.size(); ++i) {
    const char a = static_cast<char>(std::tolower(static_cast<unsigned char>(text[off + i])));
    const char b = static_cast<char>(std::tolower(static_cast<unsigned char>(suffix[i])));
    if (a != b) return false;
  }
  return true;
}

}  // namespace

std::string normalize_url(std::string_view raw, bool strip_query) {
  std::string_view url = raw;

  // absolute-form requests: drop scheme and host
  for (std::string_view scheme : {"http://", "https://"}) {
    if (url.size() > scheme.size() &&
        to_lower(url.substr(0, scheme.size())) == scheme) {
      url.remove_prefix(scheme.size());
      const size_t slash = url.find('/');
      url = slash == std::string_view::npos ? std::string_view("/") : url.substr(slash);
      break;
    }
  }

  const size_t hash = url.find('#');
  if (hash != std::string_view::npos) url = url.substr(0, hash);
  if (strip_query) {
    const size_t q = url.find('?');
    if (q != std::string_view::npos) url = url.substr(0, q);
  }

  std::string decoded = unescape_field(url);
  while (decoded.size() > 1 && decoded.back() == '/') decoded.pop_back();
  return decoded;
}

std::optional<LogEntry> parse_log_line(std::string_view line,
                                       const ParseOptions& opts,
                                       LineError* error) {
  const auto fail = [&](LineError e) -> std::optional<LogEntry> {
    if (error) *error = e;
    return std::nullopt;
  };

  Cursor cur{trim(line)};
  std::string_view host, ident, authuser, stamp, status_tok, bytes_tok;
  std::string request;
  if (!cur.token(&host) || !cur.token(&ident) || !cur.token(&authuser)) {
    return fail(LineError::MalformedLine);
  }
  if (!cur.bracketed(&stamp)) return fail(LineError::MalformedLine);
  if (!cur.quoted(&request)) return fail(LineError::MalformedLine);
  if (!cur.token(&status_tok) || !cur.token(&bytes_tok)) {
    return fail(LineError::MalformedLine);
  }

  LogEntry entry;
  if (opts.format == LogFormat::Combined) {
    std::string referrer, agent;
    if (!cur.quoted(&referrer) || !cur.quoted(&agent)) {
      return fail(LineError::MalformedLine);
    }
    if (referrer != "-" && !referrer.empty()) entry.referrer = referrer;
    entry.user_agent = agent;
  }
  if (!cur.done()) return fail(LineError::MalformedLine);

  // request line: METHOD SP url [SP protocol]
  const auto req_parts = split_ws(request);
  if (req_parts.size() != 2 && req_parts.size() != 3) {
    return fail(LineError::MalformedLine);
  }
  entry.method = req_parts[0];
  entry.url = normalize_url(req_parts[1], opts.strip_query);
  if (entry.url.empty() || entry.url[0] != '/') {
    return fail(LineError::MalformedLine);
  }

  if (!parse_clf_timestamp(stamp, &entry.timestamp)) {
    return fail(LineError::BadTimestamp);
  }

  uint64_t status = 0;
  if (!parse_u64(status_tok, &status) || status < 100 || status > 599) {
    return fail(LineError::BadStatus);
  }
  entry.status = static_cast<int>(status);

  if (bytes_tok != "-") {
    uint64_t bytes = 0;
    if (!parse_u64(bytes_tok, &bytes)) return fail(LineError::MalformedLine);
    entry.bytes = bytes;
  }

  entry.client_id = std::string(host);
  if (error) *error = LineError::None;
  return entry;
}

std::vector<LogEntry> clean_entries(const std::vector<LogEntry>& entries,
                                    const CleanOptions& opts,
                                    CleanStats* stats) {
  CleanStats local;
  std::vector<std::string> keywords;
  keywords.reserve(opts.crawler_keywords.size());
  for (const auto& k : opts.crawler_keywords) keywords.push_back(to_lower(k));

  std::vector<LogEntry> kept;
  kept.reserve(entries.size());
  for (const LogEntry& entry : entries) {
    ++local.input;
    if (entry.status != 200) {
      ++local.bad_status;
      continue;
    }
    if (entry.method != "GET") {
      ++local.bad_method;
      continue;
    }
    bool asset = entry.url == "/robots.txt";
    for (const auto& suffix : opts.asset_suffixes) {
      if (asset) break;
      asset = has_suffix_ci(entry.url, suffix);
    }
    if (asset) {
      ++local.assets;
      continue;
    }
    const std::string agent = to_lower(entry.user_agent);
    bool crawler = false;
    for (const auto& keyword : keywords) {
      if (agent.find(keyword) != std::string::npos) {
        crawler = true;
        break;
      }
    }
    if (crawler) {
      ++local.crawlers;
      continue;
    }
    ++local.kept;
    kept.push_back(entry);
  }
  if (stats) *stats = local;
  return kept;
}

std::vector<Session> sessionize(std::vector<LogEntry> entries,
                                int64_t timeout_seconds) {
  std::map<std::string, std::vector<LogEntry>> by_user;
  for (LogEntry& entry : entries) {
    by_user[entry.user_key()].push_back(std::move(entry));
  }

  std::vector<Session> sessions;
  for (auto& [user_key, user_entries] : by_user) {
    std::sort(user_entries.begin(), user_entries.end(), entry_order);
    size_t ordinal = 0;
    Session current;
    int64_t last_ts = 0;
    for (const LogEntry& entry : user_entries) {
      const bool fresh = current.page_views.empty();
      if (!fresh && entry.timestamp - last_ts > timeout_seconds) {
        sessions.push_back(std::move(current));
        current = Session{};
      }
      if (current.page_views.empty()) {
        current.session_id = user_key + "#" + std::to_string(ordinal++);
        current.user_key = user_key;
      }
      current.page_views.push_back({entry.url, entry.timestamp});
      last_ts = entry.timestamp;
    }
    if (!current.page_views.empty()) sessions.push_back(std::move(current));
  }
  return sessions;
}

void write_sessions(std::ostream& out, const std::vector<Session>& sessions) {
  for (const Session& session : sessions) {
    out << escape_field(session.session_id) << '\t'
        << escape_field(session.user_key) << '\t'
        << iso8601_utc(session.page_views.front().timestamp) << '\t';
    for (size_t i = 0; i < session.page_views.size(); ++i) {
      if (i > 0) out << ',';
      out << escape_field(session.page_views[i].url, ",");
    }
    out << '\n';
  }
}

namespace {

int64_t parse_iso8601_utc(const std::string& text) {
  // yyyy-mm-ddThh:mm:ssZ
  if (text.size() != 20 || text[4] != '-' || text[7] != '-' || text[10] != 'T' ||
      text[13] != ':' || text[16] != ':' || text[19] != 'Z') {
    throw Error(ErrorCode::Syntax, "bad ISO-8601 timestamp: " + text);
  }
  const auto num = [&](size_t pos, size_t len) {
    int value = 0;
    for (size_t i = pos; i < pos + len; ++i) {
      if (text[i] < '0' || text[i] > '9') {
        throw Error(ErrorCode::Syntax, "bad ISO-8601 timestamp: " + text);
      }
      value = value * 10 + (text[i] - '0');
    }
    return value;
  };
  return days_from_civil(num(0, 4), num(5, 2), num(8, 2)) * 86400 +
         num(11, 2) * 3600 + num(14, 2) * 60 + num(17, 2);
}

}  // namespace

std::vector<Session> read_sessions(std::istream& in) {
  std::vector<Session> sessions;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto fields = split(line, '\t');
    if (fields.size() != 4) {
      throw Error(ErrorCode::Syntax,
                  "session file line " + std::to_string(line_no) +
                      ": expected 4 tab-separated fields");
    }
    Session session;
    session.session_id = unescape_field(fields[0]);
    session.user_key = unescape_field(fields[1]);
    const int64_t first_ts = parse_iso8601_utc(fields[2]);
    for (const std::string& url : split(fields[3], ',')) {
      if (url.empty()) {
        throw Error(ErrorCode::Syntax,
                    "session file line " + std::to_string(line_no) +
                        ": empty url in page view list");
      }
      session.page_views.push_back({unescape_field(url), first_ts});
    }
    sessions.push_back(std::move(session));
  }
  return sessions;
}

}  // namespace ontorec
