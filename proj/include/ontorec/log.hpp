#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace ontorec {

enum class LogFormat { Common, Combined };

struct LogEntry {
  std::string client_id;
  std::string user_agent;
  int64_t timestamp = 0;  // unix epoch seconds, UTC
  std::string method;
  std::string url;  // normalized path
  int status = 0;
  std::optional<uint64_t> bytes;
  std::optional<std::string> referrer;

  std::string user_key() const { return client_id + "|" + user_agent; }

  friend bool operator==(const LogEntry&, const LogEntry&) = default;
};

// Total order starting with the timestamp; the remaining fields break ties so
// that sorting a user's entries is permutation-invariant.
bool entry_order(const LogEntry& a, const LogEntry& b);

enum class LineError { None, MalformedLine, BadTimestamp, BadStatus };

const char* line_error_name(LineError error);

struct ParseOptions {
  LogFormat format = LogFormat::Combined;
  bool strip_query = true;
};

std::optional<LogEntry> parse_log_line(std::string_view line,
                                       const ParseOptions& opts,
                                       LineError* error = nullptr);

// Query/fragment stripped (optionally), percent-decoded, trailing slashes
// removed except for the root. Scheme and host of absolute URLs are dropped.
// Returns an empty string when no usable path remains.
std::string normalize_url(std::string_view raw, bool strip_query = true);

struct CleanOptions {
  std::vector<std::string> asset_suffixes = {".css", ".js",  ".gif",
                                             ".png", ".jpg", ".jpeg",
                                             ".ico", ".svg", ".woff"};
  std::vector<std::string> crawler_keywords = {"bot", "crawler", "spider",
                                               "slurp"};
};

// Attribution is by first failing filter, in the order the filters are
// applied: status, method, asset/robots, crawler.
struct CleanStats {
  uint64_t input = 0;
  uint64_t kept = 0;
  uint64_t bad_status = 0;
  uint64_t bad_method = 0;
  uint64_t assets = 0;
  uint64_t crawlers = 0;
};

std::vector<LogEntry> clean_entries(const std::vector<LogEntry>& entries,
                                    const CleanOptions& opts = {},
                                    CleanStats* stats = nullptr);

struct PageView {
  std::string url;
  int64_t timestamp = 0;

  friend bool operator==(const PageView&, const PageView&) = default;
};

struct Session {
  std::string session_id;
  std::string user_key;
  std::vector<PageView> page_views;

  friend bool operator==(const Session&, const Session&) = default;
};

inline constexpr int64_t kDefaultSessionTimeout = 1800;  // seconds

// Groups by user key, orders by timestamp, splits on gaps > timeout.
// Sessions come back sorted by (user_key, ordinal).
std::vector<Session> sessionize(std::vector<LogEntry> entries,
                                int64_t timeout_seconds = kDefaultSessionTimeout);

// Line format: session_id TAB user_key TAB first-visit ISO-8601 TAB
// url,url,...  Fields are percent-escaped so the round trip is lossless.
void write_sessions(std::ostream& out, const std::vector<Session>& sessions);
std::vector<Session> read_sessions(std::istream& in);

}  // namespace ontorec
