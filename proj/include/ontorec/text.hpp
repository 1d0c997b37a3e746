#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace ontorec {

std::vector<std::string> split(std::string_view text, char sep);
std::vector<std::string> split_ws(std::string_view text);
std::string_view trim(std::string_view text);
std::string to_lower(std::string_view text);
std::string join(const std::vector<std::string>& parts, std::string_view sep);

// Shortest representation that round-trips a double exactly.
std::string format_double(double value);
// Fixed six decimal places, used where files pin a stable column width.
std::string format_fixed6(double value);

bool parse_double(std::string_view text, double* out);
bool parse_u64(std::string_view text, uint64_t* out);
bool parse_i64(std::string_view text, int64_t* out);

std::string iso8601_utc(int64_t epoch_seconds);

// Percent-escape for line-oriented files: always encodes '%', TAB, CR, LF
// plus any extra delimiter bytes a field may not contain.
std::string escape_field(std::string_view raw, std::string_view extra = "");
std::string unescape_field(std::string_view escaped);

}  // namespace ontorec
