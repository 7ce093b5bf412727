#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace cuesync {

// Shortest decimal string that parses back to exactly the same double.
std::string format_double(double value);

// Fixed-notation shortest representation, fraction padded to at least
// six digits. Exact: parsing the result recovers the identical double.
std::string format_seconds(double value);

double parse_double(std::string_view text); // throws MalformedFile on junk

std::string trim(std::string_view s);
std::vector<std::string> split(std::string_view s, char sep);

bool starts_with(std::string_view s, std::string_view prefix);

// FNV-1a over a string, hex-encoded; used for config provenance lines.
std::string fnv1a_hex(std::string_view data);

} // namespace cuesync
