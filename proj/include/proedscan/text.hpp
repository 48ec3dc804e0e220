#pragma once

#include <optional>
#include <string>
#include <vector>

namespace proedscan {

// Shortest round-trip decimal form (std::to_chars). Every float written to
// an artifact goes through here so re-runs are byte-identical.
std::string format_double(double value);

std::optional<double> parse_double(const std::string& text);
std::optional<std::int64_t> parse_int(const std::string& text);

std::string ascii_lower(std::string s);
std::string trim(const std::string& s);
std::vector<std::string> split(const std::string& s, char sep);

// Comma- or whitespace-separated list (config taxonomy entries).
std::vector<std::string> split_list(const std::string& s);

} // namespace proedscan
