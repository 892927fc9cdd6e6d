#pragma once

// Small text helpers shared by the loaders and writers.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace ofl::text {

/// Shortest decimal form that parses back to the same double.
std::string format_double(double v);

/// Strict parse of a whole field; nullopt if anything is left over.
std::optional<double> parse_double(std::string_view s);
std::optional<long long> parse_int(std::string_view s);

std::string_view trim(std::string_view s);

/// Picks ',', '\t' or ';' if present in the line, otherwise ' ' (runs of
/// whitespace).
char detect_delimiter(std::string_view line);

/// Splits on `delim`; a space delimiter collapses runs of whitespace.
std::vector<std::string_view> split(std::string_view line, char delim);

}  // namespace ofl::text
