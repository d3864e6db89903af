#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

// Locale-independent number formatting and parsing. Everything written to
// disk or stdout goes through these so output never depends on LC_NUMERIC.
namespace vrcmf {

/// Fixed notation with `precision` digits after the dot, rounded to nearest.
std::string format_fixed(double value, int precision);

/// Fixed notation truncated toward zero at `precision` digits.
std::string format_truncated(double value, int precision);

/// Shortest representation that round-trips exactly.
std::string format_roundtrip(double value);

std::optional<double> parse_double(std::string_view text);
std::optional<std::int64_t> parse_int(std::string_view text);

std::string_view trim(std::string_view text);
std::vector<std::string_view> split(std::string_view text, std::string_view delimiter);

}  // namespace vrcmf
