#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

// Small string and number helpers shared across modules.
namespace nuclib::text {

std::string_view trim(std::string_view s) noexcept;
std::string to_lower(std::string_view s);

// Locale-independent; rejects trailing garbage and empty input.
std::optional<double> parse_double(std::string_view s) noexcept;

// Shortest representation that parses back to the same double.
std::string format_double(double v);

std::vector<std::string_view> split_lines(std::string_view body);

// RFC 4180-style record splitting: quoted fields, doubled quotes, CRLF tolerated.
std::vector<std::vector<std::string>> parse_csv(std::string_view body);
std::string csv_escape(std::string_view field);

}  // namespace nuclib::text
