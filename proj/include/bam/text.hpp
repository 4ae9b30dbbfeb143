#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace bam::text {

// Maps en dash, em dash and minus sign to '-', multiplication sign to '*'
// and division sign to '/'. Other bytes pass through unchanged.
std::string normalize_operators(std::string_view s);

std::string_view trim(std::string_view s) noexcept;

// Trims and collapses every run of blanks to a single space.
std::string collapse_spaces(std::string_view s);

// Comparison key for identifiers: collapsed spacing, ASCII lowercase.
std::string name_key(std::string_view s);

std::string to_lower(std::string_view s);

bool iequals(std::string_view a, std::string_view b) noexcept;
bool istarts_with(std::string_view s, std::string_view prefix) noexcept;

std::vector<std::string_view> split(std::string_view s, char sep);

// Splits a document into lines, dropping '\r' before '\n'.
std::vector<std::string_view> split_lines(std::string_view s);

// Decimal with optional sign, optional decimal point and optional
// comma thousands separators ("12,605.5"). Exponents, inf and nan are
// rejected.
std::optional<double> parse_decimal(std::string_view s);

std::optional<long long> parse_integer(std::string_view s);

// Shortest text that reads back to the same double.
std::string format_number(double value);

}  // namespace bam::text
