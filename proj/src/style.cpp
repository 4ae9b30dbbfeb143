#include "bam/style.hpp"

#include "bam/error.hpp"
#include "bam/text.hpp"

#include <cctype>

namespace bam {

namespace {

std::string parse_color(std::string_view value, int line) {
  if (value.starts_with('#')) value.remove_prefix(1);
  std::string out;
  for (char c : value) {
    if (!std::isxdigit(static_cast<unsigned char>(c))) break;
    out += static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  }
  if (out.size() != 6 || value.size() != 6)
    throw Error(ErrorKind::MalformedStyle, "colour must be 6 hex digits (RRGGBB), got '" + std::string(value) + "'", line);
  return out;
}

bool parse_bool(std::string_view value, int line) {
  auto v = text::to_lower(value);
  if (v == "true" || v == "yes" || v == "on" || v == "1") return true;
  if (v == "false" || v == "no" || v == "off" || v == "0") return false;
  throw Error(ErrorKind::MalformedStyle, "expected true or false, got '" + std::string(value) + "'", line);
}

double parse_width(std::string_view value, int line) {
  auto w = text::parse_decimal(value);
  if (!w || *w <= 0 || *w > 255)
    throw Error(ErrorKind::MalformedStyle, "column width must be in (0, 255], got '" + std::string(value) + "'", line);
  return *w;
}

std::string unquote(std::string_view value) {
  if (value.size() >= 2 && value.front() == '"' && value.back() == '"') value = value.substr(1, value.size() - 2);
  return std::string(value);
}

}  // namespace

StyleConfig parse_style(std::string_view text) {
  StyleConfig style;
  int number = 0;
  for (auto raw : text::split_lines(text)) {
    ++number;
    auto line = text::trim(raw);
    if (line.empty() || line.front() == '#') continue;
    auto eq = line.find('=');
    if (eq == std::string_view::npos) throw Error(ErrorKind::MalformedStyle, "expected 'key = value'", number);
    auto key = text::to_lower(text::trim(line.substr(0, eq)));
    auto value = unquote(text::trim(line.substr(eq + 1)));

    if (key == "input_fill") {
      style.input_fill = parse_color(value, number);
    } else if (key == "locked_calculated") {
      style.locked_calculated = parse_bool(value, number);
    } else if (key == "period_order") {
      if (text::to_lower(value) != "left_to_right")
        throw Error(ErrorKind::MalformedStyle, "period_order supports only left_to_right", number);
    } else if (key == "number_format") {
      if (value.empty()) throw Error(ErrorKind::MalformedStyle, "number_format is empty", number);
      style.number_format = value;
    } else if (key == "ratio_format") {
      if (value.empty()) throw Error(ErrorKind::MalformedStyle, "ratio_format is empty", number);
      style.ratio_format = value;
    } else if (key == "assumptions_sheet_name") {
      if (value.empty() || value.size() > 31 || value.find_first_of("[]:*?/\\'") != std::string::npos)
        throw Error(ErrorKind::MalformedStyle, "invalid sheet name '" + value + "'", number);
      style.assumptions_sheet_name = value;
    } else if (key == "label_column_width") {
      style.label_column_width = parse_width(value, number);
    } else if (key == "period_column_width") {
      style.period_column_width = parse_width(value, number);
    } else if (key == "bold_headers") {
      style.bold_headers = parse_bool(value, number);
    } else {
      throw Error(ErrorKind::MalformedStyle, "unknown key '" + key + "'", number);
    }
  }
  return style;
}

}  // namespace bam
