#include "bam/text.hpp"

#include <cctype>
#include <charconv>
#include <cmath>

namespace bam::text {

namespace {

bool is_blank(char c) noexcept { return c == ' ' || c == '\t' || c == '\v' || c == '\f' || c == '\r'; }

char lower(char c) noexcept { return static_cast<char>(std::tolower(static_cast<unsigned char>(c))); }

bool all_digits(std::string_view s) noexcept {
  if (s.empty()) return false;
  for (char c : s)
    if (c < '0' || c > '9') return false;
  return true;
}

}  // namespace

std::string normalize_operators(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    auto rest = s.substr(i);
    if (rest.starts_with("\xE2\x80\x93") || rest.starts_with("\xE2\x80\x94") ||
        rest.starts_with("\xE2\x88\x92")) {
      out += '-';
      i += 2;
    } else if (rest.starts_with("\xC3\x97")) {
      out += '*';
      i += 1;
    } else if (rest.starts_with("\xC3\xB7")) {
      out += '/';
      i += 1;
    } else {
      out += s[i];
    }
  }
  return out;
}

std::string_view trim(std::string_view s) noexcept {
  while (!s.empty() && is_blank(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_blank(s.back())) s.remove_suffix(1);
  return s;
}

std::string collapse_spaces(std::string_view s) {
  s = trim(s);
  std::string out;
  out.reserve(s.size());
  bool pending = false;
  for (char c : s) {
    if (is_blank(c)) {
      pending = true;
      continue;
    }
    if (pending) out += ' ';
    pending = false;
    out += c;
  }
  return out;
}

std::string to_lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = lower(c);
  return out;
}

std::string name_key(std::string_view s) { return to_lower(collapse_spaces(s)); }

bool iequals(std::string_view a, std::string_view b) noexcept {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (lower(a[i]) != lower(b[i])) return false;
  return true;
}

bool istarts_with(std::string_view s, std::string_view prefix) noexcept {
  return s.size() >= prefix.size() && iequals(s.substr(0, prefix.size()), prefix);
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    auto pos = s.find(sep, start);
    if (pos == std::string_view::npos) {
      out.push_back(s.substr(start));
      return out;
    }
    out.push_back(s.substr(start, pos - start));
    start = pos + 1;
  }
}

std::vector<std::string_view> split_lines(std::string_view s) {
  auto lines = split(s, '\n');
  for (auto& line : lines)
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
  if (!lines.empty() && lines.back().empty()) lines.pop_back();
  return lines;
}

std::optional<double> parse_decimal(std::string_view s) {
  s = trim(s);
  std::string digits;
  std::size_t i = 0;
  if (i < s.size() && (s[i] == '+' || s[i] == '-')) {
    if (s[i] == '-') digits += '-';
    ++i;
  }
  auto body = s.substr(i);
  auto dot = body.find('.');
  auto whole = body.substr(0, dot);
  auto frac = dot == std::string_view::npos ? std::string_view{} : body.substr(dot + 1);
  if (dot != std::string_view::npos && !frac.empty() && !all_digits(frac)) return std::nullopt;
  if (whole.empty() && frac.empty()) return std::nullopt;

  if (whole.find(',') != std::string_view::npos) {
    auto groups = split(whole, ',');
    if (groups.front().empty() || groups.front().size() > 3 || !all_digits(groups.front()))
      return std::nullopt;
    for (std::size_t g = 1; g < groups.size(); ++g)
      if (groups[g].size() != 3 || !all_digits(groups[g])) return std::nullopt;
    for (auto g : groups) digits += g;
  } else {
    if (!whole.empty() && !all_digits(whole)) return std::nullopt;
    digits += whole.empty() ? std::string_view("0") : whole;
  }
  if (!frac.empty()) {
    digits += '.';
    digits += frac;
  }

  double value = 0.0;
  auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), value);
  if (ec != std::errc{} || ptr != digits.data() + digits.size() || !std::isfinite(value))
    return std::nullopt;
  return value == 0.0 ? 0.0 : value;
}

std::optional<long long> parse_integer(std::string_view s) {
  s = trim(s);
  long long value = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size()) return std::nullopt;
  return value;
}

std::string format_number(double value) {
  if (value == 0.0) return "0";
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, ptr);
}

}  // namespace bam::text
