#include "bam/names.hpp"

#include "bam/error.hpp"
#include "bam/text.hpp"

#include <cctype>

namespace bam {

namespace {

bool is_alpha(char c) noexcept { return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z'); }
bool is_digit(char c) noexcept { return c >= '0' && c <= '9'; }
bool is_alnum(char c) noexcept { return is_alpha(c) || is_digit(c); }
char upper(char c) noexcept { return static_cast<char>(std::toupper(static_cast<unsigned char>(c))); }

constexpr long kMaxColumn = 16384;   // XFD
constexpr long kMaxRow = 1048576;
constexpr std::size_t kMaxNameLength = 255;
constexpr int kMaxSuffix = 1000000;

// Digits only, no leading zero, value in [1, limit].
bool index_in_range(std::string_view digits, long limit) noexcept {
  if (digits.empty() || digits.size() > 7 || digits.front() == '0') return false;
  long v = 0;
  for (char c : digits) {
    if (!is_digit(c)) return false;
    v = v * 10 + (c - '0');
  }
  return v >= 1 && v <= limit;
}

std::string mangle_segment(std::string_view s) {
  std::string out;
  bool gap = false;
  for (char c : s) {
    if (is_alnum(c)) {
      if (gap) out += '_';
      gap = false;
      out += c;
    } else {
      gap = true;
    }
  }
  if (gap) out += '_';
  return out;
}

}  // namespace

bool is_a1_address(std::string_view token) noexcept {
  if (token.starts_with('$')) token.remove_prefix(1);
  std::size_t letters = 0;
  while (letters < token.size() && is_alpha(token[letters])) ++letters;
  if (letters == 0 || letters > 3) return false;
  long column = 0;
  for (std::size_t i = 0; i < letters; ++i) column = column * 26 + (upper(token[i]) - 'A' + 1);
  if (column > kMaxColumn) return false;
  auto rest = token.substr(letters);
  if (rest.starts_with('$')) rest.remove_prefix(1);
  return index_in_range(rest, kMaxRow);
}

bool is_cell_address(std::string_view token) noexcept {
  if (is_a1_address(token)) return true;
  // R1C1: R[n]C[n], R[n], C[n]
  std::size_t i = 0;
  auto digits = [&] {
    auto start = i;
    while (i < token.size() && is_digit(token[i])) ++i;
    return token.substr(start, i - start);
  };
  bool any = false;
  if (i < token.size() && upper(token[i]) == 'R') {
    ++i;
    auto d = digits();
    if (!d.empty() && !index_in_range(d, kMaxRow)) return false;
    any = true;
  }
  if (i < token.size() && upper(token[i]) == 'C') {
    ++i;
    auto d = digits();
    if (!d.empty() && !index_in_range(d, kMaxColumn)) return false;
    any = true;
  }
  return any && i == token.size();
}

std::vector<std::string> find_a1_tokens(std::string_view formula) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < formula.size()) {
    char c = formula[i];
    if (!(is_alnum(c) || c == '_' || c == '.' || c == '$')) {
      ++i;
      continue;
    }
    auto start = i;
    while (i < formula.size() && (is_alnum(formula[i]) || formula[i] == '_' || formula[i] == '.' || formula[i] == '$'))
      ++i;
    auto token = formula.substr(start, i - start);
    if (is_a1_address(token)) out.emplace_back(token);
  }
  return out;
}

std::vector<std::string> formula_identifiers(std::string_view formula) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < formula.size()) {
    char c = formula[i];
    if (is_digit(c) || c == '.') {
      // number literal, possibly with an exponent
      while (i < formula.size() && (is_alnum(formula[i]) || formula[i] == '.')) ++i;
      continue;
    }
    if (is_alpha(c) || c == '_') {
      auto start = i;
      while (i < formula.size() && (is_alnum(formula[i]) || formula[i] == '_' || formula[i] == '.')) ++i;
      out.emplace_back(formula.substr(start, i - start));
      continue;
    }
    ++i;
  }
  return out;
}

bool is_valid_defined_name(std::string_view name) noexcept {
  if (name.empty() || name.size() > kMaxNameLength) return false;
  if (!(is_alpha(name.front()) || name.front() == '_')) return false;
  for (char c : name)
    if (!(is_alnum(c) || c == '_')) return false;
  if (text::iequals(name, "TRUE") || text::iequals(name, "FALSE")) return false;
  return !is_cell_address(name);
}

bool NameTable::contains(std::string_view name) const { return taken_.contains(text::to_lower(name)); }

bool NameTable::insert(std::string_view name) { return taken_.insert(text::to_lower(name)).second; }

std::string mangle_name(std::string_view variable, const std::vector<std::string>& category_path, NameTable& taken) {
  std::string base = mangle_segment(variable);
  for (const auto& segment : category_path) base += "__" + mangle_segment(segment);
  if (base.empty() || is_digit(base.front())) base.insert(base.begin(), '_');
  if (base.size() > kMaxNameLength - 10) base.resize(kMaxNameLength - 10);

  if (is_valid_defined_name(base) && taken.insert(base)) return base;
  for (int n = 1; n <= kMaxSuffix; ++n) {
    auto candidate = base + "_v" + std::to_string(n);
    if (is_valid_defined_name(candidate) && taken.insert(candidate)) return candidate;
  }
  throw Error(ErrorKind::NameCapacityExceeded, "cannot find a free defined name for '" + std::string(variable) + "'");
}

}  // namespace bam
