#pragma once

#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

namespace bam {

// True for A1-style addresses within sheet bounds ("C38", "$AB$12",
// "xfd1048576").
bool is_a1_address(std::string_view token) noexcept;

// A1 addresses plus the R1C1 forms spreadsheet applications also refuse
// as defined names ("R", "C", "R2C3", "RC4").
bool is_cell_address(std::string_view token) noexcept;

// Every A1-address token in a formula. Tokens are maximal runs of
// letters, digits, '_', '.' and '$'; ranges split at ':'.
std::vector<std::string> find_a1_tokens(std::string_view formula);

// Identifiers (defined-name references) appearing in a formula.
std::vector<std::string> formula_identifiers(std::string_view formula);

// Syntactic validity of a defined name (no uniqueness check).
bool is_valid_defined_name(std::string_view name) noexcept;

// Defined names handed out so far; comparisons ignore ASCII case, as
// spreadsheet applications do.
class NameTable {
 public:
  bool contains(std::string_view name) const;
  std::size_t size() const noexcept { return taken_.size(); }
  // Records `name`; returns false if it was already taken.
  bool insert(std::string_view name);

 private:
  std::unordered_set<std::string> taken_;
};

// Deterministic name for one (variable, category row): runs of characters
// other than ASCII letters and digits become '_', each path segment is
// appended after "__", a leading digit gets a leading '_'. Names that read
// as cell addresses or are already taken get "_v<n>" with the smallest
// free n. The result is recorded in `taken`. Throws NameCapacityExceeded.
std::string mangle_name(std::string_view variable, const std::vector<std::string>& category_path, NameTable& taken);

}  // namespace bam
