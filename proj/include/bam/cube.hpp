#pragma once

#include "bam/model.hpp"

#include <compare>
#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace bam {

// UNDEFINED is stored as a quiet NaN; inputs can never be NaN because the
// CSV reader rejects non-finite numbers.
inline constexpr double kUndefined = std::numeric_limits<double>::quiet_NaN();

struct Instance {
  std::size_t variable = 0;
  std::size_t row = 0;  // data_index within the variable's RowLayout
  std::size_t period = 0;

  friend auto operator<=>(const Instance&, const Instance&) = default;
};

// Dense (variable, data row, period) storage with a presence flag per
// instance. Shape comes from an InstanceGrid.
class ValueCube {
 public:
  ValueCube() = default;
  explicit ValueCube(const InstanceGrid& grid);

  std::size_t variable_count() const noexcept { return rows_.size(); }
  std::size_t row_count(std::size_t variable) const { return rows_[variable]; }
  std::size_t period_count() const noexcept { return periods_; }

  bool contains(Instance at) const { return present_[index(at)] != 0; }
  bool is_undefined(Instance at) const;
  // nullopt when absent or UNDEFINED.
  std::optional<double> get(Instance at) const;
  double raw(Instance at) const { return values_[index(at)]; }

  void set(Instance at, double value);
  void erase(Instance at);

  // Number of present instances.
  std::size_t size() const;

  // Bitwise comparison of values and presence flags (NaN == NaN).
  bool identical(const ValueCube& other) const;

  std::size_t index(Instance at) const { return offset_[at.variable] + at.row * periods_ + at.period; }
  std::size_t offset(std::size_t variable) const { return offset_[variable]; }

  std::span<double> values() noexcept { return values_; }
  std::span<const double> values() const noexcept { return values_; }
  std::span<unsigned char> presence() noexcept { return present_; }
  std::span<const unsigned char> presence() const noexcept { return present_; }

 private:
  std::vector<std::size_t> offset_;
  std::vector<std::size_t> rows_;
  std::size_t periods_ = 0;
  std::vector<double> values_;
  std::vector<unsigned char> present_;
};

// "Turnover [European Union;United Kingdom] 2005"
std::string describe(const SemanticModel& model, const InstanceGrid& grid, Instance at);

struct Observation {
  Instance at;
  std::optional<double> value;  // nullopt for an empty (UNDEFINED) cell
  int line = 0;
};

struct ReadOptions {
  bool inputs_only = true;       // reject calculated variables (VariableNotInput)
  bool leaves_only = true;       // reject roll-up paths (UnknownCategoryPath)
  bool allow_empty_value = false;
};

// Reads `variable,category,period,value` rows. The period column accepts
// the period label ("2005", "Q1 2005") or, failing that, a 0-based index.
std::vector<Observation> read_observations(std::string_view csv_text, const SemanticModel& model,
                                           const InstanceGrid& grid, const ReadOptions& options);

// Period given as its label ("2005", "Q1 2005") or, failing that, a 0-based
// index. Throws PeriodOutOfRange.
std::size_t resolve_period(const TimeFrame& tf, std::string_view field, int line = 0);

// Input data for evaluate(). Throws UnknownVariable, VariableNotInput,
// UnknownCategoryPath, PeriodOutOfRange, MalformedNumber, MalformedCsv.
ValueCube load_inputs(std::string_view csv_text, const SemanticModel& model, const InstanceGrid& grid);

// Every present instance in variable-table, row-display and period order,
// in the load_inputs schema. UNDEFINED values are written as empty fields.
std::string write_cube_csv(const SemanticModel& model, const InstanceGrid& grid, const ValueCube& cube);

inline constexpr std::string_view kCsvHeader = "variable,category,period,value";

}  // namespace bam
