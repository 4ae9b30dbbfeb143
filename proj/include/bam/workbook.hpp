#pragma once

#include "bam/cube.hpp"
#include "bam/eval.hpp"
#include "bam/model.hpp"
#include "bam/style.hpp"

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace bam {

// Backend-neutral workbook. Formulas are stored without the leading '='
// and reference cells exclusively through defined names.

struct CellFormat {
  std::string name;
  std::optional<std::string> fill;  // RRGGBB
  std::string number_format;        // empty = General
  bool bold = false;

  bool operator==(const CellFormat&) const = default;
};

struct Cell {
  enum class Kind { Blank, Number, Text, Formula };

  Kind kind = Kind::Blank;
  double number = 0;
  std::string text;  // Text content or formula
  std::size_t format = 0;
  bool locked = true;

  static Cell blank() { return {}; }
  bool operator==(const Cell&) const = default;
};

struct Sheet {
  std::string name;
  std::size_t column_count = 0;
  std::vector<std::vector<Cell>> rows;  // each row has column_count cells
  std::vector<int> outline;             // per row
  std::vector<double> column_widths;
  bool protect = true;

  bool operator==(const Sheet&) const = default;
};

// A defined name covering one row segment [first_column, last_column].
struct DefinedName {
  std::string name;
  std::size_t sheet = 0;
  std::size_t row = 0;
  std::size_t first_column = 0;
  std::size_t last_column = 0;

  bool operator==(const DefinedName&) const = default;
};

struct WorkbookModel {
  std::vector<CellFormat> formats;
  std::vector<Sheet> sheets;
  std::vector<DefinedName> names;  // sorted by name

  const DefinedName* find_name(std::string_view name) const;
  bool operator==(const WorkbookModel&) const = default;
};

// Well-known entries of WorkbookModel::formats.
enum FormatSlot : std::size_t {
  kFormatDefault,
  kFormatHeader,
  kFormatLabel,
  kFormatInput,
  kFormatCalculated,
  kFormatRatio,
};

struct WorkbookOptions {
  RollupMode rollup = RollupMode::Recompute;
  // Values written as literals into the input cells (generate --data).
  const ValueCube* seed = nullptr;
};

// Throws NameCapacityExceeded.
WorkbookModel build_workbook(const InstanceGrid& grid, const SemanticModel& model, const StyleConfig& style,
                             const WorkbookOptions& options = {});

// Throws InvariantViolation naming the first broken rule: A1 tokens in a
// formula, undefined or invalid names, duplicate names, out-of-range
// regions or cells.
void validate(const WorkbookModel& wb);

// Canonical text serialization (.bamwb). Calls validate() first.
std::string render_portable(const WorkbookModel& wb);

// Writes an Office Open XML workbook. Calls validate() first; throws Io.
void render_xlsx(const WorkbookModel& wb, const std::string& path);
// Same archive as bytes.
std::string xlsx_bytes(const WorkbookModel& wb);

std::string column_letters(std::size_t column);  // 0 -> "A"

}  // namespace bam
