#pragma once

// Shared test helpers. Nothing here calls the evaluators or the workbook
// builder; the oracles re-derive values from the parsed document alone.

#include "bam/document.hpp"
#include "bam/eval.hpp"
#include "bam/model.hpp"
#include "bam/workbook.hpp"

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace bam {
// gtest diagnostics
void PrintTo(const ModelDocument& doc, std::ostream* os);
void PrintTo(const Expr& expr, std::ostream* os);
}  // namespace bam

namespace bam::testing {

std::string data_path(std::string_view name);
std::string read_file(const std::string& path);
std::string fixture(std::string_view name);

struct Pipeline {
  SemanticModel model;
  InstanceGrid grid;
};
Pipeline load(std::string_view model_text);

// ---------------------------------------------------------------------------
// Random models

struct FuzzOptions {
  bool additive_only = false;  // only + and -, no constants
  int max_hierarchies = 2;
  int max_reports = 3;
  int max_formulas = 5;
};

std::string random_model(std::uint64_t seed, const FuzzOptions& options = {});

// Integer-valued inputs for a random subset of leaf instances.
std::string random_inputs(const SemanticModel& model, const InstanceGrid& grid, std::uint64_t seed,
                          double omit_probability = 0.1);

// ---------------------------------------------------------------------------
// Recursive tree-walk oracle over the document

class TreeOracle {
 public:
  TreeOracle(const ModelDocument& doc, std::string_view inputs_csv, RollupMode mode);

  // `path` names one node (or "All <title>") per breakdown hierarchy.
  double value(std::string_view variable, const std::vector<std::string>& path, int period);

 private:
  std::vector<std::vector<std::string>> leaf_paths(const std::vector<std::size_t>& breakdown,
                                                   const std::vector<std::string>& path) const;
  double leaf_value(const std::string& key, const std::vector<std::string>& path, int period);
  double eval(const Expr& e, const std::vector<std::string>& path, int period);

  const ModelDocument& doc_;
  RollupMode mode_;
  std::map<std::string, const Expr*> formulas_;
  std::map<std::string, std::vector<std::size_t>> breakdown_;
  std::map<std::string, double> inputs_;
  std::map<std::string, double> memo_;
};

double oracle_apply(BinaryOperator op, double a, double b);

// ---------------------------------------------------------------------------
// Independent interpreter over defined names and cell formulas

class SheetInterpreter {
 public:
  explicit SheetInterpreter(const WorkbookModel& wb);
  // Value of the name's region in one column (implicit intersection).
  double name_value(std::string_view name, std::size_t column);
  double cell_value(std::size_t sheet, std::size_t row, std::size_t column);

 private:
  const WorkbookModel& wb_;
  std::map<std::string, const DefinedName*> names_;
  std::map<std::tuple<std::size_t, std::size_t, std::size_t>, double> memo_;
  std::map<std::tuple<std::size_t, std::size_t, std::size_t>, bool> active_;
};

// Name each (variable, data row) receives, in the builder's allocation order.
std::vector<std::vector<std::string>> expected_names(const SemanticModel& model, const InstanceGrid& grid);

// ---------------------------------------------------------------------------
// Archive read-back

std::map<std::string, std::string> unzip(const std::string& archive);

// Rebuilds the sheets, cells and defined names of an xlsx archive.
WorkbookModel read_xlsx(const std::string& archive);

// A1-style tokens found by a scan that shares no code with the library.
std::vector<std::string> scan_a1(std::string_view formula);

}  // namespace bam::testing
