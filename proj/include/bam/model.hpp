#pragma once

#include "bam/document.hpp"

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace bam {

enum class VariableKind { Input, Calculated };

struct Variable {
  std::string key;   // normalized comparison key
  std::string name;  // first-seen spelling
  VariableKind kind = VariableKind::Input;
  std::optional<FormulaDef> definition;  // calculated only
  std::vector<std::size_t> reports;      // indices into ModelDocument::reports
  std::vector<std::size_t> breakdown;    // hierarchy indices shared by all its reports
  std::vector<std::size_t> dependencies; // referenced variables, first-reference order
  std::size_t home_report = 0;           // first report defining it (calculated only)

  bool is_input() const noexcept { return kind == VariableKind::Input; }
};

// Variables in order of first appearance in the document.
class VariableTable {
 public:
  std::size_t size() const noexcept { return variables_.size(); }
  const Variable& operator[](std::size_t i) const { return variables_[i]; }
  Variable& operator[](std::size_t i) { return variables_[i]; }
  auto begin() const { return variables_.begin(); }
  auto end() const { return variables_.end(); }

  std::optional<std::size_t> find(std::string_view name) const;
  // Throws UnknownVariable.
  std::size_t at(std::string_view name) const;
  std::size_t intern(std::string_view name);

  std::vector<std::size_t> inputs() const;
  std::vector<std::size_t> calculated() const;

 private:
  std::vector<Variable> variables_;
  std::unordered_map<std::string, std::size_t> index_;
};

struct DependencyGraph {
  // edges[v] = variables referenced by v's formula (empty for inputs)
  std::vector<std::vector<std::size_t>> edges;
  // every variable appears once; referenced variables come first
  std::vector<std::size_t> order;
};

struct SemanticModel {
  ModelDocument document;
  VariableTable variables;
  DependencyGraph graph;
  // resolved hierarchy indices per report
  std::vector<std::vector<std::size_t>> report_breakdowns;
};

// Resolves names, classifies variables and orders them topologically.
// Throws CyclicDependency, ConflictingDefinition, UnknownBreakdownTitle and
// InconsistentBreakdown.
SemanticModel analyze(ModelDocument doc);

// ---------------------------------------------------------------------------
// Category rows

enum class RowKind { Header, Leaf, Rollup, Grand };

struct CategoryRow {
  RowKind kind = RowKind::Leaf;
  std::string label;
  // Node names from the outermost hierarchy inward. Grand roll-ups use the
  // segment "All <title>".
  std::vector<std::string> path;
  int level = 0;  // outline depth
  // Data rows only: position among the layout's data rows, and the data
  // rows of the leaf combinations it aggregates (itself for a leaf).
  std::size_t data_index = 0;
  std::vector<std::size_t> leaves;

  bool is_data() const noexcept { return kind != RowKind::Header; }
};

// Row structure for one breakdown (ordered list of hierarchies).
struct RowLayout {
  std::vector<std::size_t> breakdown;
  std::vector<CategoryRow> rows;        // display order, headers included
  std::vector<std::size_t> data_rows;   // data_index -> index into rows
  std::size_t leaf_count = 0;

  std::size_t data_row_count() const noexcept { return data_rows.size(); }
  const CategoryRow& data_row(std::size_t data_index) const { return rows[data_rows[data_index]]; }
  // Data row whose path matches (case-insensitive, blanks collapsed).
  std::optional<std::size_t> find_data_row(const std::vector<std::string>& path) const;

  std::unordered_map<std::string, std::size_t> path_index;  // path key -> data_index
};

std::string join_path(const std::vector<std::string>& path);
std::vector<std::string> split_path(std::string_view joined);

struct ReportGrid {
  std::size_t report = 0;
  std::size_t layout = 0;
  std::vector<std::size_t> variables;  // every variable the report mentions
  std::vector<std::size_t> targets;    // variables defined in the report, declaration order
};

struct InstanceGrid {
  std::vector<RowLayout> layouts;
  std::vector<std::size_t> variable_layout;  // per variable
  std::vector<ReportGrid> reports;
  int period_count = 0;

  const RowLayout& layout_of(std::size_t variable) const { return layouts[variable_layout[variable]]; }
};

InstanceGrid expand(const SemanticModel& model);

}  // namespace bam
