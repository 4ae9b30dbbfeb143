#include "bam/workbook.hpp"

#include "bam/error.hpp"
#include "bam/names.hpp"
#include "bam/text.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace bam {

const DefinedName* WorkbookModel::find_name(std::string_view name) const {
  auto it = std::lower_bound(names.begin(), names.end(), name,
                             [](const DefinedName& d, std::string_view n) { return d.name < n; });
  if (it != names.end() && it->name == name) return &*it;
  return nullptr;
}

std::string column_letters(std::size_t column) {
  std::string out;
  ++column;
  while (column > 0) {
    auto rem = (column - 1) % 26;
    out.insert(out.begin(), static_cast<char>('A' + rem));
    column = (column - 1) / 26;
  }
  return out;
}

namespace {

constexpr std::size_t kMaxSheetName = 31;

std::string sanitize_sheet_name(std::string_view raw) {
  std::string out;
  for (char c : raw) out += std::string_view("[]:*?/\\").find(c) == std::string_view::npos ? c : '_';
  while (!out.empty() && out.front() == '\'') out.erase(out.begin());
  while (!out.empty() && out.back() == '\'') out.pop_back();
  if (out.empty()) out = "Report";
  return out;
}

// Truncates on a UTF-8 boundary.
std::string truncate_utf8(std::string s, std::size_t limit) {
  if (s.size() <= limit) return s;
  s.resize(limit);
  while (!s.empty() && (static_cast<unsigned char>(s.back()) & 0xC0) == 0x80) s.pop_back();
  if (!s.empty() && (static_cast<unsigned char>(s.back()) & 0x80)) s.pop_back();
  return s;
}

class SheetNames {
 public:
  std::string claim(std::string_view raw) {
    auto base = sanitize_sheet_name(raw);
    auto candidate = truncate_utf8(base, kMaxSheetName);
    for (int n = 2; !taken_.insert(text::to_lower(candidate)).second; ++n) {
      auto suffix = " (" + std::to_string(n) + ")";
      candidate = truncate_utf8(base, kMaxSheetName - suffix.size()) + suffix;
    }
    return candidate;
  }

 private:
  std::set<std::string> taken_;
};

bool is_ratio(const Expr& body) {
  const Expr* e = &body;
  while (e->kind == Expr::Kind::Paren) e = &e->inner();
  return e->kind == Expr::Kind::Binary && e->op == BinaryOperator::Divide;
}

std::string period_heading(PeriodUnit unit) {
  switch (unit) {
    case PeriodUnit::Year: return "Years";
    case PeriodUnit::Quarter: return "Quarters";
    case PeriodUnit::Month: return "Months";
  }
  return "Periods";
}

class WorkbookBuilder {
 public:
  WorkbookBuilder(const InstanceGrid& grid, const SemanticModel& model, const StyleConfig& style,
                  const WorkbookOptions& options)
      : grid_(grid), model_(model), style_(style), options_(options),
        periods_(static_cast<std::size_t>(model.document.time_frame.period_count)) {}

  WorkbookModel build() {
    wb_.formats = {
        {"default", std::nullopt, "", false},
        {"header", std::nullopt, "", style_.bold_headers},
        {"label", std::nullopt, "", false},
        {"input", style_.input_fill, style_.number_format, false},
        {"calculated", std::nullopt, style_.number_format, false},
        {"ratio", std::nullopt, style_.ratio_format, false},
    };
    assign_names();
    build_assumptions();
    for (const auto& report : grid_.reports) build_report(report);
    std::sort(wb_.names.begin(), wb_.names.end(),
              [](const DefinedName& a, const DefinedName& b) { return a.name < b.name; });
    return std::move(wb_);
  }

 private:
  void assign_names() {
    names_.resize(model_.variables.size());
    for (std::size_t v = 0; v < model_.variables.size(); ++v) {
      const auto& layout = grid_.layout_of(v);
      for (std::size_t r = 0; r < layout.data_row_count(); ++r)
        names_[v].push_back(mangle_name(model_.variables[v].name, layout.data_row(r).path, taken_));
    }
  }

  Sheet& new_sheet(std::string_view name) {
    Sheet sheet;
    sheet.name = sheet_names_.claim(name);
    sheet.column_count = 1 + periods_;
    sheet.protect = style_.locked_calculated;
    sheet.column_widths.push_back(style_.label_column_width);
    sheet.column_widths.resize(sheet.column_count, style_.period_column_width);
    wb_.sheets.push_back(std::move(sheet));
    auto& s = wb_.sheets.back();

    const auto& tf = model_.document.time_frame;
    auto& heading = add_row(s, 0);
    heading[1] = text_cell(period_heading(tf.unit), kFormatHeader);
    auto& labels = add_row(s, 0);
    auto& indices = add_row(s, 0);
    for (std::size_t p = 0; p < periods_; ++p) {
      labels[1 + p] = text_cell(tf.period_label(static_cast<int>(p)), kFormatHeader);
      indices[1 + p] = number_cell(static_cast<double>(p), kFormatHeader, style_.locked_calculated);
    }
    return s;
  }

  std::vector<Cell>& add_row(Sheet& sheet, int level) {
    sheet.rows.emplace_back(sheet.column_count);
    sheet.outline.push_back(level);
    return sheet.rows.back();
  }

  Cell text_cell(std::string value, std::size_t format) const {
    Cell c;
    c.kind = Cell::Kind::Text;
    c.text = std::move(value);
    c.format = format;
    c.locked = style_.locked_calculated;
    return c;
  }

  static Cell number_cell(double value, std::size_t format, bool locked) {
    Cell c;
    c.kind = Cell::Kind::Number;
    c.number = value;
    c.format = format;
    c.locked = locked;
    return c;
  }

  Cell formula_cell(std::string formula, std::size_t format) const {
    Cell c;
    c.kind = Cell::Kind::Formula;
    c.text = std::move(formula);
    c.format = format;
    c.locked = style_.locked_calculated;
    return c;
  }

  void define(std::size_t v, std::size_t data_row, std::size_t sheet_index, std::size_t row) {
    wb_.names.push_back({names_[v][data_row], sheet_index, row, 1, periods_});
  }

  std::string sum_formula(std::size_t v, const CategoryRow& row) const {
    std::string out;
    for (auto leaf : row.leaves) out += (out.empty() ? "" : " + ") + names_[v][leaf];
    return out;
  }

  std::string translate(const Expr& e, std::size_t data_row) const {
    switch (e.kind) {
      case Expr::Kind::Variable: return names_[model_.variables.at(e.name)][data_row];
      case Expr::Kind::Number: return text::format_number(e.value);
      case Expr::Kind::Binary:
        return translate(e.lhs(), data_row) + ' ' + operator_symbol(e.op) + ' ' + translate(e.rhs(), data_row);
      case Expr::Kind::Paren: return '(' + translate(e.inner(), data_row) + ')';
    }
    return {};
  }

  // Emits the category label row for `row` when the layout has a breakdown.
  void label_row(Sheet& sheet, const RowLayout& layout, const CategoryRow& row) {
    if (layout.breakdown.empty()) return;
    auto& cells = add_row(sheet, row.level);
    cells[0] = text_cell(row.label, kFormatLabel);
  }

  int variable_level(const RowLayout& layout, const CategoryRow& row) const {
    return layout.breakdown.empty() ? 0 : row.level + 1;
  }

  void build_assumptions() {
    new_sheet(style_.assumptions_sheet_name);
    const auto sheet_index = wb_.sheets.size() - 1;

    std::vector<std::size_t> layout_order;
    std::map<std::size_t, std::vector<std::size_t>> inputs_by_layout;
    for (auto v : model_.variables.inputs()) {
      auto l = grid_.variable_layout[v];
      if (!inputs_by_layout.contains(l)) layout_order.push_back(l);
      inputs_by_layout[l].push_back(v);
    }

    for (auto l : layout_order) {
      const auto& layout = grid_.layouts[l];
      for (const auto& row : layout.rows) {
        label_row(wb_.sheets[sheet_index], layout, row);
        if (!row.is_data()) continue;
        for (auto v : inputs_by_layout[l]) {
          auto& sheet = wb_.sheets[sheet_index];
          auto& cells = add_row(sheet, variable_level(layout, row));
          cells[0] = text_cell(model_.variables[v].name, kFormatLabel);
          for (std::size_t p = 0; p < periods_; ++p) {
            if (row.kind == RowKind::Leaf) {
              Cell c;
              c.format = kFormatInput;
              c.locked = false;
              Instance at{v, row.data_index, p};
              if (options_.seed && options_.seed->get(at)) {
                c.kind = Cell::Kind::Number;
                c.number = *options_.seed->get(at);
              }
              cells[1 + p] = c;
            } else {
              cells[1 + p] = formula_cell(sum_formula(v, row), kFormatCalculated);
            }
          }
          define(v, row.data_index, sheet_index, sheet.rows.size() - 1);
        }
      }
    }
  }

  void build_report(const ReportGrid& report) {
    new_sheet(model_.document.reports[report.report].name);
    const auto sheet_index = wb_.sheets.size() - 1;
    const auto& layout = grid_.layouts[report.layout];

    for (const auto& row : layout.rows) {
      label_row(wb_.sheets[sheet_index], layout, row);
      if (!row.is_data()) continue;
      for (auto v : report.targets) {
        const auto& var = model_.variables[v];
        auto& sheet = wb_.sheets[sheet_index];
        auto& cells = add_row(sheet, variable_level(layout, row));
        cells[0] = text_cell(var.name, kFormatLabel);
        auto format = is_ratio(var.definition->body) ? kFormatRatio : kFormatCalculated;

        std::string formula;
        const bool home = var.home_report == report.report;
        if (!home)
          formula = names_[v][row.data_index];
        else if (row.kind == RowKind::Leaf || options_.rollup == RollupMode::Recompute)
          formula = translate(var.definition->body, row.data_index);
        else
          formula = sum_formula(v, row);

        for (std::size_t p = 0; p < periods_; ++p) cells[1 + p] = formula_cell(formula, format);
        if (home) define(v, row.data_index, sheet_index, sheet.rows.size() - 1);
      }
    }
  }

  const InstanceGrid& grid_;
  const SemanticModel& model_;
  const StyleConfig& style_;
  const WorkbookOptions& options_;
  const std::size_t periods_;
  WorkbookModel wb_;
  NameTable taken_;
  SheetNames sheet_names_;
  std::vector<std::vector<std::string>> names_;  // [variable][data row]
};

[[noreturn]] void violation(const std::string& msg) { throw Error(ErrorKind::InvariantViolation, msg); }

}  // namespace

WorkbookModel build_workbook(const InstanceGrid& grid, const SemanticModel& model, const StyleConfig& style,
                             const WorkbookOptions& options) {
  return WorkbookBuilder(grid, model, style, options).build();
}

void validate(const WorkbookModel& wb) {
  NameTable seen;
  for (std::size_t i = 0; i < wb.names.size(); ++i) {
    const auto& n = wb.names[i];
    if (!is_valid_defined_name(n.name)) violation("invalid defined name '" + n.name + "'");
    if (!seen.insert(n.name)) violation("duplicate defined name '" + n.name + "'");
    if (i > 0 && !(wb.names[i - 1].name < n.name)) violation("defined names are not sorted");
    if (n.sheet >= wb.sheets.size()) violation("name '" + n.name + "' refers to a missing sheet");
    const auto& sheet = wb.sheets[n.sheet];
    if (n.row >= sheet.rows.size() || n.first_column > n.last_column || n.last_column >= sheet.column_count)
      violation("name '" + n.name + "' refers outside its sheet");
  }
  std::set<std::string> sheet_names;
  for (const auto& sheet : wb.sheets) {
    if (sheet.name.empty() || sheet.name.size() > kMaxSheetName) violation("invalid sheet name '" + sheet.name + "'");
    if (!sheet_names.insert(text::to_lower(sheet.name)).second) violation("duplicate sheet name '" + sheet.name + "'");
    if (sheet.outline.size() != sheet.rows.size()) violation("outline levels missing on sheet '" + sheet.name + "'");
    for (const auto& row : sheet.rows) {
      if (row.size() != sheet.column_count) violation("ragged row on sheet '" + sheet.name + "'");
      for (const auto& cell : row) {
        if (cell.format >= wb.formats.size()) violation("cell refers to a missing format");
        if (cell.kind != Cell::Kind::Formula) continue;
        if (auto a1 = find_a1_tokens(cell.text); !a1.empty())
          violation("formula '" + cell.text + "' contains cell reference '" + a1.front() + "'");
        for (const auto& id : formula_identifiers(cell.text))
          if (!wb.find_name(id)) violation("formula '" + cell.text + "' uses undefined name '" + id + "'");
      }
    }
  }
}

}  // namespace bam
