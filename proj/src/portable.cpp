#include "bam/text.hpp"
#include "bam/workbook.hpp"

#include "json.hpp"

namespace bam {

namespace {

std::string quoted(const std::string& s) { return nlohmann::json(s).dump(-1, ' ', false, nlohmann::json::error_handler_t::replace); }

const char* kind_word(Cell::Kind kind) {
  switch (kind) {
    case Cell::Kind::Blank: return "blank";
    case Cell::Kind::Number: return "number";
    case Cell::Kind::Text: return "text";
    case Cell::Kind::Formula: return "formula";
  }
  return "blank";
}

}  // namespace

// Layout (one record per line, fields in fixed order):
//
//   bamwb 1
//   format <index> <name> fill=<RRGGBB|none> number_format=<json> bold=<0|1>
//   sheet <index> <json name> columns=<n> rows=<n> protect=<0|1>
//   width <column> <value>
//   row <index> outline=<level>
//   cell <column> <kind> <value> format=<index> locked=<0|1>
//   name <json name> sheet=<index> row=<index> columns=<first>..<last>
//   end
//
// Blank unlocked or formatted cells are written; default blank cells are not.
std::string render_portable(const WorkbookModel& wb) {
  validate(wb);
  std::string out = "bamwb 1\n";
  for (std::size_t i = 0; i < wb.formats.size(); ++i) {
    const auto& f = wb.formats[i];
    out += "format " + std::to_string(i) + " " + f.name + " fill=" + f.fill.value_or("none") +
           " number_format=" + quoted(f.number_format) + " bold=" + (f.bold ? "1" : "0") + "\n";
  }
  for (std::size_t s = 0; s < wb.sheets.size(); ++s) {
    const auto& sheet = wb.sheets[s];
    out += "sheet " + std::to_string(s) + " " + quoted(sheet.name) + " columns=" + std::to_string(sheet.column_count) +
           " rows=" + std::to_string(sheet.rows.size()) + " protect=" + (sheet.protect ? "1" : "0") + "\n";
    for (std::size_t c = 0; c < sheet.column_widths.size(); ++c)
      out += "width " + std::to_string(c) + " " + text::format_number(sheet.column_widths[c]) + "\n";
    for (std::size_t r = 0; r < sheet.rows.size(); ++r) {
      out += "row " + std::to_string(r) + " outline=" + std::to_string(sheet.outline[r]) + "\n";
      for (std::size_t c = 0; c < sheet.rows[r].size(); ++c) {
        const auto& cell = sheet.rows[r][c];
        if (cell == Cell::blank()) continue;
        out += "cell " + std::to_string(c) + " " + kind_word(cell.kind);
        switch (cell.kind) {
          case Cell::Kind::Blank: out += " -"; break;
          case Cell::Kind::Number: out += " " + text::format_number(cell.number); break;
          case Cell::Kind::Text:
          case Cell::Kind::Formula: out += " " + quoted(cell.text); break;
        }
        out += " format=" + std::to_string(cell.format) + " locked=" + (cell.locked ? "1" : "0") + "\n";
      }
    }
  }
  for (const auto& n : wb.names)
    out += "name " + quoted(n.name) + " sheet=" + std::to_string(n.sheet) + " row=" + std::to_string(n.row) +
           " columns=" + std::to_string(n.first_column) + ".." + std::to_string(n.last_column) + "\n";
  out += "end\n";
  return out;
}

}  // namespace bam
