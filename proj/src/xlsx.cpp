#include "bam/error.hpp"
#include "bam/text.hpp"
#include "bam/workbook.hpp"
#include "bam/zip.hpp"

#include <algorithm>
#include <fstream>
#include <map>

namespace bam {

namespace {

constexpr int kMaxOutlineLevel = 7;
constexpr std::string_view kXmlHeader = "<?xml version=\"1.0\" encoding=\"UTF-8\" standalone=\"yes\"?>\n";
constexpr std::string_view kMainNs = "http://schemas.openxmlformats.org/spreadsheetml/2006/main";
constexpr std::string_view kRelNs = "http://schemas.openxmlformats.org/officeDocument/2006/relationships";

std::string xml_escape(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default:
        // XML 1.0 forbids most control characters.
        if (static_cast<unsigned char>(c) < 0x20 && c != '\t' && c != '\n' && c != '\r') continue;
        out += c;
    }
  }
  return out;
}

std::string cell_ref(std::size_t row, std::size_t column) { return column_letters(column) + std::to_string(row + 1); }

std::string quote_sheet(std::string_view name) {
  std::string out = "'";
  for (char c : name) {
    if (c == '\'') out += '\'';
    out += c;
  }
  return out + "'";
}

// Maps (format, locked) pairs to cellXfs indices; index 0 is the default.
class StyleTable {
 public:
  explicit StyleTable(const WorkbookModel& wb) : wb_(wb) {
    xfs_.push_back({kFormatDefault, true});
    for (const auto& f : wb.formats)
      if (!f.number_format.empty() && !numfmt_.contains(f.number_format))
        numfmt_.emplace(f.number_format, 164 + static_cast<int>(numfmt_.size()));
    for (const auto& f : wb.formats)
      if (f.fill && !fill_.contains(*f.fill)) fill_.emplace(*f.fill, 2 + static_cast<int>(fill_.size()));
  }

  std::size_t xf(const Cell& cell) {
    std::pair key{cell.format, cell.locked};
    auto it = std::find(xfs_.begin(), xfs_.end(), key);
    if (it != xfs_.end()) return static_cast<std::size_t>(it - xfs_.begin());
    xfs_.push_back(key);
    return xfs_.size() - 1;
  }

  std::string xml() const {
    std::string out(kXmlHeader);
    out += "<styleSheet xmlns=\"" + std::string(kMainNs) + "\">";
    if (!numfmt_.empty()) {
      std::vector<std::pair<int, std::string>> sorted;
      for (const auto& [code, id] : numfmt_) sorted.emplace_back(id, code);
      std::sort(sorted.begin(), sorted.end());
      out += "<numFmts count=\"" + std::to_string(sorted.size()) + "\">";
      for (const auto& [id, code] : sorted)
        out += "<numFmt numFmtId=\"" + std::to_string(id) + "\" formatCode=\"" + xml_escape(code) + "\"/>";
      out += "</numFmts>";
    }
    out += "<fonts count=\"2\">"
           "<font><sz val=\"11\"/><name val=\"Calibri\"/><family val=\"2\"/></font>"
           "<font><b/><sz val=\"11\"/><name val=\"Calibri\"/><family val=\"2\"/></font>"
           "</fonts>";
    std::vector<std::pair<int, std::string>> fills;
    for (const auto& [rgb, id] : fill_) fills.emplace_back(id, rgb);
    std::sort(fills.begin(), fills.end());
    out += "<fills count=\"" + std::to_string(2 + fills.size()) + "\">";
    out += "<fill><patternFill patternType=\"none\"/></fill><fill><patternFill patternType=\"gray125\"/></fill>";
    for (const auto& [id, rgb] : fills)
      out += "<fill><patternFill patternType=\"solid\"><fgColor rgb=\"FF" + rgb +
             "\"/><bgColor indexed=\"64\"/></patternFill></fill>";
    out += "</fills>";
    out += "<borders count=\"1\"><border><left/><right/><top/><bottom/><diagonal/></border></borders>";
    out += "<cellStyleXfs count=\"1\"><xf numFmtId=\"0\" fontId=\"0\" fillId=\"0\" borderId=\"0\"/></cellStyleXfs>";
    out += "<cellXfs count=\"" + std::to_string(xfs_.size()) + "\">";
    for (const auto& [format_index, locked] : xfs_) {
      const auto& f = wb_.formats.at(format_index);
      int numfmt = f.number_format.empty() ? 0 : numfmt_.at(f.number_format);
      int font = f.bold ? 1 : 0;
      int fill = f.fill ? fill_.at(*f.fill) : 0;
      out += "<xf numFmtId=\"" + std::to_string(numfmt) + "\" fontId=\"" + std::to_string(font) + "\" fillId=\"" +
             std::to_string(fill) + "\" borderId=\"0\" xfId=\"0\"";
      if (numfmt) out += " applyNumberFormat=\"1\"";
      if (font) out += " applyFont=\"1\"";
      if (fill) out += " applyFill=\"1\"";
      if (locked) {
        out += "/>";
      } else {
        out += " applyProtection=\"1\"><protection locked=\"0\"/></xf>";
      }
    }
    out += "</cellXfs>";
    out += "<cellStyles count=\"1\"><cellStyle name=\"Normal\" xfId=\"0\" builtinId=\"0\"/></cellStyles>";
    out += "</styleSheet>";
    return out;
  }

 private:
  const WorkbookModel& wb_;
  std::vector<std::pair<std::size_t, bool>> xfs_;
  std::map<std::string, int> numfmt_;
  std::map<std::string, int> fill_;
};

std::string sheet_xml(const Sheet& sheet, bool selected, StyleTable& styles) {
  std::string out(kXmlHeader);
  out += "<worksheet xmlns=\"" + std::string(kMainNs) + "\" xmlns:r=\"" + std::string(kRelNs) + "\">";
  out += "<sheetPr><outlinePr summaryBelow=\"1\"/></sheetPr>";
  out += std::string("<sheetViews><sheetView") + (selected ? " tabSelected=\"1\"" : "") + " workbookViewId=\"0\"/></sheetViews>";
  int max_level = 0;
  for (auto l : sheet.outline) max_level = std::max(max_level, std::min(l, kMaxOutlineLevel));
  out += "<sheetFormatPr defaultRowHeight=\"15\"";
  if (max_level > 0) out += " outlineLevelRow=\"" + std::to_string(max_level) + "\"";
  out += "/>";
  if (!sheet.column_widths.empty()) {
    out += "<cols>";
    for (std::size_t c = 0; c < sheet.column_widths.size(); ++c)
      out += "<col min=\"" + std::to_string(c + 1) + "\" max=\"" + std::to_string(c + 1) + "\" width=\"" +
             text::format_number(sheet.column_widths[c]) + "\" customWidth=\"1\"/>";
    out += "</cols>";
  }
  out += "<sheetData>";
  for (std::size_t r = 0; r < sheet.rows.size(); ++r) {
    out += "<row r=\"" + std::to_string(r + 1) + "\"";
    if (int level = std::min(sheet.outline[r], kMaxOutlineLevel); level > 0)
      out += " outlineLevel=\"" + std::to_string(level) + "\"";
    out += ">";
    for (std::size_t c = 0; c < sheet.rows[r].size(); ++c) {
      const auto& cell = sheet.rows[r][c];
      if (cell == Cell::blank()) continue;
      auto s = styles.xf(cell);
      out += "<c r=\"" + cell_ref(r, c) + "\"";
      if (s) out += " s=\"" + std::to_string(s) + "\"";
      switch (cell.kind) {
        case Cell::Kind::Blank: out += "/>"; break;
        case Cell::Kind::Number: out += "><v>" + text::format_number(cell.number) + "</v></c>"; break;
        case Cell::Kind::Text:
          out += " t=\"inlineStr\"><is><t xml:space=\"preserve\">" + xml_escape(cell.text) + "</t></is></c>";
          break;
        case Cell::Kind::Formula: out += "><f>" + xml_escape(cell.text) + "</f></c>"; break;
      }
    }
    out += "</row>";
  }
  out += "</sheetData>";
  if (sheet.protect) out += "<sheetProtection sheet=\"1\" objects=\"1\" scenarios=\"1\"/>";
  out += "<pageMargins left=\"0.7\" right=\"0.7\" top=\"0.75\" bottom=\"0.75\" header=\"0.3\" footer=\"0.3\"/>";
  out += "</worksheet>";
  return out;
}

std::string workbook_xml(const WorkbookModel& wb) {
  std::string out(kXmlHeader);
  out += "<workbook xmlns=\"" + std::string(kMainNs) + "\" xmlns:r=\"" + std::string(kRelNs) + "\">";
  out += "<bookViews><workbookView activeTab=\"0\"/></bookViews><sheets>";
  for (std::size_t s = 0; s < wb.sheets.size(); ++s)
    out += "<sheet name=\"" + xml_escape(wb.sheets[s].name) + "\" sheetId=\"" + std::to_string(s + 1) +
           "\" r:id=\"rId" + std::to_string(s + 1) + "\"/>";
  out += "</sheets>";
  if (!wb.names.empty()) {
    out += "<definedNames>";
    for (const auto& n : wb.names) {
      const auto& sheet = wb.sheets[n.sheet];
      auto row = std::to_string(n.row + 1);
      out += "<definedName name=\"" + xml_escape(n.name) + "\">" + xml_escape(quote_sheet(sheet.name)) + "!$" +
             column_letters(n.first_column) + "$" + row + ":$" + column_letters(n.last_column) + "$" + row +
             "</definedName>";
    }
    out += "</definedNames>";
  }
  out += "<calcPr calcId=\"191029\" fullCalcOnLoad=\"1\"/></workbook>";
  return out;
}

std::string content_types(std::size_t sheets) {
  std::string out(kXmlHeader);
  out += "<Types xmlns=\"http://schemas.openxmlformats.org/package/2006/content-types\">"
         "<Default Extension=\"rels\" ContentType=\"application/vnd.openxmlformats-package.relationships+xml\"/>"
         "<Default Extension=\"xml\" ContentType=\"application/xml\"/>"
         "<Override PartName=\"/xl/workbook.xml\" "
         "ContentType=\"application/vnd.openxmlformats-officedocument.spreadsheetml.sheet.main+xml\"/>";
  for (std::size_t s = 0; s < sheets; ++s)
    out += "<Override PartName=\"/xl/worksheets/sheet" + std::to_string(s + 1) +
           ".xml\" ContentType=\"application/vnd.openxmlformats-officedocument.spreadsheetml.worksheet+xml\"/>";
  out += "<Override PartName=\"/xl/styles.xml\" "
         "ContentType=\"application/vnd.openxmlformats-officedocument.spreadsheetml.styles+xml\"/>"
         "<Override PartName=\"/docProps/core.xml\" "
         "ContentType=\"application/vnd.openxmlformats-package.core-properties+xml\"/>"
         "<Override PartName=\"/docProps/app.xml\" "
         "ContentType=\"application/vnd.openxmlformats-officedocument.extended-properties+xml\"/>"
         "</Types>";
  return out;
}

std::string root_rels() {
  std::string out(kXmlHeader);
  out += "<Relationships xmlns=\"http://schemas.openxmlformats.org/package/2006/relationships\">"
         "<Relationship Id=\"rId1\" "
         "Type=\"http://schemas.openxmlformats.org/officeDocument/2006/relationships/officeDocument\" "
         "Target=\"xl/workbook.xml\"/>"
         "<Relationship Id=\"rId2\" "
         "Type=\"http://schemas.openxmlformats.org/package/2006/relationships/metadata/core-properties\" "
         "Target=\"docProps/core.xml\"/>"
         "<Relationship Id=\"rId3\" "
         "Type=\"http://schemas.openxmlformats.org/officeDocument/2006/relationships/extended-properties\" "
         "Target=\"docProps/app.xml\"/>"
         "</Relationships>";
  return out;
}

std::string workbook_rels(std::size_t sheets) {
  std::string out(kXmlHeader);
  out += "<Relationships xmlns=\"http://schemas.openxmlformats.org/package/2006/relationships\">";
  for (std::size_t s = 0; s < sheets; ++s)
    out += "<Relationship Id=\"rId" + std::to_string(s + 1) +
           "\" Type=\"http://schemas.openxmlformats.org/officeDocument/2006/relationships/worksheet\" "
           "Target=\"worksheets/sheet" + std::to_string(s + 1) + ".xml\"/>";
  out += "<Relationship Id=\"rId" + std::to_string(sheets + 1) +
         "\" Type=\"http://schemas.openxmlformats.org/officeDocument/2006/relationships/styles\" "
         "Target=\"styles.xml\"/>";
  out += "</Relationships>";
  return out;
}

std::string core_props() {
  std::string out(kXmlHeader);
  out += "<cp:coreProperties "
         "xmlns:cp=\"http://schemas.openxmlformats.org/package/2006/metadata/core-properties\" "
         "xmlns:dc=\"http://purl.org/dc/elements/1.1/\"><dc:creator>bam</dc:creator></cp:coreProperties>";
  return out;
}

std::string app_props() {
  std::string out(kXmlHeader);
  out += "<Properties xmlns=\"http://schemas.openxmlformats.org/officeDocument/2006/extended-properties\">"
         "<Application>bam</Application></Properties>";
  return out;
}

}  // namespace

std::string xlsx_bytes(const WorkbookModel& wb) {
  validate(wb);
  StyleTable styles(wb);
  zip::Writer archive;
  archive.add("[Content_Types].xml", content_types(wb.sheets.size()));
  archive.add("_rels/.rels", root_rels());
  archive.add("docProps/core.xml", core_props());
  archive.add("docProps/app.xml", app_props());
  archive.add("xl/workbook.xml", workbook_xml(wb));
  archive.add("xl/_rels/workbook.xml.rels", workbook_rels(wb.sheets.size()));
  // Sheets first: they register the cellXfs the stylesheet must list.
  std::vector<std::string> sheets;
  for (std::size_t s = 0; s < wb.sheets.size(); ++s) sheets.push_back(sheet_xml(wb.sheets[s], s == 0, styles));
  archive.add("xl/styles.xml", styles.xml());
  for (std::size_t s = 0; s < sheets.size(); ++s)
    archive.add("xl/worksheets/sheet" + std::to_string(s + 1) + ".xml", sheets[s]);
  return archive.finish();
}

void render_xlsx(const WorkbookModel& wb, const std::string& path) {
  auto bytes = xlsx_bytes(wb);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::Io, "cannot open '" + path + "' for writing");
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(ErrorKind::Io, "failed writing '" + path + "'");
}

}  // namespace bam
