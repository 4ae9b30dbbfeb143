#pragma once

#include <string>
#include <string_view>

namespace bam {

enum class PeriodOrder { LeftToRight };

// Presentation settings kept outside the model text. Loaded from a
// `key = value` file; see docs/style.md for the keys.
struct StyleConfig {
  std::string input_fill = "FFFF00";  // RRGGBB
  bool locked_calculated = true;
  PeriodOrder period_order = PeriodOrder::LeftToRight;
  std::string number_format = "#,##0";
  std::string ratio_format = "0.00";
  std::string assumptions_sheet_name = "Assumptions";
  double label_column_width = 38;
  double period_column_width = 12;
  bool bold_headers = true;
};

// Throws MalformedStyle with the line number.
StyleConfig parse_style(std::string_view text);

}  // namespace bam
