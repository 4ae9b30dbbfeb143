#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace bam::csv {

struct Record {
  std::vector<std::string> fields;
  int line = 0;  // 1-based line on which the record starts
};

// RFC 4180: comma separated, double-quoted fields may contain commas,
// quotes ("") and line breaks. LF and CRLF both accepted; blank lines are
// skipped. Throws MalformedCsv.
std::vector<Record> parse(std::string_view text);

// Quotes the field when it contains a comma, quote or line break.
std::string escape(std::string_view field);

std::string join(const std::vector<std::string>& fields);

}  // namespace bam::csv
