#pragma once

#include "bam/document.hpp"

#include <string>
#include <string_view>

namespace bam {

// Parses a complete model description. Throws bam::Error carrying the
// offending line number.
ModelDocument parse_model(std::string_view text);

// Parses one formula right-hand side. `line` is only used for diagnostics.
Expr parse_expression(std::string_view text, int line = 0);

// Canonical text form of a document; parse_model(print_model(d)) == d.
std::string print_model(const ModelDocument& doc);

// The "Categories:" block of the canonical form (empty without hierarchies).
std::string print_categories(const ModelDocument& doc);
std::string print_time_frame(const TimeFrame& tf);
std::string print_formula(const FormulaDef& f);

}  // namespace bam
