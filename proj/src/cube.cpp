#include "bam/cube.hpp"

#include "bam/csv.hpp"
#include "bam/error.hpp"
#include "bam/text.hpp"

#include <cmath>
#include <cstring>
#include <set>

namespace bam {

ValueCube::ValueCube(const InstanceGrid& grid) : periods_(static_cast<std::size_t>(grid.period_count)) {
  std::size_t total = 0;
  for (std::size_t v = 0; v < grid.variable_layout.size(); ++v) {
    offset_.push_back(total);
    rows_.push_back(grid.layout_of(v).data_row_count());
    total += rows_.back() * periods_;
  }
  values_.assign(total, 0.0);
  present_.assign(total, 0);
}

bool ValueCube::is_undefined(Instance at) const {
  auto i = index(at);
  return present_[i] && std::isnan(values_[i]);
}

std::optional<double> ValueCube::get(Instance at) const {
  auto i = index(at);
  if (!present_[i] || std::isnan(values_[i])) return std::nullopt;
  return values_[i];
}

void ValueCube::set(Instance at, double value) {
  auto i = index(at);
  values_[i] = value;
  present_[i] = 1;
}

void ValueCube::erase(Instance at) {
  auto i = index(at);
  values_[i] = 0.0;
  present_[i] = 0;
}

std::size_t ValueCube::size() const {
  std::size_t n = 0;
  for (auto p : present_) n += p;
  return n;
}

bool ValueCube::identical(const ValueCube& other) const {
  return offset_ == other.offset_ && rows_ == other.rows_ && periods_ == other.periods_ &&
         present_ == other.present_ &&
         std::memcmp(values_.data(), other.values_.data(), values_.size() * sizeof(double)) == 0;
}

std::string describe(const SemanticModel& model, const InstanceGrid& grid, Instance at) {
  const auto& row = grid.layout_of(at.variable).data_row(at.row);
  std::string out = model.variables[at.variable].name;
  if (!row.path.empty()) out += " [" + join_path(row.path) + "]";
  out += " " + model.document.time_frame.period_label(static_cast<int>(at.period));
  return out;
}

std::size_t resolve_period(const TimeFrame& tf, std::string_view field, int line) {
  auto trimmed = text::collapse_spaces(field);
  // Labels of consecutive periods are strictly increasing, so a linear scan
  // is only needed for non-year frames.
  if (tf.unit == PeriodUnit::Year) {
    if (auto year = text::parse_integer(trimmed)) {
      auto index = *year - tf.start_year;
      if (index >= 0 && index < tf.period_count) return static_cast<std::size_t>(index);
    }
  } else {
    for (int p = 0; p < tf.period_count; ++p)
      if (text::iequals(tf.period_label(p), trimmed)) return static_cast<std::size_t>(p);
  }
  if (auto index = text::parse_integer(trimmed)) {
    if (*index >= 0 && *index < tf.period_count) return static_cast<std::size_t>(*index);
  }
  throw Error(ErrorKind::PeriodOutOfRange, "period '" + trimmed + "' is outside the time frame", line);
}

std::vector<Observation> read_observations(std::string_view csv_text, const SemanticModel& model,
                                           const InstanceGrid& grid, const ReadOptions& options) {
  auto records = csv::parse(csv_text);
  if (records.empty()) throw Error(ErrorKind::MalformedCsv, "missing header row", 1);
  if (csv::join(records.front().fields) != kCsvHeader)
    throw Error(ErrorKind::MalformedCsv, "header must be exactly '" + std::string(kCsvHeader) + "'",
                records.front().line);

  std::vector<Observation> out;
  std::set<Instance> seen;
  for (std::size_t i = 1; i < records.size(); ++i) {
    const auto& rec = records[i];
    if (rec.fields.size() != 4)
      throw Error(ErrorKind::MalformedCsv, "expected 4 fields, found " + std::to_string(rec.fields.size()), rec.line);

    auto var = model.variables.find(rec.fields[0]);
    if (!var) throw Error(ErrorKind::UnknownVariable, "unknown variable '" + rec.fields[0] + "'", rec.line);
    if (options.inputs_only && !model.variables[*var].is_input())
      throw Error(ErrorKind::VariableNotInput, "'" + model.variables[*var].name + "' is calculated, not an input",
                  rec.line);

    const auto& layout = grid.layout_of(*var);
    auto row = layout.find_data_row(split_path(rec.fields[1]));
    if (!row)
      throw Error(ErrorKind::UnknownCategoryPath,
                  "category '" + rec.fields[1] + "' is not a row of '" + model.variables[*var].name + "'", rec.line);
    if (options.leaves_only && layout.data_row(*row).kind != RowKind::Leaf)
      throw Error(ErrorKind::UnknownCategoryPath, "category '" + rec.fields[1] + "' is a roll-up, not a leaf",
                  rec.line);

    Observation obs;
    obs.at = {*var, *row, resolve_period(model.document.time_frame, rec.fields[2], rec.line)};
    obs.line = rec.line;
    if (text::trim(rec.fields[3]).empty() && options.allow_empty_value) {
      obs.value = std::nullopt;
    } else {
      auto value = text::parse_decimal(rec.fields[3]);
      if (!value) throw Error(ErrorKind::MalformedNumber, "'" + rec.fields[3] + "' is not a number", rec.line);
      obs.value = *value;
    }
    if (!seen.insert(obs.at).second)
      throw Error(ErrorKind::MalformedCsv, "duplicate entry for " + describe(model, grid, obs.at), rec.line);
    out.push_back(obs);
  }
  return out;
}

ValueCube load_inputs(std::string_view csv_text, const SemanticModel& model, const InstanceGrid& grid) {
  ValueCube cube(grid);
  for (const auto& obs : read_observations(csv_text, model, grid, ReadOptions{})) cube.set(obs.at, *obs.value);
  return cube;
}

std::string write_cube_csv(const SemanticModel& model, const InstanceGrid& grid, const ValueCube& cube) {
  std::string out(kCsvHeader);
  out += '\n';
  const auto& tf = model.document.time_frame;
  for (std::size_t v = 0; v < model.variables.size(); ++v) {
    const auto& layout = grid.layout_of(v);
    for (const auto& row : layout.rows) {
      if (!row.is_data()) continue;
      for (std::size_t p = 0; p < cube.period_count(); ++p) {
        Instance at{v, row.data_index, p};
        if (!cube.contains(at)) continue;
        auto value = cube.get(at);
        out += csv::join({model.variables[v].name, join_path(row.path), tf.period_label(static_cast<int>(p)),
                          value ? text::format_number(*value) : std::string()});
        out += '\n';
      }
    }
  }
  return out;
}

}  // namespace bam
