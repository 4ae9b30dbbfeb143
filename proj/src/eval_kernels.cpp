#include "bam/eval.hpp"
#include "detail/program.hpp"

#include <algorithm>
#include <omp.h>

namespace bam {

namespace {

// Below this many (row, period) slices per layout the fork/join costs more
// than the work.
constexpr std::ptrdiff_t kParallelThreshold = 512;

}  // namespace

// Operands of a formula always share the target's layout, so each
// (row, period) slice of a layout can be evaluated through the whole
// topological order independently. Leaf slices go first, then roll-up
// slices, which read leaves (sum) or same-row operands (recompute).
EvalResult evaluate(const SemanticModel& model, const InstanceGrid& grid, const ValueCube& inputs,
                    const EvalOptions& options) {
  EvalResult result;
  result.values = detail::prepare(model, grid, inputs, result.defaulted);
  const auto programs = detail::compile(model);
  const auto offsets = detail::offsets_of(result.values);
  const auto periods = result.values.period_count();
  auto values = result.values.values();

  std::vector<std::vector<std::size_t>> by_layout(grid.layouts.size());
  for (auto v : model.graph.order) by_layout[grid.variable_layout[v]].push_back(v);

  std::size_t max_depth = 1;
  for (const auto& p : programs) max_depth = std::max(max_depth, p.max_depth);

  for (std::size_t l = 0; l < grid.layouts.size(); ++l) {
    const auto& layout = grid.layouts[l];
    const auto& vars = by_layout[l];
    if (vars.empty()) continue;

    std::vector<std::size_t> leaf_rows, rollup_rows;
    for (std::size_t r = 0; r < layout.data_row_count(); ++r)
      (layout.data_row(r).kind == RowKind::Leaf ? leaf_rows : rollup_rows).push_back(r);

    const auto leaf_slices = static_cast<std::ptrdiff_t>(leaf_rows.size() * periods);
    const auto rollup_slices = static_cast<std::ptrdiff_t>(rollup_rows.size() * periods);

#pragma omp parallel if (leaf_slices + rollup_slices >= kParallelThreshold)
    {
      std::vector<double> stack(max_depth);

#pragma omp for schedule(static)
      for (std::ptrdiff_t s = 0; s < leaf_slices; ++s) {
        const auto r = leaf_rows[static_cast<std::size_t>(s) / periods];
        const auto column = r * periods + static_cast<std::size_t>(s) % periods;
        for (auto v : vars) {
          if (model.variables[v].is_input()) continue;
          values[offsets[v] + column] = programs[v].run(values, offsets, column, stack.data());
        }
      }

#pragma omp for schedule(static)
      for (std::ptrdiff_t s = 0; s < rollup_slices; ++s) {
        const auto r = rollup_rows[static_cast<std::size_t>(s) / periods];
        const auto p = static_cast<std::size_t>(s) % periods;
        const auto column = r * periods + p;
        const auto& leaves = layout.data_row(r).leaves;
        for (auto v : vars) {
          double& out = values[offsets[v] + column];
          if (model.variables[v].is_input() || options.rollup == RollupMode::Sum)
            out = detail::sum_leaves(values, offsets[v], leaves, periods, p);
          else
            out = programs[v].run(values, offsets, column, stack.data());
        }
      }
    }
  }

  if (options.strict) detail::enforce_strict(model, grid, result.values);
  return result;
}

}  // namespace bam
