#include "bam/error.hpp"
#include "bam/eval.hpp"
#include "detail/program.hpp"

#include <algorithm>
#include <cmath>

namespace bam {

double apply(BinaryOperator op, double lhs, double rhs) noexcept {
  double r;
  switch (op) {
    case BinaryOperator::Add: r = lhs + rhs; break;
    case BinaryOperator::Subtract: r = lhs - rhs; break;
    case BinaryOperator::Multiply: r = lhs * rhs; break;
    case BinaryOperator::Divide:
      if (rhs == 0.0) return kUndefined;
      r = lhs / rhs;
      break;
    default: return kUndefined;
  }
  return std::isfinite(r) ? r : kUndefined;
}

namespace detail {

namespace {

void emit(const Expr& e, const VariableTable& table, Program& p, std::size_t depth) {
  switch (e.kind) {
    case Expr::Kind::Variable:
      p.steps.push_back({Step::Code::Load, BinaryOperator::Add, table.at(e.name), 0});
      p.max_depth = std::max(p.max_depth, depth + 1);
      return;
    case Expr::Kind::Number:
      p.steps.push_back({Step::Code::Constant, BinaryOperator::Add, 0, e.value});
      p.max_depth = std::max(p.max_depth, depth + 1);
      return;
    case Expr::Kind::Paren:
      emit(e.inner(), table, p, depth);
      return;
    case Expr::Kind::Binary:
      emit(e.lhs(), table, p, depth);
      emit(e.rhs(), table, p, depth + 1);
      p.steps.push_back({Step::Code::Op, e.op, 0, 0});
      return;
  }
}

}  // namespace

std::vector<Program> compile(const SemanticModel& model) {
  std::vector<Program> out(model.variables.size());
  for (std::size_t v = 0; v < model.variables.size(); ++v)
    if (const auto& def = model.variables[v].definition) emit(def->body, model.variables, out[v], 0);
  return out;
}

std::vector<std::size_t> offsets_of(const ValueCube& cube) {
  std::vector<std::size_t> out(cube.variable_count());
  for (std::size_t v = 0; v < out.size(); ++v) out[v] = cube.offset(v);
  return out;
}

ValueCube prepare(const SemanticModel& model, const InstanceGrid& grid, const ValueCube& inputs,
                  std::vector<Instance>& defaulted) {
  ValueCube values(grid);
  if (inputs.variable_count() != values.variable_count() || inputs.values().size() != values.values().size())
    throw Error(ErrorKind::InvariantViolation, "input cube shape does not match the model");
  const auto periods = values.period_count();
  for (std::size_t v = 0; v < model.variables.size(); ++v) {
    if (!model.variables[v].is_input()) continue;
    const auto& layout = grid.layout_of(v);
    for (std::size_t r = 0; r < layout.data_row_count(); ++r) {
      if (layout.data_row(r).kind != RowKind::Leaf) continue;
      for (std::size_t p = 0; p < periods; ++p) {
        Instance at{v, r, p};
        if (inputs.contains(at)) {
          values.set(at, inputs.raw(at));
        } else {
          values.set(at, 0.0);
          defaulted.push_back(at);
        }
      }
    }
  }
  auto presence = values.presence();
  std::fill(presence.begin(), presence.end(), 1);
  return values;
}

void enforce_strict(const SemanticModel& model, const InstanceGrid& grid, const ValueCube& values) {
  for (std::size_t v = 0; v < model.variables.size(); ++v)
    for (std::size_t r = 0; r < values.row_count(v); ++r)
      for (std::size_t p = 0; p < values.period_count(); ++p)
        if (values.is_undefined({v, r, p}))
          throw Error(ErrorKind::EvaluationError, "UNDEFINED value for " + describe(model, grid, {v, r, p}));
}

}  // namespace detail

EvalResult evaluate_serial(const SemanticModel& model, const InstanceGrid& grid, const ValueCube& inputs,
                           const EvalOptions& options) {
  EvalResult result;
  result.values = detail::prepare(model, grid, inputs, result.defaulted);
  const auto programs = detail::compile(model);
  const auto offsets = detail::offsets_of(result.values);
  const auto periods = result.values.period_count();
  auto values = result.values.values();
  std::vector<double> stack;

  for (auto v : model.graph.order) {
    const auto& layout = grid.layout_of(v);
    const auto base = offsets[v];
    const bool input = model.variables[v].is_input();
    stack.resize(std::max<std::size_t>(programs[v].max_depth, 1));

    for (std::size_t r = 0; r < layout.data_row_count(); ++r) {
      if (input || layout.data_row(r).kind != RowKind::Leaf) continue;
      for (std::size_t p = 0; p < periods; ++p)
        values[base + r * periods + p] = programs[v].run(values, offsets, r * periods + p, stack.data());
    }
    for (std::size_t r = 0; r < layout.data_row_count(); ++r) {
      const auto& row = layout.data_row(r);
      if (row.kind == RowKind::Leaf) continue;
      for (std::size_t p = 0; p < periods; ++p) {
        double& out = values[base + r * periods + p];
        if (input || options.rollup == RollupMode::Sum)
          out = detail::sum_leaves(values, base, row.leaves, periods, p);
        else
          out = programs[v].run(values, offsets, r * periods + p, stack.data());
      }
    }
  }

  if (options.strict) detail::enforce_strict(model, grid, result.values);
  return result;
}

}  // namespace bam
