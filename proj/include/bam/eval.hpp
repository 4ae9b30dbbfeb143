#pragma once

#include "bam/cube.hpp"
#include "bam/model.hpp"

#include <vector>

namespace bam {

enum class RollupMode {
  Sum,        // roll-up = sum of descendant leaf values
  Recompute,  // calculated roll-up = formula applied to operand roll-ups
};

struct EvalOptions {
  RollupMode rollup = RollupMode::Recompute;
  bool strict = false;  // any UNDEFINED result throws EvaluationError
};

struct EvalResult {
  ValueCube values;
  std::vector<Instance> defaulted;  // leaf inputs missing from the data, taken as 0
};

// Arithmetic shared by every evaluator: division by zero and any
// non-finite result give UNDEFINED, and UNDEFINED propagates.
double apply(BinaryOperator op, double lhs, double rhs) noexcept;

// Parallel evaluation (OpenMP over category rows and periods).
EvalResult evaluate(const SemanticModel& model, const InstanceGrid& grid, const ValueCube& inputs,
                    const EvalOptions& options = {});

// Sequential topological evaluation, kept as the reference for evaluate().
EvalResult evaluate_serial(const SemanticModel& model, const InstanceGrid& grid, const ValueCube& inputs,
                           const EvalOptions& options = {});

}  // namespace bam
