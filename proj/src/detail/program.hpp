#pragma once

// Formula bodies compiled to postfix, shared by both evaluators.

#include "bam/cube.hpp"
#include "bam/eval.hpp"

#include <cmath>
#include <vector>

namespace bam::detail {

struct Step {
  enum class Code : unsigned char { Load, Constant, Op } code;
  BinaryOperator op = BinaryOperator::Add;
  std::size_t variable = 0;
  double constant = 0;
};

struct Program {
  std::vector<Step> steps;
  std::size_t max_depth = 0;

  // `column` is the row * periods + period offset shared by all operands.
  double run(std::span<const double> values, std::span<const std::size_t> offsets, std::size_t column,
             double* stack) const noexcept {
    std::size_t top = 0;
    for (const auto& s : steps) {
      switch (s.code) {
        case Step::Code::Load: stack[top++] = values[offsets[s.variable] + column]; break;
        case Step::Code::Constant: stack[top++] = s.constant; break;
        case Step::Code::Op:
          --top;
          stack[top - 1] = apply(s.op, stack[top - 1], stack[top]);
          break;
      }
    }
    return stack[0];
  }
};

std::vector<Program> compile(const SemanticModel& model);

std::vector<std::size_t> offsets_of(const ValueCube& cube);

// Fills defaults and validates shapes; returns the cube evaluation writes into.
ValueCube prepare(const SemanticModel& model, const InstanceGrid& grid, const ValueCube& inputs,
                  std::vector<Instance>& defaulted);

void enforce_strict(const SemanticModel& model, const InstanceGrid& grid, const ValueCube& values);

// acc = v[first]; acc = acc + v[next] ... in leaf display order.
inline double sum_leaves(std::span<const double> values, std::size_t base, const std::vector<std::size_t>& leaves,
                         std::size_t periods, std::size_t period) noexcept {
  double acc = values[base + leaves[0] * periods + period];
  for (std::size_t i = 1; i < leaves.size(); ++i)
    acc = apply(BinaryOperator::Add, acc, values[base + leaves[i] * periods + period]);
  return acc;
}

}  // namespace bam::detail
