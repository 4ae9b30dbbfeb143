#pragma once

#include "bam/cube.hpp"
#include "bam/eval.hpp"
#include "bam/model.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace bam::audit {

struct DependencyNode {
  std::size_t variable = 0;
  bool input = false;
  bool repeated = false;  // already expanded earlier in the tree
  std::vector<DependencyNode> children;
};

// Children are the directly referenced variables in first-reference order;
// a calculated variable met a second time is marked `repeated` and not
// expanded again. Throws UnknownVariable.
DependencyNode dependency_tree(const SemanticModel& model, std::string_view variable);

std::string render_tree(const SemanticModel& model, const DependencyNode& root);

// Input variables at the leaves of the tree.
std::vector<std::size_t> tree_inputs(const DependencyNode& root);

struct CensusEntry {
  std::string formula;  // "Target = body", identifiers spelled by display name
  std::size_t variable = 0;
  std::vector<std::string> reports;  // sorted
};

struct Census {
  std::vector<CensusEntry> formulas;  // sorted by formula text, ignoring case
  std::size_t count() const noexcept { return formulas.size(); }
};

Census formula_census(const SemanticModel& model);
std::string render_census(const Census& census);

struct SensitivityEntry {
  std::string input;
  double delta = 0;  // target(perturbed) - target(base); NaN if UNDEFINED
  std::size_t rank = 0;  // 1-based
};

// Relative perturbation applied to every instance of one input at a time;
// zero-valued instances move by +1 instead.
inline constexpr double kPerturbation = 0.01;

// Ranks the inputs the target depends on by |delta| (descending, ties
// alphabetical; UNDEFINED deltas last). Throws UnknownVariable,
// TargetNotCalculated, UnknownCategoryPath, PeriodOutOfRange, UndefinedBase.
std::vector<SensitivityEntry> sensitivity_rank(const SemanticModel& model, const InstanceGrid& grid,
                                               const ValueCube& inputs, std::string_view target, std::size_t period,
                                               const std::vector<std::string>& category_path,
                                               const EvalOptions& options = {});

std::string render_sensitivity(const std::vector<SensitivityEntry>& entries);

// Plain-text documentation whose non-comment lines are the model itself in
// canonical form, so the document re-parses to the same model.
std::string export_docs(const SemanticModel& model);

}  // namespace bam::audit
