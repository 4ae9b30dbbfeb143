#pragma once

#include "bam/cube.hpp"
#include "bam/eval.hpp"

#include <optional>
#include <string_view>
#include <vector>

namespace bam {

struct Mismatch {
  Instance at;
  std::optional<double> expected;  // nullopt = UNDEFINED
  std::optional<double> observed;
  double difference;  // |expected - observed|, infinity when exactly one side is UNDEFINED
};

struct MismatchReport {
  std::vector<Mismatch> mismatches;
  std::size_t compared = 0;  // observed rows checked
  std::size_t missing = 0;   // evaluated instances absent from the observations

  bool passed() const noexcept { return mismatches.empty(); }
};

// Compares externally produced results against the shadow evaluation of
// `inputs`. Observations may name calculated variables and roll-up rows.
MismatchReport verify_against(const SemanticModel& model, const InstanceGrid& grid, const ValueCube& inputs,
                              std::string_view observed_csv, double tolerance, const EvalOptions& options = {});

}  // namespace bam
