#include "bam/verify.hpp"

#include "bam/error.hpp"

#include <cmath>
#include <limits>

namespace bam {

MismatchReport verify_against(const SemanticModel& model, const InstanceGrid& grid, const ValueCube& inputs,
                              std::string_view observed_csv, double tolerance, const EvalOptions& options) {
  if (!(tolerance >= 0.0)) throw Error(ErrorKind::MalformedNumber, "tolerance must be non-negative");
  auto observations = read_observations(observed_csv, model, grid, {false, false, true});
  auto expected = evaluate(model, grid, inputs, options).values;

  MismatchReport report;
  report.compared = observations.size();
  report.missing = expected.size() - observations.size();
  for (const auto& obs : observations) {
    auto want = expected.get(obs.at);
    if (!want && !obs.value) continue;
    double diff = (want && obs.value) ? std::fabs(*want - *obs.value) : std::numeric_limits<double>::infinity();
    if (diff > tolerance) report.mismatches.push_back({obs.at, want, obs.value, diff});
  }
  return report;
}

}  // namespace bam
