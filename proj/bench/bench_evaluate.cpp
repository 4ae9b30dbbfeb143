// Serial reference against the OpenMP kernel on a wide synthetic model.
// Args: leaf count, period count.

#include "bam/eval.hpp"
#include "bam/model.hpp"
#include "bam/parser.hpp"

#include <benchmark/benchmark.h>

#include <cstdint>
#include <string>

namespace {

std::string wide_model(int leaves, int periods) {
  std::string m = "Each period is one month.\nThe number of periods is " + std::to_string(periods) +
                  ".\nThe first period starts in 2000.\nCategories:\nRegions =\n";
  for (int i = 1; i <= 8; ++i) {
    m += std::to_string(i) + " Region " + std::to_string(i) + "\n";
    for (int j = 1; j <= leaves / 8; ++j)
      m += std::to_string(i) + "." + std::to_string(j) + " Branch " + std::to_string(i) + "x" + std::to_string(j) + "\n";
  }
  m += "Report: Wide\nBreakdown by Regions\n";
  m += "Margin = Sales - Costs\nRatio = Margin / Sales\nScaled = Ratio * 1.07 + Margin / (Costs - Sales)\n";
  return m;
}

struct Fixture {
  bam::SemanticModel model;
  bam::InstanceGrid grid;
  bam::ValueCube inputs;

  Fixture(int leaves, int periods)
      : model(bam::analyze(bam::parse_model(wide_model(leaves, periods)))),
        grid(bam::expand(model)),
        inputs(grid) {
    std::uint64_t x = 88172645463325252ull;
    for (auto v : model.variables.inputs()) {
      const auto& layout = grid.layout_of(v);
      for (std::size_t d = 0; d < layout.data_row_count(); ++d) {
        if (layout.data_row(d).kind != bam::RowKind::Leaf) continue;
        for (std::size_t t = 0; t < static_cast<std::size_t>(periods); ++t) {
          x ^= x << 13, x ^= x >> 7, x ^= x << 17;
          inputs.set({v, d, t}, static_cast<double>(x % 100000) / 7.0);
        }
      }
    }
  }
};

template <bool Parallel>
void BM_Evaluate(benchmark::State& state) {
  Fixture f(static_cast<int>(state.range(0)), static_cast<int>(state.range(1)));
  for (auto _ : state) {
    auto r = Parallel ? bam::evaluate(f.model, f.grid, f.inputs) : bam::evaluate_serial(f.model, f.grid, f.inputs);
    benchmark::DoNotOptimize(r);
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(f.inputs.size()));
}

}  // namespace

BENCHMARK(BM_Evaluate<false>)->Name("serial")->Args({400, 24})->Args({4000, 60})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Evaluate<true>)->Name("openmp")->Args({400, 24})->Args({4000, 60})->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
