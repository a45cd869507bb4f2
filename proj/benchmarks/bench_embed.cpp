#include <benchmark/benchmark.h>

#include <string>

#include "abin/corpus.hpp"

namespace {

void BM_embed(benchmark::State& state) {
  const int dim = int(state.range(0));
  const std::string text =
      "economic policy outlook remains mixed as markets weigh inflation data "
      "against steady employment figures and slowing consumer demand";
  for (auto _ : state) {
    auto v = abin::corpus::embed(text, "economy", dim, 7);
    benchmark::DoNotOptimize(v);
  }
}

}  // namespace

BENCHMARK(BM_embed)->Arg(64)->Arg(256)->Arg(1024);

BENCHMARK_MAIN();
