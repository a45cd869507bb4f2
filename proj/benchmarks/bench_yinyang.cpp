#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "abin/yinyang.hpp"

namespace {

std::vector<double> random_scores(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<double> out(n);
  for (auto& v : out) v = double(rng() >> 11) * 0x1.0p-53;
  return out;
}

void BM_if_balance(benchmark::State& state) {
  const auto scores = random_scores(std::size_t(state.range(0)), 1);
  for (auto _ : state) {
    auto r = abin::yinyang::if_balance({"t", scores});
    benchmark::DoNotOptimize(r);
  }
}

void BM_find_match_scores(benchmark::State& state) {
  const auto remain = random_scores(8, 2);
  const auto pool = random_scores(std::size_t(state.range(0)), 3);
  for (auto _ : state) {
    auto r = abin::yinyang::find_match_scores(remain, pool, 0.05);
    benchmark::DoNotOptimize(r);
  }
}

}  // namespace

BENCHMARK(BM_if_balance)->Arg(8)->Arg(64)->Arg(256);
BENCHMARK(BM_find_match_scores)->Arg(100)->Arg(1000)->Arg(10000);
