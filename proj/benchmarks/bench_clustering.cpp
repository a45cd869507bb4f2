#include <benchmark/benchmark.h>

#include <string>
#include <vector>

#include "abin/clustering.hpp"
#include "abin/corpus.hpp"

namespace {

abin::corpus::MessageBase synthetic_base(int n, int dim) {
  std::vector<abin::corpus::Message> msgs;
  msgs.reserve(n);
  const char* topics[] = {"economy", "sports", "health", "travel"};
  for (int i = 0; i < n; ++i) {
    abin::corpus::Message m;
    m.id = "m" + std::to_string(i);
    m.topic = topics[i % 4];
    m.text = m.topic + " story " + std::to_string(i) + " view " + std::to_string(i % 7);
    m.sentiment = (i % 10) / 10.0;
    m.embedding = abin::corpus::embed(m.text, m.topic, dim, 7);
    msgs.push_back(std::move(m));
  }
  return abin::corpus::build_base(std::move(msgs), {dim, 7});
}

void BM_kmeans(benchmark::State& state) {
  const auto base = synthetic_base(int(state.range(0)), 64);
  abin::clustering::ClusteringConfig cfg;
  cfg.k = 4;
  cfg.seed = 7;
  for (auto _ : state) {
    auto model = abin::clustering::kmeans(base.messages, cfg, base.topic_embeddings);
    benchmark::DoNotOptimize(model);
  }
}

}  // namespace

BENCHMARK(BM_kmeans)->Arg(10)->Arg(100)->Arg(400);
