#include <benchmark/benchmark.h>

#include <string>
#include <vector>

#include "abin/agents.hpp"
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
    m.sentiment = 0.02 + 0.96 * ((i * 37) % 101) / 100.0;
    m.embedding = abin::corpus::embed(m.text, m.topic, dim, 7);
    msgs.push_back(std::move(m));
  }
  return abin::corpus::build_base(std::move(msgs), {dim, 7});
}

// One full OPA -> INA -> UA loop iteration against a mid-sized base.
void BM_run_round(benchmark::State& state) {
  const auto base = synthetic_base(int(state.range(0)), 64);
  abin::agents::RunConfig cfg;
  cfg.k_recommend = 10;
  cfg.ina.k_clusters = 2;
  abin::agents::SimilarityRecommender rec;
  for (auto _ : state) {
    abin::agents::UserState user;
    user.id = "bench";
    user.preference.assign(base.messages.front().embedding.begin(),
                           base.messages.front().embedding.end());
    auto out = abin::agents::run_round(user, base, rec, cfg, 1, 7);
    benchmark::DoNotOptimize(out);
  }
}

}  // namespace

BENCHMARK(BM_run_round)->Arg(100)->Arg(400)->Arg(800);
