#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "abin/agents.hpp"
#include "abin/corpus.hpp"
#include "abin/metrics.hpp"

namespace abin::harness {

struct UserSpec {
  std::string id;
  std::optional<std::string> bias_topic;
  double bias_sentiment = 0.5;
};

struct SimulationConfig {
  std::string corpus_path;
  corpus::Format corpus_format = corpus::Format::jsonl;
  corpus::EmbeddingConfig embedding;
  int k_recommend = 10;
  double alpha = 0.5;
  int k_clusters = 2;
  int max_iters = 100;
  double tol = 0.05;
  double eps_search = 0.02;
  int threshold_R = 3;
  double eta = 0.3;
  std::uint64_t acceptance_seed = 42;
  std::uint64_t master_seed = 1;
  int rounds = 1;
  std::vector<UserSpec> users;
  agents::Mode mode = agents::Mode::abin;
  std::string output_dir;
  bool single_thread = true;
};

SimulationConfig parse_config_file(const std::string& path);
SimulationConfig parse_config_json(const std::string& json_text);
std::string config_to_json(const SimulationConfig& cfg);

/// FNV-64 hex digest of the canonical (key-sorted) config JSON.
std::string config_hash(const SimulationConfig& cfg);

struct TopicMix {
  double yin = 0.0;
  double yang = 0.0;
  double neutral = 0.0;
};

struct TopicSpec {
  std::string name;
  std::optional<TopicMix> mix;  // falls back to default_mix
};

struct SyntheticCorpusSpec {
  std::vector<TopicSpec> topics;
  int messages_per_topic = 2;
  TopicMix default_mix{0.5, 0.5, 0.0};
  std::uint64_t seed = 0;
  // Sentiment value ranges per polarity; narrowing them toward the extremes
  // yields a polarized corpus.
  double yin_lo = 0.02, yin_hi = 0.48;
  double yang_lo = 0.52, yang_hi = 0.98;
};

SyntheticCorpusSpec parse_corpus_spec_file(const std::string& path);
SyntheticCorpusSpec parse_corpus_spec_json(const std::string& json_text);

/// Writes a deterministic JSONL corpus. Per-topic sentiment counts follow the
/// mix exactly (largest-remainder allocation); within a topic all non-neutral
/// sentiment values are distinct. Texts are template-generated so hash
/// embeddings cluster by topic.
void generate_synthetic_corpus(const SyntheticCorpusSpec& spec, const std::string& out_path);

struct RoundRecord {
  std::string user;
  int round = 0;
  bool skipped = false;
  agents::RecommendationRound rec;
  std::vector<agents::Decision> decisions;
  metrics::RoundMetrics m;
};

struct RunResult {
  std::string run_dir;
  std::vector<RoundRecord> records;  // ordered by user id, then round
  metrics::Summary summary;
  agents::InaCounters counters;
  long memory_resets = 0;
};

/// Runs the multi-round simulation and writes manifest.json, rounds.csv,
/// rounds.jsonl, summary.json and memory checkpoints into output_dir.
RunResult simulate(const SimulationConfig& cfg);

struct SweepSpec {
  std::vector<int> values;  // k_clusters values
  int repetitions = 1;
};

struct SweepRow {
  int k_clusters = 0;
  double wall_seconds = 0.0;
  double baseline_best_diff = 0.0;
  double abin_best_diff = 0.0;
  double improve_pct = 0.0;
};

/// Paired opa_only/abin runs per k; writes sweep.csv under out_dir.
std::vector<SweepRow> sweep_clusters(const SimulationConfig& cfg, const SweepSpec& sweep,
                                     const std::string& out_dir);

/// Emits report.txt and scatter.csv (user index vs per-round best_diff); adds
/// the delta-percent block when a baseline run is given.
void report(const std::string& run_dir, const std::optional<std::string>& baseline_run_dir,
            const std::string& out_dir);

struct AuditResult {
  bool ok = true;
  std::vector<std::string> problems;
};

/// Re-derives every CSV row from the logged round artifacts and re-checks the
/// OPA-prefix and injection invariants.
AuditResult audit(const std::string& run_dir);

/// Stable formatting used for all CSV numeric fields.
std::string fmt_double(double v);

}  // namespace abin::harness
