#pragma once

#include <cstdint>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include "abin/corpus.hpp"
#include "abin/dcia.hpp"

namespace abin::agents {

struct HistoryEntry {
  int round = 0;
  std::string message_id;
  bool accepted = false;
};

struct UserState {
  std::string id;
  std::vector<double> preference;  // unit L2 norm
  std::vector<HistoryEntry> history;
  dcia::MemoryState memory;
};

struct Decision {
  std::string message_id;
  bool accepted = false;
};

struct RecommendationRound {
  int round = 0;
  std::vector<corpus::Message> opa_list;
  std::vector<corpus::Message> injected;
  std::vector<corpus::Message> final_list;  // opa_list ++ injected
  int target_cluster = -1;
  std::vector<std::pair<std::string, double>> complement_queries;  // (topic, score)
  std::vector<std::pair<std::string, double>> search_misses;
};

/// Extension point for external recommenders. The built-in ranker and the
/// stdio adapter documented in the README both satisfy this contract.
class RecommenderInterface {
 public:
  virtual ~RecommenderInterface() = default;
  virtual std::vector<corpus::Message> recommend(
      const UserState& user, const corpus::MessageBase& base, int k,
      const std::unordered_set<std::string>& exclude) = 0;
  virtual void notify_feedback(const UserState& user,
                               const std::vector<Decision>& decisions) = 0;
};

struct OpaResult {
  std::vector<corpus::Message> messages;
  bool exhausted = false;  // fewer than k candidates remained
};

/// Top-k by cosine(preference, embedding), excluding `exclude` and the user's
/// previously accepted items; ties broken by id.
OpaResult opa_similarity_recommend(const UserState& user, const corpus::MessageBase& base,
                                   int k, const std::unordered_set<std::string>& exclude);

class SimilarityRecommender : public RecommenderInterface {
 public:
  std::vector<corpus::Message> recommend(
      const UserState& user, const corpus::MessageBase& base, int k,
      const std::unordered_set<std::string>& exclude) override {
    return opa_similarity_recommend(user, base, k, exclude).messages;
  }
  void notify_feedback(const UserState&, const std::vector<Decision>&) override {}
};

/// Counts of sub-algorithm invocations, for run-manifest instrumentation.
struct InaCounters {
  long kmeans_calls = 0;
  long dcia_calls = 0;
  long yync_calls = 0;
};

struct InaConfig {
  double alpha = 0.5;
  int k_clusters = 2;
  int max_iters = 100;
  std::uint64_t cluster_seed = 0;
  double tol = 0.05;
  double eps_search = 0.02;
  InaCounters* counters = nullptr;  // optional instrumentation sink
};

/// The INA pipeline: cluster the OPA list, pick the dominant cluster, balance
/// each of its topics via if_balance + find_match_scores, then search the base
/// for the preference-closest message per complement query. Never removes or
/// reorders OPA messages.
RecommendationRound ina_process(const std::vector<corpus::Message>& opa_list,
                                const UserState& user, const corpus::MessageBase& base,
                                const InaConfig& cfg, int round_index);

/// Per-message stochastic acceptance: accept iff (cosine+1)/2 exceeds a
/// uniform draw from a stream keyed by (rng_seed, user id, round, position).
std::vector<Decision> ua_respond(const RecommendationRound& round, const UserState& user,
                                 std::uint64_t rng_seed);

/// Folds the Hadamard product of the round's accepted embeddings into the
/// preference: v' = normalize(v + eta * normalize(h)). Skips degenerate h.
void ua_update_preference(UserState& user, const std::vector<corpus::Message>& accepted,
                          double eta);

enum class Mode { opa_only, abin };

struct RunConfig {
  int k_recommend = 10;
  InaConfig ina;
  double eta = 0.3;
  std::uint64_t acceptance_seed = 42;
  Mode mode = Mode::abin;
};

struct RoundOutput {
  RecommendationRound round;
  std::vector<Decision> decisions;
  bool skipped = false;       // OPA had nothing left to recommend
  bool memory_reset = false;  // AllClustersBlocked forced a reset
};

/// One full loop: OPA recommend -> INA (abin mode) -> UA respond -> preference
/// update -> memory feedback on injected rejections -> recommender feedback.
RoundOutput run_round(UserState& user, const corpus::MessageBase& base,
                      RecommenderInterface& recommender, const RunConfig& cfg,
                      int round_index, std::uint64_t seed);

}  // namespace abin::agents
