#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "abin/clustering.hpp"
#include "abin/corpus.hpp"

namespace abin::dcia {

struct ClusterScore {
  int cluster = 0;
  double size_norm = 0.0;     // S'_k
  double entropy = 0.0;       // H(C_k)
  double entropy_norm = 0.0;  // H'(C_k)
  double importance = 0.0;    // harmonic mean of S' and H'
};

/// Per-user rejection bookkeeping. A cluster is blocked once its rejection
/// count strictly exceeds threshold_R.
struct MemoryState {
  std::string user;
  int threshold_R = 3;
  std::map<int, int> rejection_count;
  std::set<int> blocked;
};

/// Mean sentiment over cluster members tagged with `topic`.
double avg_sentiment(const std::vector<corpus::Message>& cluster_members,
                     const std::string& topic);

/// -sum over topics present of P' * log2(P'), with the 0*log(0) = 0 convention.
double cluster_entropy(const std::vector<corpus::Message>& cluster_members);

std::vector<ClusterScore> score_clusters(const clustering::ClusterModel& model,
                                         const corpus::MessageBase& base);

/// Highest-importance non-blocked cluster; ties by larger size_norm, then
/// lower index. Throws AllClustersBlocked.
int select_target(const std::vector<ClusterScore>& scores, const MemoryState& memory);

/// Adds rejections of INA-injected messages to the cluster counter and
/// updates the blocked set.
void record_feedback(MemoryState& memory, int cluster, int injected_rejections);

std::string memory_to_json(const MemoryState& memory);
MemoryState memory_from_json(const std::string& json_text);

}  // namespace abin::dcia
