#include "abin/dcia.hpp"

#include <algorithm>
#include <cmath>

#include <nlohmann/json.hpp>

namespace abin::dcia {

double avg_sentiment(const std::vector<corpus::Message>& cluster_members,
                     const std::string& topic) {
  double sum = 0.0;
  int count = 0;
  for (const auto& m : cluster_members) {
    if (m.topic != topic) continue;
    sum += m.sentiment;
    ++count;
  }
  if (count == 0) throw TopicAbsentInCluster(topic);
  return sum / count;
}

double cluster_entropy(const std::vector<corpus::Message>& cluster_members) {
  if (cluster_members.empty()) throw EmptyCluster();
  std::vector<std::string> topics;
  for (const auto& m : cluster_members)
    if (std::find(topics.begin(), topics.end(), m.topic) == topics.end())
      topics.push_back(m.topic);
  double h = 0.0;
  for (const auto& t : topics) {
    const double p = avg_sentiment(cluster_members, t);
    if (p > 0.0) h -= p * std::log2(p);
  }
  return h;
}

std::vector<ClusterScore> score_clusters(const clustering::ClusterModel& model,
                                         const corpus::MessageBase& base) {
  if (model.k < 1) throw NoClusters();
  std::vector<ClusterScore> scores(model.k);
  double total_size = 0.0;
  double max_entropy = 0.0;
  for (int c = 0; c < model.k; ++c) {
    std::vector<corpus::Message> members;
    members.reserve(model.members[c].size());
    for (const auto& id : model.members[c]) members.push_back(base.at(id));
    scores[c].cluster = c;
    scores[c].size_norm = double(members.size());
    scores[c].entropy = members.empty() ? 0.0 : cluster_entropy(members);
    total_size += double(members.size());
    max_entropy = std::max(max_entropy, scores[c].entropy);
  }
  if (total_size == 0.0) throw NoClusters();
  for (auto& s : scores) {
    s.size_norm /= total_size;
    s.entropy_norm = max_entropy > 0.0 ? s.entropy / max_entropy : 0.0;
    const double denom = s.size_norm + s.entropy_norm;
    s.importance = denom > 0.0 ? 2.0 * s.size_norm * s.entropy_norm / denom : 0.0;
  }
  return scores;
}

int select_target(const std::vector<ClusterScore>& scores, const MemoryState& memory) {
  int best = -1;
  for (const auto& s : scores) {
    if (memory.blocked.count(s.cluster)) continue;
    if (best < 0) {
      best = s.cluster;
      continue;
    }
    const auto& b = scores[best];
    if (s.importance > b.importance ||
        (s.importance == b.importance && s.size_norm > b.size_norm))
      best = s.cluster;
  }
  if (best < 0) throw AllClustersBlocked();
  return best;
}

void record_feedback(MemoryState& memory, int cluster, int injected_rejections) {
  if (injected_rejections <= 0) return;
  int& count = memory.rejection_count[cluster];
  count += injected_rejections;
  if (count > memory.threshold_R) memory.blocked.insert(cluster);
}

std::string memory_to_json(const MemoryState& memory) {
  nlohmann::json counts = nlohmann::json::object();
  for (const auto& [cluster, n] : memory.rejection_count)
    counts[std::to_string(cluster)] = n;
  nlohmann::json j{{"user", memory.user},
                   {"threshold_R", memory.threshold_R},
                   {"counts", counts},
                   {"blocked", memory.blocked}};
  return j.dump();
}

MemoryState memory_from_json(const std::string& json_text) {
  const nlohmann::json j = nlohmann::json::parse(json_text);
  MemoryState m;
  m.user = j.at("user").get<std::string>();
  m.threshold_R = j.at("threshold_R").get<int>();
  for (const auto& [key, value] : j.at("counts").items())
    m.rejection_count[std::stoi(key)] = value.get<int>();
  for (const auto& c : j.at("blocked")) m.blocked.insert(c.get<int>());
  return m;
}

}  // namespace abin::dcia
