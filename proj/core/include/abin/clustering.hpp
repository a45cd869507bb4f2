#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <unordered_map>
#include <vector>

#include "abin/corpus.hpp"
#include "abin/vecmath.hpp"

namespace abin::clustering {

struct ClusteringConfig {
  double alpha = 0.5;  // weight of textual vs topical similarity
  int k = 1;
  int max_iters = 100;
  std::uint64_t seed = 0;
};

struct Centroid {
  std::vector<double> text;
  std::vector<double> topic;
};

struct ClusterModel {
  int k = 0;
  std::unordered_map<std::string, int> assignments;  // message id -> cluster
  std::vector<Centroid> centroids;
  std::vector<std::vector<std::string>> members;  // cluster -> ids, input order
  std::vector<std::string> warnings;
};

using TopicEmbeddingMap = std::map<std::string, std::vector<double>>;

/// Cosine of two text embeddings. Throws ZeroVector / DimensionMismatch.
template <class VA, class VB>
double textual_similarity(const VA& a, const VB& b) {
  return vec::cosine(a, b);
}

double topic_similarity(const corpus::TopicEmbedding& a, const corpus::TopicEmbedding& b);

/// alpha * textual + (1 - alpha) * topical similarity of two messages.
double unified_similarity(const corpus::Message& a, const corpus::Message& b,
                          double alpha, const TopicEmbeddingMap& topic_embs);

/// Seeded k-means over the unified similarity (assignment maximizes
/// similarity; centroids carry paired text and topic components). Clamps k to
/// |messages| with a warning, repairs empty clusters, deterministic given
/// (inputs, seed).
ClusterModel kmeans(const std::vector<corpus::Message>& messages,
                    const ClusteringConfig& cfg, const TopicEmbeddingMap& topic_embs);

}  // namespace abin::clustering
