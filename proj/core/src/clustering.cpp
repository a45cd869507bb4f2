#include "abin/clustering.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "abin/vecmath.hpp"

namespace abin::clustering {

namespace {

double message_centroid_similarity(const corpus::Message& m, const Centroid& c,
                                   double alpha, const TopicEmbeddingMap& topic_embs) {
  auto it = topic_embs.find(m.topic);
  if (it == topic_embs.end()) throw UnknownTopic(m.topic);
  const double text_sim = vec::cosine_or_zero(m.embedding, c.text);
  const double topic_sim = vec::cosine_or_zero(it->second, c.topic);
  return alpha * text_sim + (1.0 - alpha) * topic_sim;
}

void recompute_centroids(const std::vector<corpus::Message>& messages,
                         const std::vector<int>& assignment, int k,
                         const TopicEmbeddingMap& topic_embs,
                         std::vector<Centroid>& centroids) {
  const std::size_t dim = messages.front().embedding.size();
  centroids.assign(k, Centroid{});
  std::vector<int> counts(k, 0);
  for (auto& c : centroids) {
    c.text.assign(dim, 0.0);
    c.topic.assign(dim, 0.0);
  }
  for (std::size_t i = 0; i < messages.size(); ++i) {
    const int c = assignment[i];
    ++counts[c];
    const auto& emb = messages[i].embedding;
    const auto& temb = topic_embs.at(messages[i].topic);
    for (std::size_t d = 0; d < dim; ++d) {
      centroids[c].text[d] += emb[d];
      centroids[c].topic[d] += temb[d];
    }
  }
  for (int c = 0; c < k; ++c) {
    if (counts[c] == 0) continue;
    for (std::size_t d = 0; d < dim; ++d) {
      centroids[c].text[d] /= counts[c];
      centroids[c].topic[d] /= counts[c];
    }
  }
}

}  // namespace

double topic_similarity(const corpus::TopicEmbedding& a, const corpus::TopicEmbedding& b) {
  return vec::cosine(a.vector, b.vector);
}

double unified_similarity(const corpus::Message& a, const corpus::Message& b, double alpha,
                          const TopicEmbeddingMap& topic_embs) {
  auto ia = topic_embs.find(a.topic);
  auto ib = topic_embs.find(b.topic);
  if (ia == topic_embs.end()) throw UnknownTopic(a.topic);
  if (ib == topic_embs.end()) throw UnknownTopic(b.topic);
  return alpha * vec::cosine(a.embedding, b.embedding) +
         (1.0 - alpha) * vec::cosine(ia->second, ib->second);
}

ClusterModel kmeans(const std::vector<corpus::Message>& messages,
                    const ClusteringConfig& cfg, const TopicEmbeddingMap& topic_embs) {
  if (messages.empty()) throw EmptyInput();
  const int n = int(messages.size());
  ClusterModel model;
  int k = cfg.k;
  if (k > n) {
    model.warnings.push_back("k=" + std::to_string(k) + " exceeds |messages|=" +
                             std::to_string(n) + "; clamped");
    k = n;
  }
  if (k < 1) throw AbinError("k must be >= 1");
  model.k = k;

  // Seeded init: k distinct messages via partial Fisher-Yates. rng()%m keeps
  // the draw identical across standard library implementations.
  std::mt19937_64 rng(cfg.seed);
  std::vector<int> idx(n);
  for (int i = 0; i < n; ++i) idx[i] = i;
  for (int i = 0; i < k; ++i) {
    const int j = i + int(rng() % std::uint64_t(n - i));
    std::swap(idx[i], idx[j]);
  }
  std::vector<Centroid> centroids(k);
  for (int c = 0; c < k; ++c) {
    const auto& emb = messages[idx[c]].embedding;
    centroids[c].text.assign(emb.begin(), emb.end());
    auto it = topic_embs.find(messages[idx[c]].topic);
    if (it == topic_embs.end()) throw UnknownTopic(messages[idx[c]].topic);
    centroids[c].topic = it->second;
  }

  std::vector<int> assignment(n, -1);
  for (int iter = 0; iter < cfg.max_iters; ++iter) {
    std::vector<int> next(n, 0);
    for (int i = 0; i < n; ++i) {
      double best_sim = -std::numeric_limits<double>::infinity();
      int best_c = 0;
      for (int c = 0; c < k; ++c) {
        const double s = message_centroid_similarity(messages[i], centroids[c],
                                                     cfg.alpha, topic_embs);
        if (s > best_sim) {
          best_sim = s;
          best_c = c;
        }
      }
      next[i] = best_c;
    }

    // Empty-cluster repair: reseed with the member least similar to its own
    // centroid, drawn from a cluster that can spare one.
    std::vector<int> counts(k, 0);
    for (int c : next) ++counts[c];
    for (int c = 0; c < k; ++c) {
      if (counts[c] > 0) continue;
      int worst = -1;
      double worst_sim = std::numeric_limits<double>::infinity();
      for (int i = 0; i < n; ++i) {
        if (counts[next[i]] <= 1) continue;
        const double s = message_centroid_similarity(messages[i], centroids[next[i]],
                                                     cfg.alpha, topic_embs);
        if (s < worst_sim) {
          worst_sim = s;
          worst = i;
        }
      }
      if (worst < 0) break;  // nothing to spare
      --counts[next[worst]];
      next[worst] = c;
      ++counts[c];
    }

    const bool stable = (next == assignment);
    assignment = std::move(next);
    recompute_centroids(messages, assignment, k, topic_embs, centroids);
    if (stable) break;
  }

  model.centroids = std::move(centroids);
  model.members.assign(k, {});
  for (int i = 0; i < n; ++i) {
    model.assignments[messages[i].id] = assignment[i];
    model.members[assignment[i]].push_back(messages[i].id);
  }
  return model;
}

}  // namespace abin::clustering
