#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "abin/errors.hpp"

namespace abin::corpus {

/// A recommendable item. Embeddings are fixed-dimension and computed at ingest.
struct Message {
  std::string id;
  std::string text;
  std::string topic;
  double sentiment = 0.0;  // in [0,1]
  std::vector<float> embedding;
};

struct EmbeddingConfig {
  int dim = 256;
  std::uint64_t seed = 7;
};

enum class Format { jsonl, csv };

/// The full information message pool. Immutable after ingest; safe for
/// concurrent reads.
struct MessageBase {
  std::vector<Message> messages;  // ingest order
  std::unordered_map<std::string, std::size_t> by_id;
  // topic -> message ids, sorted
  std::map<std::string, std::vector<std::string>> topic_index;
  // topic -> (sentiment, id), non-decreasing in sentiment then id
  std::map<std::string, std::vector<std::pair<double, std::string>>> sentiment_index;
  // topic -> arithmetic mean of member embeddings (double precision)
  std::map<std::string, std::vector<double>> topic_embeddings;
  EmbeddingConfig embedding_cfg;

  bool contains(const std::string& id) const { return by_id.count(id) > 0; }
  const Message& at(const std::string& id) const;
};

struct TopicEmbedding {
  std::string topic;
  std::vector<double> vector;
};

/// Deterministic token-level feature-hash embedding with sign hashing,
/// L2-normalized. Tokens are maximal alnum runs of the lowercased text;
/// the topic label is folded into the hash seed.
std::vector<float> embed(const std::string& text, const std::string& topic,
                         int dim, std::uint64_t seed);

MessageBase ingest(const std::string& path, Format format,
                   const EmbeddingConfig& cfg);

/// Builds a base from already-constructed messages (test and harness entry).
MessageBase build_base(std::vector<Message> messages, const EmbeddingConfig& cfg);

TopicEmbedding topic_embedding(const MessageBase& base, const std::string& topic);

/// All messages of `topic` with |sentiment - target| <= eps, sorted by
/// |sentiment - target| then id. Unknown topic yields an empty list.
std::vector<Message> find_candidates(const MessageBase& base, const std::string& topic,
                                     double target_sentiment, double eps);

/// Serialized base layout: <dir>/messages.jsonl + <dir>/embeddings.bin
/// (16-byte header: magic "ABINEMB1", u32 count, u32 dim; then count*dim
/// little-endian float32, row-major).
void save_base(const MessageBase& base, const std::string& dir);
MessageBase load_base(const std::string& dir);

}  // namespace abin::corpus
