#pragma once

#include <stdexcept>
#include <string>

namespace abin {

class AbinError : public std::runtime_error {
 public:
  explicit AbinError(const std::string& what) : std::runtime_error(what) {}
};

class MalformedRecord : public AbinError {
 public:
  explicit MalformedRecord(std::size_t line, const std::string& detail = "")
      : AbinError("malformed record at line " + std::to_string(line) +
                  (detail.empty() ? "" : ": " + detail)),
        line(line) {}
  std::size_t line;
};

class DuplicateId : public AbinError {
 public:
  explicit DuplicateId(const std::string& id)
      : AbinError("duplicate message id: " + id), id(id) {}
  std::string id;
};

class SentimentOutOfRange : public AbinError {
 public:
  explicit SentimentOutOfRange(const std::string& id)
      : AbinError("sentiment out of [0,1] for message: " + id), id(id) {}
  std::string id;
};

class EmptyText : public AbinError {
 public:
  EmptyText() : AbinError("text has zero tokens") {}
};

class UnknownTopic : public AbinError {
 public:
  explicit UnknownTopic(const std::string& topic)
      : AbinError("unknown topic: " + topic), topic(topic) {}
  std::string topic;
};

class DomainError : public AbinError {
 public:
  explicit DomainError(double value)
      : AbinError("sentiment value outside [0,1]: " + std::to_string(value)) {}
};

class EmptyPool : public AbinError {
 public:
  EmptyPool() : AbinError("sentiment pool is empty") {}
};

class ZeroVector : public AbinError {
 public:
  ZeroVector() : AbinError("cosine of a zero vector is undefined") {}
};

class DimensionMismatch : public AbinError {
 public:
  DimensionMismatch(std::size_t a, std::size_t b)
      : AbinError("vector dimension mismatch: " + std::to_string(a) + " vs " +
                  std::to_string(b)) {}
};

class TopicAbsentInCluster : public AbinError {
 public:
  explicit TopicAbsentInCluster(const std::string& topic)
      : AbinError("no cluster member carries topic: " + topic) {}
};

class EmptyCluster : public AbinError {
 public:
  EmptyCluster() : AbinError("cluster has no members") {}
};

class NoClusters : public AbinError {
 public:
  NoClusters() : AbinError("cluster model has no clusters") {}
};

class AllClustersBlocked : public AbinError {
 public:
  AllClustersBlocked() : AbinError("every cluster is blocked by the memory mechanism") {}
};

class EmptyDecisions : public AbinError {
 public:
  EmptyDecisions() : AbinError("decision list is empty") {}
};

class EmptyInput : public AbinError {
 public:
  EmptyInput() : AbinError("input list is empty") {}
};

class BadMix : public AbinError {
 public:
  explicit BadMix(double sum)
      : AbinError("sentiment mix proportions sum to " + std::to_string(sum) +
                  ", expected 1") {}
};

class MissingManifest : public AbinError {
 public:
  explicit MissingManifest(const std::string& dir)
      : AbinError("no manifest.json in run directory: " + dir) {}
};

class ConfigError : public AbinError {
 public:
  explicit ConfigError(const std::string& what) : AbinError("config: " + what) {}
};

}  // namespace abin
