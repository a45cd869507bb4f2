#include "abin/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "abin/vecmath.hpp"

namespace abin::corpus {

namespace {

constexpr std::uint64_t kFnvOffset = 14695981039346656037ULL;
constexpr std::uint64_t kFnvPrime = 1099511628211ULL;

std::uint64_t fnv1a(const std::string& s, std::uint64_t h) {
  for (unsigned char c : s) {
    h ^= c;
    h *= kFnvPrime;
  }
  return h;
}

std::vector<std::string> tokenize(const std::string& text) {
  std::vector<std::string> tokens;
  std::string cur;
  for (unsigned char c : text) {
    if (std::isalnum(c)) {
      cur += char(std::tolower(c));
    } else if (!cur.empty()) {
      tokens.push_back(std::move(cur));
      cur.clear();
    }
  }
  if (!cur.empty()) tokens.push_back(std::move(cur));
  return tokens;
}

// Minimal RFC-4180-ish CSV line splitter (quotes, doubled-quote escapes).
std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cur += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  fields.push_back(std::move(cur));
  return fields;
}

void build_indexes(MessageBase& base) {
  base.by_id.clear();
  base.topic_index.clear();
  base.sentiment_index.clear();
  base.topic_embeddings.clear();
  for (std::size_t i = 0; i < base.messages.size(); ++i) {
    const Message& m = base.messages[i];
    if (!base.by_id.emplace(m.id, i).second) throw DuplicateId(m.id);
    base.topic_index[m.topic].push_back(m.id);
    base.sentiment_index[m.topic].emplace_back(m.sentiment, m.id);
  }
  for (auto& [topic, ids] : base.topic_index) std::sort(ids.begin(), ids.end());
  for (auto& [topic, entries] : base.sentiment_index)
    std::sort(entries.begin(), entries.end());
  // Topic embeddings: arithmetic mean of member embeddings (double accumulation).
  const int dim = base.embedding_cfg.dim;
  for (const auto& [topic, ids] : base.topic_index) {
    std::vector<double> acc(dim, 0.0);
    for (const auto& id : ids) {
      const Message& m = base.at(id);
      for (int d = 0; d < dim; ++d) acc[d] += m.embedding[d];
    }
    for (int d = 0; d < dim; ++d) acc[d] /= double(ids.size());
    base.topic_embeddings[topic] = std::move(acc);
  }
}

Message message_from_fields(std::string id, std::string text, std::string topic,
                            double sentiment, const EmbeddingConfig& cfg) {
  Message m;
  m.id = std::move(id);
  m.text = std::move(text);
  m.topic = std::move(topic);
  m.sentiment = sentiment;
  if (!(m.sentiment >= 0.0 && m.sentiment <= 1.0)) throw SentimentOutOfRange(m.id);
  m.embedding = embed(m.text, m.topic, cfg.dim, cfg.seed);
  return m;
}

}  // namespace

const Message& MessageBase::at(const std::string& id) const {
  auto it = by_id.find(id);
  if (it == by_id.end()) throw AbinError("no such message id: " + id);
  return messages[it->second];
}

std::vector<float> embed(const std::string& text, const std::string& topic, int dim,
                         std::uint64_t seed) {
  if (dim < 2) throw AbinError("embedding dim must be >= 2");
  const auto tokens = tokenize(text);
  if (tokens.empty()) throw EmptyText();
  // Topic participates via the hash seed, so identical texts under different
  // topics land in unrelated buckets.
  std::uint64_t base_seed = fnv1a(topic, kFnvOffset ^ seed);
  std::vector<double> acc(dim, 0.0);
  for (const auto& tok : tokens) {
    const std::uint64_t h = fnv1a(tok, base_seed);
    const std::size_t bucket = std::size_t(h % std::uint64_t(dim));
    const double sign = ((h >> 32) & 1u) ? 1.0 : -1.0;
    acc[bucket] += sign;
  }
  double norm = 0.0;
  for (double v : acc) norm += v * v;
  norm = std::sqrt(norm);
  std::vector<float> out(dim, 0.0f);
  if (norm > 0.0)
    for (int d = 0; d < dim; ++d) out[d] = float(acc[d] / norm);
  return out;
}

MessageBase build_base(std::vector<Message> messages, const EmbeddingConfig& cfg) {
  MessageBase base;
  base.embedding_cfg = cfg;
  base.messages = std::move(messages);
  for (const Message& m : base.messages) {
    if (!(m.sentiment >= 0.0 && m.sentiment <= 1.0)) throw SentimentOutOfRange(m.id);
    if (int(m.embedding.size()) != cfg.dim)
      throw DimensionMismatch(m.embedding.size(), std::size_t(cfg.dim));
  }
  build_indexes(base);
  return base;
}

MessageBase ingest(const std::string& path, Format format, const EmbeddingConfig& cfg) {
  std::ifstream in(path);
  if (!in) throw AbinError("cannot open corpus file: " + path);
  std::vector<Message> msgs;
  std::string line;
  std::size_t line_no = 0;
  if (format == Format::jsonl) {
    while (std::getline(in, line)) {
      ++line_no;
      if (line.empty()) continue;
      nlohmann::json j = nlohmann::json::parse(line, nullptr, false);
      if (j.is_discarded() || !j.is_object() || !j.contains("id") || !j.contains("text") ||
          !j.contains("topic") || !j.contains("sentiment") || !j["id"].is_string() ||
          !j["text"].is_string() || !j["topic"].is_string() || !j["sentiment"].is_number())
        throw MalformedRecord(line_no);
      msgs.push_back(message_from_fields(j["id"].get<std::string>(),
                                         j["text"].get<std::string>(),
                                         j["topic"].get<std::string>(),
                                         j["sentiment"].get<double>(), cfg));
    }
  } else {
    if (!std::getline(in, line)) throw MalformedRecord(1, "missing header");
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != "id,text,topic,sentiment")
      throw MalformedRecord(1, "expected header id,text,topic,sentiment");
    while (std::getline(in, line)) {
      ++line_no;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line.empty()) continue;
      auto fields = split_csv_line(line);
      if (fields.size() != 4) throw MalformedRecord(line_no);
      double sentiment;
      try {
        std::size_t pos = 0;
        sentiment = std::stod(fields[3], &pos);
        if (pos != fields[3].size()) throw MalformedRecord(line_no);
      } catch (const std::logic_error&) {
        throw MalformedRecord(line_no);
      }
      msgs.push_back(message_from_fields(std::move(fields[0]), std::move(fields[1]),
                                         std::move(fields[2]), sentiment, cfg));
    }
  }
  MessageBase base;
  base.embedding_cfg = cfg;
  base.messages = std::move(msgs);
  build_indexes(base);
  return base;
}

TopicEmbedding topic_embedding(const MessageBase& base, const std::string& topic) {
  auto it = base.topic_embeddings.find(topic);
  if (it == base.topic_embeddings.end()) throw UnknownTopic(topic);
  return TopicEmbedding{topic, it->second};
}

std::vector<Message> find_candidates(const MessageBase& base, const std::string& topic,
                                     double target_sentiment, double eps) {
  std::vector<Message> out;
  auto it = base.sentiment_index.find(topic);
  if (it == base.sentiment_index.end()) return out;
  const auto& entries = it->second;
  auto lo = std::lower_bound(entries.begin(), entries.end(),
                             std::make_pair(target_sentiment - eps, std::string()));
  for (auto p = lo; p != entries.end() && p->first <= target_sentiment + eps; ++p)
    out.push_back(base.at(p->second));
  std::sort(out.begin(), out.end(), [&](const Message& a, const Message& b) {
    const double da = std::abs(a.sentiment - target_sentiment);
    const double db = std::abs(b.sentiment - target_sentiment);
    if (da != db) return da < db;
    return a.id < b.id;
  });
  return out;
}

void save_base(const MessageBase& base, const std::string& dir) {
  namespace fs = std::filesystem;
  fs::create_directories(dir);
  {
    std::ofstream out(fs::path(dir) / "messages.jsonl");
    for (const Message& m : base.messages) {
      nlohmann::json j{{"id", m.id}, {"text", m.text}, {"topic", m.topic},
                       {"sentiment", m.sentiment}};
      out << j.dump() << '\n';
    }
  }
  std::ofstream bin(fs::path(dir) / "embeddings.bin", std::ios::binary);
  bin.write("ABINEMB1", 8);
  const std::uint32_t count = std::uint32_t(base.messages.size());
  const std::uint32_t dim = std::uint32_t(base.embedding_cfg.dim);
  bin.write(reinterpret_cast<const char*>(&count), 4);
  bin.write(reinterpret_cast<const char*>(&dim), 4);
  for (const Message& m : base.messages)
    bin.write(reinterpret_cast<const char*>(m.embedding.data()),
              std::streamsize(m.embedding.size() * sizeof(float)));
}

MessageBase load_base(const std::string& dir) {
  namespace fs = std::filesystem;
  std::ifstream bin(fs::path(dir) / "embeddings.bin", std::ios::binary);
  if (!bin) throw AbinError("cannot open embeddings.bin in: " + dir);
  char magic[8];
  bin.read(magic, 8);
  if (bin.gcount() != 8 || std::memcmp(magic, "ABINEMB1", 8) != 0)
    throw AbinError("bad embeddings.bin magic in: " + dir);
  std::uint32_t count = 0, dim = 0;
  bin.read(reinterpret_cast<char*>(&count), 4);
  bin.read(reinterpret_cast<char*>(&dim), 4);

  std::ifstream in(fs::path(dir) / "messages.jsonl");
  if (!in) throw AbinError("cannot open messages.jsonl in: " + dir);
  MessageBase base;
  base.embedding_cfg.dim = int(dim);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    nlohmann::json j = nlohmann::json::parse(line, nullptr, false);
    if (j.is_discarded()) throw MalformedRecord(line_no);
    Message m;
    m.id = j.at("id").get<std::string>();
    m.text = j.at("text").get<std::string>();
    m.topic = j.at("topic").get<std::string>();
    m.sentiment = j.at("sentiment").get<double>();
    if (!(m.sentiment >= 0.0 && m.sentiment <= 1.0)) throw SentimentOutOfRange(m.id);
    m.embedding.resize(dim);
    bin.read(reinterpret_cast<char*>(m.embedding.data()),
             std::streamsize(dim * sizeof(float)));
    if (std::size_t(bin.gcount()) != dim * sizeof(float))
      throw AbinError("embeddings.bin truncated in: " + dir);
    base.messages.push_back(std::move(m));
  }
  if (base.messages.size() != count)
    throw AbinError("embeddings.bin count mismatch in: " + dir);
  build_indexes(base);
  return base;
}

}  // namespace abin::corpus
