#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "abin/corpus.hpp"
#include "abin/vecmath.hpp"

using namespace abin;
using namespace abin::corpus;
namespace fs = std::filesystem;

namespace {

fs::path temp_dir() {
  static const fs::path dir = [] {
    auto p = fs::temp_directory_path() / "abin_corpus_test";
    fs::create_directories(p);
    return p;
  }();
  return dir;
}

fs::path write_temp(const std::string& name, const std::string& content) {
  const auto p = temp_dir() / name;
  std::ofstream out(p);
  out << content;
  return p;
}

Message make_msg(std::string id, std::string topic, double sentiment,
                 std::vector<float> emb) {
  Message m;
  m.id = std::move(id);
  m.text = "text " + m.id;
  m.topic = std::move(topic);
  m.sentiment = sentiment;
  m.embedding = std::move(emb);
  return m;
}

}  // namespace

TEST_CASE("embed determinism and normalization") {
  const auto a = embed("a a", "t", 8, 7);
  const auto b = embed("a a", "t", 8, 7);
  CHECK(a == b);
  CHECK(std::abs(vec::norm(a) - 1.0) < 1e-6);

  const auto s = embed("some longer piece of text, with punctuation!", "t", 8, 7);
  CHECK(std::abs(vec::norm(s) - 1.0) < 1e-6);

  CHECK_THROWS_AS(embed("", "t", 8, 7), EmptyText);
  CHECK_THROWS_AS(embed("...!,", "t", 8, 7), EmptyText);
}

TEST_CASE("embed keeps related texts closer than unrelated ones") {
  const auto u = embed("cats purr", "t", 256, 7);
  const auto v = embed("cats purr softly", "t", 256, 7);
  const auto w = embed("tax policy", "t", 256, 7);
  CHECK(vec::cosine(u, v) > vec::cosine(u, w));
}

TEST_CASE("ingest jsonl") {
  const auto path = write_temp("ok.jsonl",
      R"({"id":"m1","text":"alpha beta","topic":"a","sentiment":0.2})" "\n"
      R"({"id":"m2","text":"gamma delta","topic":"a","sentiment":0.5})" "\n"
      R"({"id":"m3","text":"epsilon zeta","topic":"b","sentiment":0.9})" "\n");
  const auto base = ingest(path.string(), Format::jsonl, {16, 7});
  CHECK(base.messages.size() == 3);
  CHECK(base.topic_index.size() == 2);
  CHECK(base.topic_index.at("a").size() == 2);
  CHECK(base.topic_index.at("b").size() == 1);
  // sentiment index non-decreasing
  const auto& si = base.sentiment_index.at("a");
  CHECK(si.front().first <= si.back().first);
}

TEST_CASE("ingest rejects bad records") {
  SUBCASE("sentiment out of range") {
    const auto path = write_temp("range.jsonl",
        R"({"id":"m1","text":"x y","topic":"a","sentiment":1.3})" "\n");
    CHECK_THROWS_AS(ingest(path.string(), Format::jsonl, {16, 7}), SentimentOutOfRange);
  }
  SUBCASE("duplicate id") {
    const auto path = write_temp("dup.jsonl",
        R"({"id":"m1","text":"x y","topic":"a","sentiment":0.2})" "\n"
        R"({"id":"m1","text":"z w","topic":"a","sentiment":0.4})" "\n");
    CHECK_THROWS_AS(ingest(path.string(), Format::jsonl, {16, 7}), DuplicateId);
  }
  SUBCASE("malformed line") {
    const auto path = write_temp("bad.jsonl", "{not json\n");
    CHECK_THROWS_AS(ingest(path.string(), Format::jsonl, {16, 7}), MalformedRecord);
  }
}

TEST_CASE("ingest csv with quoted text") {
  const auto path = write_temp("ok.csv",
      "id,text,topic,sentiment\n"
      "m1,\"hello, quoted world\",a,0.25\n"
      "m2,plain text,b,0.75\n");
  const auto base = ingest(path.string(), Format::csv, {16, 7});
  CHECK(base.messages.size() == 2);
  CHECK(base.at("m1").text == "hello, quoted world");
  const auto bad = write_temp("bad.csv", "id,text,topic,sentiment\nm1,x,a,notanumber\n");
  CHECK_THROWS_AS(ingest(bad.string(), Format::csv, {16, 7}), MalformedRecord);
}

TEST_CASE("topic_embedding") {
  std::vector<Message> msgs;
  msgs.push_back(make_msg("m1", "solo", 0.5, {1, 0, 0, 0}));
  msgs.push_back(make_msg("m2", "sym", 0.5, {0.5, 0.5, 0, 0}));
  msgs.push_back(make_msg("m3", "sym", 0.5, {-0.5, -0.5, 0, 0}));
  msgs.push_back(make_msg("m4", "trio", 0.5, {1, 2, 3, 4}));
  msgs.push_back(make_msg("m5", "trio", 0.5, {5, 6, 7, 8}));
  msgs.push_back(make_msg("m6", "trio", 0.5, {0, 1, 2, 0}));
  const auto base = build_base(std::move(msgs), {4, 7});

  const auto solo = topic_embedding(base, "solo");
  CHECK(solo.vector == std::vector<double>{1, 0, 0, 0});

  const auto sym = topic_embedding(base, "sym");
  for (double v : sym.vector) CHECK(v == 0.0);

  const auto trio = topic_embedding(base, "trio");
  CHECK(trio.vector[0] == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(trio.vector[1] == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(trio.vector[2] == doctest::Approx(4.0).epsilon(1e-12));
  CHECK(trio.vector[3] == doctest::Approx(4.0).epsilon(1e-12));

  CHECK_THROWS_AS(topic_embedding(base, "absent"), UnknownTopic);
}

TEST_CASE("topic_embedding equals brute-force mean") {
  std::vector<Message> msgs;
  for (int i = 0; i < 17; ++i)
    msgs.push_back(make_msg("m" + std::to_string(i), i % 3 == 0 ? "a" : "b",
                            double(i) / 20.0,
                            embed("word" + std::to_string(i) + " filler", "x", 8, 3)));
  const auto base = build_base(std::move(msgs), {8, 3});
  for (const auto& [topic, ids] : base.topic_index) {
    std::vector<double> mean(8, 0.0);
    for (const auto& id : ids)
      for (int d = 0; d < 8; ++d) mean[d] += base.at(id).embedding[d];
    for (int d = 0; d < 8; ++d) {
      mean[d] /= double(ids.size());
      CHECK(std::abs(mean[d] - base.topic_embeddings.at(topic)[d]) < 1e-12);
    }
  }
}

TEST_CASE("find_candidates") {
  std::vector<Message> msgs;
  msgs.push_back(make_msg("p1", "t", 0.30, {1, 0}));
  msgs.push_back(make_msg("p2", "t", 0.34, {1, 0}));
  msgs.push_back(make_msg("p3", "t", 0.40, {1, 0}));
  msgs.push_back(make_msg("q1", "u", 0.035, {0, 1}));
  const auto base = build_base(std::move(msgs), {2, 7});

  SUBCASE("window filter, brute-force cross-check") {
    const auto c = find_candidates(base, "t", 0.33, 0.02);
    REQUIRE(c.size() == 1);
    CHECK(c[0].id == "p2");
    for (const auto& m : c) CHECK(std::abs(m.sentiment - 0.33) <= 0.02);
  }
  SUBCASE("eps 0 exact match") {
    const auto c = find_candidates(base, "u", 0.035, 0.0);
    REQUIRE(c.size() == 1);
    CHECK(c[0].id == "q1");
  }
  SUBCASE("eps 1 returns whole topic") {
    CHECK(find_candidates(base, "t", 0.5, 1.0).size() == 3);
  }
  SUBCASE("output is a subset of the topic and sorted by distance") {
    const auto c = find_candidates(base, "t", 0.36, 0.1);
    REQUIRE(c.size() == 3);
    CHECK(c[0].id == "p2");  // 0.02 away
    CHECK(c[1].id == "p3");  // 0.04 away
    CHECK(c[2].id == "p1");  // 0.06 away
    for (const auto& m : c) CHECK(m.topic == "t");
  }
  SUBCASE("unknown topic yields empty list") {
    CHECK(find_candidates(base, "nope", 0.5, 1.0).empty());
  }
}

TEST_CASE("serialize round-trip is bit-exact") {
  const auto path = write_temp("rt.jsonl",
      R"({"id":"m1","text":"alpha beta gamma","topic":"a","sentiment":0.123456789012345})" "\n"
      R"({"id":"m2","text":"delta epsilon","topic":"b","sentiment":0.9})" "\n");
  const auto base1 = ingest(path.string(), Format::jsonl, {32, 7});
  const auto dir = (temp_dir() / "base_rt").string();
  save_base(base1, dir);
  const auto base2 = load_base(dir);

  REQUIRE(base2.messages.size() == base1.messages.size());
  for (std::size_t i = 0; i < base1.messages.size(); ++i) {
    CHECK(base2.messages[i].id == base1.messages[i].id);
    CHECK(base2.messages[i].text == base1.messages[i].text);
    CHECK(base2.messages[i].topic == base1.messages[i].topic);
    CHECK(base2.messages[i].sentiment == base1.messages[i].sentiment);
    CHECK(base2.messages[i].embedding == base1.messages[i].embedding);
  }
  CHECK(base2.topic_embeddings == base1.topic_embeddings);
}
