#include <doctest.h>

#include <cmath>
#include <string>
#include <vector>

#include "abin/metrics.hpp"
#include "abin/yinyang.hpp"

using namespace abin;
using namespace abin::metrics;

namespace {

corpus::Message msg(std::string id, std::string topic, double sentiment) {
  corpus::Message m;
  m.id = std::move(id);
  m.text = "t " + m.id;
  m.topic = std::move(topic);
  m.sentiment = sentiment;
  m.embedding = {1.0f, 0.0f};
  return m;
}

agents::RecommendationRound round_of(std::vector<corpus::Message> list) {
  agents::RecommendationRound r;
  r.final_list = std::move(list);
  r.opa_list = r.final_list;
  return r;
}

}  // namespace

TEST_CASE("coverage is the mean per-topic share of base sentiment") {
  // base topic t sums to 2.0, topic u to 0.5
  auto base = corpus::build_base({msg("t1", "t", 0.9), msg("t2", "t", 0.9),
                                  msg("t3", "t", 0.2), msg("u1", "u", 0.5)},
                                 {2, 7});

  SUBCASE("single topic, 0.2 of 2.0") {
    CHECK(coverage(round_of({msg("t3", "t", 0.2)}), base) ==
          doctest::Approx(0.1).epsilon(1e-12));
  }
  SUBCASE("two topics averaged") {
    const auto r = round_of({msg("t3", "t", 0.2), msg("u1", "u", 0.5)});
    CHECK(coverage(r, base) == doctest::Approx((0.1 + 1.0) / 2.0).epsilon(1e-12));
  }
  SUBCASE("showing every message of a topic gives share 1") {
    const auto r = round_of({msg("u1", "u", 0.5)});
    CHECK(coverage(r, base) == doctest::Approx(1.0).epsilon(1e-12));
  }
  SUBCASE("empty list gives 0") {
    CHECK(coverage(round_of({}), base) == 0.0);
  }
}

TEST_CASE("repetition rate counts duplicate sentiment values per topic") {
  SUBCASE("three messages, one distinct value") {
    const auto r = round_of({msg("a", "t", 0.4), msg("b", "t", 0.4), msg("c", "t", 0.4)});
    CHECK(repetition_rate(r) == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
  }
  SUBCASE("all distinct gives 0") {
    const auto r = round_of({msg("a", "t", 0.1), msg("b", "t", 0.2), msg("c", "t", 0.3)});
    CHECK(repetition_rate(r) == 0.0);
  }
  SUBCASE("mixed topics averaged") {
    const auto r = round_of({msg("a", "t", 0.4), msg("b", "t", 0.4),  // 1/2
                             msg("c", "u", 0.1)});                    // 0
    CHECK(repetition_rate(r) == doctest::Approx(0.25).epsilon(1e-12));
  }
  SUBCASE("empty round gives 0") {
    CHECK(repetition_rate(round_of({})) == 0.0);
  }
}

TEST_CASE("precision and hit") {
  const std::vector<agents::Decision> d{{"a", true}, {"b", false}, {"c", false}, {"d", true}};
  const auto [pre, hit] = precision_and_hit(d);
  CHECK(pre == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(hit == 1);

  const std::vector<agents::Decision> none{{"a", false}, {"b", false}};
  const auto [pre0, hit0] = precision_and_hit(none);
  CHECK(pre0 == 0.0);
  CHECK(hit0 == 0);

  CHECK_THROWS_AS(precision_and_hit({}), EmptyDecisions);
}

TEST_CASE("per-topic balance gap of a round") {
  const auto r = round_of({msg("a", "t", 0.2), msg("b", "t", 0.74), msg("c", "u", 0.8)});
  const auto bd = round_best_diff(r);
  REQUIRE(bd.size() == 2);
  CHECK(bd.at("t") == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(bd.at("u") == doctest::Approx(0.8).epsilon(1e-12));
}

TEST_CASE("compute assembles all fields consistently") {
  auto base = corpus::build_base({msg("a", "t", 0.2), msg("b", "t", 0.74)}, {2, 7});
  const auto r = round_of({msg("a", "t", 0.2), msg("b", "t", 0.74)});
  const std::vector<agents::Decision> d{{"a", true}, {"b", true}};
  const auto m = compute(r, d, base);
  CHECK(m.coverage == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(m.rr == 0.0);
  CHECK(m.pre == 1.0);
  CHECK(m.hit == 1);
  CHECK(m.best_diff_mean == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("aggregate mean and population stddev") {
  RoundMetrics a, b;
  a.coverage = 0.2;
  b.coverage = 0.4;
  a.pre = 1.0;
  b.pre = 0.0;
  a.hit = 1;
  b.hit = 0;

  const auto s = aggregate({a, b});
  CHECK(s.rounds == 2);
  CHECK(s.coverage.mean == doctest::Approx(0.3).epsilon(1e-12));
  CHECK(s.coverage.stddev == doctest::Approx(0.1).epsilon(1e-12));
  CHECK(s.pre.stddev == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(s.hit.mean == doctest::Approx(0.5).epsilon(1e-12));

  const auto single = aggregate({a});
  CHECK(single.coverage.stddev == 0.0);

  CHECK_THROWS_AS(aggregate({}), EmptyInput);
}

TEST_CASE("percentage deltas against a baseline") {
  RoundMetrics a, b;
  a.coverage = 0.3;
  b.coverage = 0.4;
  a.pre = 0.0;
  b.pre = 0.2;
  const auto base_sum = aggregate({a});
  const auto cur_sum = aggregate({b});
  const auto d = delta_percent(cur_sum, base_sum);
  CHECK(d.coverage == doctest::Approx(100.0 / 3.0).epsilon(1e-9));
  CHECK(std::isnan(d.pre));  // baseline mean of 0 has no defined ratio
}
