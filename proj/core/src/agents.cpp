#include "abin/agents.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <random>
#include <set>

#include "abin/clustering.hpp"
#include "abin/metrics.hpp"
#include "abin/vecmath.hpp"
#include "abin/yinyang.hpp"

namespace abin::agents {

namespace {

constexpr std::uint64_t kFnvOffset = 14695981039346656037ULL;
constexpr std::uint64_t kFnvPrime = 1099511628211ULL;

std::uint64_t mix(std::uint64_t h, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) {
    h ^= (v >> (8 * i)) & 0xffu;
    h *= kFnvPrime;
  }
  return h;
}

std::uint64_t mix(std::uint64_t h, const std::string& s) {
  for (unsigned char c : s) {
    h ^= c;
    h *= kFnvPrime;
  }
  return h;
}

double uniform_draw(std::uint64_t seed) {
  std::mt19937_64 g(seed);
  return double(g() >> 11) * 0x1.0p-53;
}

double mapped_similarity(const std::vector<double>& preference,
                         const std::vector<float>& embedding) {
  return (vec::cosine_or_zero(preference, embedding) + 1.0) / 2.0;
}

}  // namespace

OpaResult opa_similarity_recommend(const UserState& user, const corpus::MessageBase& base,
                                   int k, const std::unordered_set<std::string>& exclude) {
  if (k < 1) throw AbinError("k_recommend must be >= 1");
  std::unordered_set<std::string> skip = exclude;
  for (const auto& h : user.history)
    if (h.accepted) skip.insert(h.message_id);

  std::vector<std::pair<double, const corpus::Message*>> ranked;
  for (const auto& m : base.messages) {
    if (skip.count(m.id)) continue;
    ranked.emplace_back(vec::cosine_or_zero(user.preference, m.embedding), &m);
  }
  std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first > b.first;
    return a.second->id < b.second->id;
  });

  OpaResult out;
  for (const auto& [sim, msg] : ranked) {
    if (int(out.messages.size()) == k) break;
    out.messages.push_back(*msg);
  }
  out.exhausted = int(out.messages.size()) < k;
  return out;
}

RecommendationRound ina_process(const std::vector<corpus::Message>& opa_list,
                                const UserState& user, const corpus::MessageBase& base,
                                const InaConfig& cfg, int round_index) {
  if (opa_list.empty()) throw EmptyInput();

  RecommendationRound round;
  round.round = round_index;
  round.opa_list = opa_list;

  clustering::ClusteringConfig ccfg;
  ccfg.alpha = cfg.alpha;
  ccfg.k = cfg.k_clusters;
  ccfg.max_iters = cfg.max_iters;
  ccfg.seed = cfg.cluster_seed;
  const auto model = clustering::kmeans(opa_list, ccfg, base.topic_embeddings);
  if (cfg.counters) ++cfg.counters->kmeans_calls;

  const auto scores = dcia::score_clusters(model, base);
  round.target_cluster = dcia::select_target(scores, user.memory);
  if (cfg.counters) ++cfg.counters->dcia_calls;

  // Topics of the target cluster, with member sentiments in member order.
  std::map<std::string, std::vector<double>> topic_scores;
  for (const auto& id : model.members[round.target_cluster]) {
    const auto& m = base.at(id);
    topic_scores[m.topic].push_back(m.sentiment);
  }

  std::set<std::string> used;
  for (const auto& m : opa_list) used.insert(m.id);

  const int max_widenings = int(std::ceil(1.0 / cfg.tol));
  for (const auto& [topic, sentiments] : topic_scores) {
    yinyang::SentimentList list{topic, sentiments};
    const auto pairing = yinyang::if_balance(list);
    if (cfg.counters) ++cfg.counters->yync_calls;
    if (pairing.remain.empty()) continue;

    auto pool_it = base.sentiment_index.find(topic);
    if (pool_it == base.sentiment_index.end() || pool_it->second.empty()) {
      for (double r : pairing.remain) round.search_misses.emplace_back(topic, r);
      continue;
    }
    std::vector<double> pool;
    pool.reserve(pool_it->second.size());
    for (const auto& [s, id] : pool_it->second) pool.push_back(s);

    const auto complements = yinyang::find_match_scores(pairing.remain, pool, cfg.tol);
    for (double q : complements) {
      round.complement_queries.emplace_back(topic, q);
      // Searching: widen the candidate window in tol steps if every exact
      // candidate is already in the round.
      const corpus::Message* chosen = nullptr;
      double chosen_sim = -std::numeric_limits<double>::infinity();
      for (int w = 0; w <= max_widenings && !chosen; ++w) {
        const auto candidates =
            corpus::find_candidates(base, topic, q, cfg.eps_search + w * cfg.tol);
        for (const auto& cand : candidates) {
          if (used.count(cand.id)) continue;
          const double sim = vec::cosine_or_zero(user.preference, cand.embedding);
          if (!chosen || sim > chosen_sim || (sim == chosen_sim && cand.id < chosen->id)) {
            chosen = &base.at(cand.id);
            chosen_sim = sim;
          }
        }
      }
      if (chosen) {
        round.injected.push_back(*chosen);
        used.insert(chosen->id);
      } else {
        round.search_misses.emplace_back(topic, q);
      }
    }
  }

  round.final_list = round.opa_list;
  round.final_list.insert(round.final_list.end(), round.injected.begin(),
                          round.injected.end());
  return round;
}

std::vector<Decision> ua_respond(const RecommendationRound& round, const UserState& user,
                                 std::uint64_t rng_seed) {
  if (round.final_list.empty()) throw EmptyInput();
  std::vector<Decision> decisions;
  decisions.reserve(round.final_list.size());
  for (std::size_t i = 0; i < round.final_list.size(); ++i) {
    const auto& m = round.final_list[i];
    std::uint64_t s = kFnvOffset;
    s = mix(s, rng_seed);
    s = mix(s, user.id);
    s = mix(s, std::uint64_t(round.round));
    s = mix(s, std::uint64_t(i));
    const double u = uniform_draw(s);
    const double p = mapped_similarity(user.preference, m.embedding);
    decisions.push_back({m.id, p > u});
  }
  return decisions;
}

void ua_update_preference(UserState& user, const std::vector<corpus::Message>& accepted,
                          double eta) {
  if (accepted.empty()) return;
  const std::size_t dim = user.preference.size();
  std::vector<double> h(dim, 1.0);
  for (const auto& m : accepted)
    for (std::size_t d = 0; d < dim; ++d) h[d] *= m.embedding[d];
  double hnorm = 0.0;
  for (double v : h) hnorm += v * v;
  hnorm = std::sqrt(hnorm);
  if (hnorm < 1e-12) return;

  std::vector<double> next(dim);
  for (std::size_t d = 0; d < dim; ++d)
    next[d] = user.preference[d] + eta * (h[d] / hnorm);
  double nnorm = 0.0;
  for (double v : next) nnorm += v * v;
  nnorm = std::sqrt(nnorm);
  if (nnorm < 1e-12) return;
  for (std::size_t d = 0; d < dim; ++d) user.preference[d] = next[d] / nnorm;
}

RoundOutput run_round(UserState& user, const corpus::MessageBase& base,
                      RecommenderInterface& recommender, const RunConfig& cfg,
                      int round_index, std::uint64_t seed) {
  RoundOutput out;
  const auto opa = recommender.recommend(user, base, cfg.k_recommend, {});
  if (opa.empty()) {
    out.skipped = true;
    out.round.round = round_index;
    return out;
  }

  if (cfg.mode == Mode::abin) {
    InaConfig ina = cfg.ina;
    // Per-round clustering seed, stable per (seed, user, round).
    std::uint64_t s = kFnvOffset;
    s = mix(s, seed);
    s = mix(s, user.id);
    s = mix(s, std::uint64_t(round_index));
    ina.cluster_seed = s;
    try {
      out.round = ina_process(opa, user, base, ina, round_index);
    } catch (const AllClustersBlocked&) {
      user.memory.rejection_count.clear();
      user.memory.blocked.clear();
      out.memory_reset = true;
      out.round = ina_process(opa, user, base, ina, round_index);
    }
  } else {
    out.round.round = round_index;
    out.round.opa_list = opa;
    out.round.final_list = opa;
  }

  out.decisions = ua_respond(out.round, user, cfg.acceptance_seed);

  std::vector<corpus::Message> accepted;
  std::unordered_set<std::string> injected_ids;
  for (const auto& m : out.round.injected) injected_ids.insert(m.id);
  int injected_rejections = 0;
  for (std::size_t i = 0; i < out.decisions.size(); ++i) {
    const auto& d = out.decisions[i];
    user.history.push_back({round_index, d.message_id, d.accepted});
    if (d.accepted)
      accepted.push_back(out.round.final_list[i]);
    else if (injected_ids.count(d.message_id))
      ++injected_rejections;
  }

  ua_update_preference(user, accepted, cfg.eta);
  if (cfg.mode == Mode::abin && out.round.target_cluster >= 0)
    dcia::record_feedback(user.memory, out.round.target_cluster, injected_rejections);
  recommender.notify_feedback(user, out.decisions);
  return out;
}

}  // namespace abin::agents
