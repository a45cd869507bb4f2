#include "abin/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include "abin/yinyang.hpp"

namespace abin::metrics {

namespace {

std::map<std::string, std::vector<double>> sentiments_by_topic(
    const std::vector<corpus::Message>& list) {
  std::map<std::string, std::vector<double>> out;
  for (const auto& m : list) out[m.topic].push_back(m.sentiment);
  return out;
}

double nan_or(double num, double den) {
  return den == 0.0 ? std::numeric_limits<double>::quiet_NaN() : num / den;
}

}  // namespace

double coverage(const agents::RecommendationRound& round, const corpus::MessageBase& base) {
  const auto by_topic = sentiments_by_topic(round.final_list);
  double sum = 0.0;
  int n = 0;
  for (const auto& [topic, scores] : by_topic) {
    auto it = base.sentiment_index.find(topic);
    if (it == base.sentiment_index.end()) continue;
    double base_sum = 0.0;
    for (const auto& [s, id] : it->second) base_sum += s;
    if (base_sum == 0.0) continue;
    double list_sum = 0.0;
    for (double s : scores) list_sum += s;
    sum += list_sum / base_sum;
    ++n;
  }
  return n == 0 ? 0.0 : sum / n;
}

double repetition_rate(const agents::RecommendationRound& round) {
  const auto by_topic = sentiments_by_topic(round.final_list);
  if (by_topic.empty()) return 0.0;
  double sum = 0.0;
  for (const auto& [topic, scores] : by_topic) {
    const std::set<double> distinct(scores.begin(), scores.end());
    sum += double(scores.size() - distinct.size()) / double(scores.size());
  }
  return sum / double(by_topic.size());
}

std::pair<double, int> precision_and_hit(const std::vector<agents::Decision>& decisions) {
  if (decisions.empty()) throw EmptyDecisions();
  int accepted = 0;
  for (const auto& d : decisions)
    if (d.accepted) ++accepted;
  const double pre = double(accepted) / double(decisions.size());
  return {pre, pre > 0.0 ? 1 : 0};
}

std::map<std::string, double> round_best_diff(const agents::RecommendationRound& round) {
  std::map<std::string, double> out;
  for (const auto& [topic, scores] : sentiments_by_topic(round.final_list))
    out[topic] = yinyang::best_diff({topic, scores});
  return out;
}

RoundMetrics compute(const agents::RecommendationRound& round,
                     const std::vector<agents::Decision>& decisions,
                     const corpus::MessageBase& base) {
  RoundMetrics m;
  m.coverage = coverage(round, base);
  m.rr = repetition_rate(round);
  std::tie(m.pre, m.hit) = precision_and_hit(decisions);
  m.best_diff_per_topic = round_best_diff(round);
  if (!m.best_diff_per_topic.empty()) {
    double sum = 0.0;
    for (const auto& [t, v] : m.best_diff_per_topic) sum += v;
    m.best_diff_mean = sum / double(m.best_diff_per_topic.size());
  }
  return m;
}

namespace {

MetricStats stats_of(const std::vector<double>& values) {
  MetricStats s;
  if (values.empty()) return s;
  double sum = 0.0;
  for (double v : values) sum += v;
  s.mean = sum / double(values.size());
  double var = 0.0;
  for (double v : values) var += (v - s.mean) * (v - s.mean);
  s.stddev = std::sqrt(var / double(values.size()));
  return s;
}

}  // namespace

Summary aggregate(const std::vector<RoundMetrics>& reports) {
  if (reports.empty()) throw EmptyInput();
  Summary s;
  s.rounds = reports.size();
  std::vector<double> cov, rr, pre, hit, bd;
  for (const auto& r : reports) {
    cov.push_back(r.coverage);
    rr.push_back(r.rr);
    pre.push_back(r.pre);
    hit.push_back(double(r.hit));
    bd.push_back(r.best_diff_mean);
  }
  s.coverage = stats_of(cov);
  s.rr = stats_of(rr);
  s.pre = stats_of(pre);
  s.hit = stats_of(hit);
  s.best_diff_mean = stats_of(bd);
  return s;
}

DeltaReport delta_percent(const Summary& current, const Summary& baseline) {
  DeltaReport d;
  d.coverage = nan_or(current.coverage.mean - baseline.coverage.mean, baseline.coverage.mean) * 100.0;
  d.rr = nan_or(current.rr.mean - baseline.rr.mean, baseline.rr.mean) * 100.0;
  d.pre = nan_or(current.pre.mean - baseline.pre.mean, baseline.pre.mean) * 100.0;
  d.hit = nan_or(current.hit.mean - baseline.hit.mean, baseline.hit.mean) * 100.0;
  d.best_diff_mean = nan_or(current.best_diff_mean.mean - baseline.best_diff_mean.mean,
                            baseline.best_diff_mean.mean) * 100.0;
  return d;
}

}  // namespace abin::metrics
