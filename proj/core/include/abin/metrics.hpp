#pragma once

#include <map>
#include <string>
#include <vector>

#include "abin/agents.hpp"
#include "abin/corpus.hpp"

namespace abin::metrics {

struct RoundMetrics {
  double coverage = 0.0;
  double rr = 0.0;
  double pre = 0.0;
  int hit = 0;
  std::map<std::string, double> best_diff_per_topic;
  double best_diff_mean = 0.0;
};

/// Mean over topics present in the final list of (list sentiment sum / base
/// sentiment sum for that topic). Topics whose base sum is 0 are skipped.
double coverage(const agents::RecommendationRound& round, const corpus::MessageBase& base);

/// Mean over topics of (c - u)/c, where c counts messages of the topic and u
/// counts distinct sentiment values among them.
double repetition_rate(const agents::RecommendationRound& round);

std::pair<double, int> precision_and_hit(const std::vector<agents::Decision>& decisions);

std::map<std::string, double> round_best_diff(const agents::RecommendationRound& round);

RoundMetrics compute(const agents::RecommendationRound& round,
                     const std::vector<agents::Decision>& decisions,
                     const corpus::MessageBase& base);

struct MetricStats {
  double mean = 0.0;
  double stddev = 0.0;  // population standard deviation
};

struct Summary {
  std::size_t rounds = 0;
  MetricStats coverage;
  MetricStats rr;
  MetricStats pre;
  MetricStats hit;
  MetricStats best_diff_mean;
};

Summary aggregate(const std::vector<RoundMetrics>& reports);

/// Percentage change per metric, (new - old)/old * 100; NaN when old is 0.
struct DeltaReport {
  double coverage = 0.0;
  double rr = 0.0;
  double pre = 0.0;
  double hit = 0.0;
  double best_diff_mean = 0.0;
};

DeltaReport delta_percent(const Summary& current, const Summary& baseline);

}  // namespace abin::metrics
