#pragma once

#include <string>
#include <utility>
#include <vector>

namespace abin::yinyang {

enum class Polarity { Yin, Neutral, Yang };

struct SentimentList {
  std::string topic;
  std::vector<double> scores;  // each in [0,1]
};

struct ToleranceInterval {
  double center_x = 0.0;
  double center_y = 0.0;
  double radius = 0.0;
  double lo = 0.0;
  double hi = 0.0;
};

struct PairingResult {
  std::vector<std::pair<double, double>> pairs;  // (o, o+)
  std::vector<double> remain;                    // unpaired, in processing order
};

/// The S-curve: f(o) = 1/2 + (1-2o) * sqrt(1/4 - (o-1/2)^2).
double curve(double o);

/// Yin below 0.5, Yang above, Neutral at 0.5 (within 1e-12).
Polarity classify(double o);

/// Acceptance band around (o, curve(o)). The radius is the shorter distance
/// from (o, curve(o)) to the two intersections of x=o with the outer unit
/// circle centered (0.5, 0.5), i.e. 2 * sqrt(1/4 - (o-1/2)^2) * min(o, 1-o).
ToleranceInterval tolerance_interval(double o);

/// Greedy pairing, most-extreme-first. A score pairs with any unconsumed
/// score inside its tolerance interval (closest to the interval center wins,
/// ties to the smaller value). Empty remainder means the list is neutralized.
PairingResult if_balance(const SentimentList& list);

/// For each unpaired score, picks the pool value inside its (possibly
/// symmetrically widened) tolerance interval closest to curve(r). Widening
/// proceeds in steps of `tol`, clamped to [0,1], at most ceil(1/tol) times.
/// Pool values may be reused across remainders.
std::vector<double> find_match_scores(const std::vector<double>& remain,
                                      const std::vector<double>& pool, double tol);

/// |sum of curve(o) over Yin-and-Neutral scores - sum of o over Yang scores|.
double best_diff(const SentimentList& list);

}  // namespace abin::yinyang
