#include "abin/yinyang.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "abin/errors.hpp"

namespace abin::yinyang {

namespace {

constexpr double kNeutralTol = 1e-12;

void check_domain(double o) {
  if (!(o >= 0.0 && o <= 1.0)) throw DomainError(o);
}

// sqrt(1/4 - (o - 1/2)^2), guarded against tiny negative round-off.
double half_chord(double o) {
  const double d = o - 0.5;
  return std::sqrt(std::max(0.0, 0.25 - d * d));
}

}  // namespace

double curve(double o) {
  check_domain(o);
  return 0.5 + (1.0 - 2.0 * o) * half_chord(o);
}

Polarity classify(double o) {
  check_domain(o);
  if (std::abs(o - 0.5) <= kNeutralTol) return Polarity::Neutral;
  return o < 0.5 ? Polarity::Yin : Polarity::Yang;
}

ToleranceInterval tolerance_interval(double o) {
  check_domain(o);
  ToleranceInterval t;
  t.center_x = o;
  t.center_y = curve(o);
  t.radius = 2.0 * half_chord(o) * std::min(o, 1.0 - o);
  t.lo = std::max(0.0, t.center_y - t.radius);
  t.hi = std::min(1.0, t.center_y + t.radius);
  return t;
}

PairingResult if_balance(const SentimentList& list) {
  const auto& scores = list.scores;
  for (double o : scores) check_domain(o);

  // Most-extreme-first; ties broken by the smaller value.
  std::vector<std::size_t> order(scores.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const double ea = std::abs(scores[a] - 0.5);
    const double eb = std::abs(scores[b] - 0.5);
    if (ea != eb) return ea > eb;
    if (scores[a] != scores[b]) return scores[a] < scores[b];
    return a < b;
  });

  PairingResult result;
  std::vector<bool> consumed(scores.size(), false);
  for (std::size_t i : order) {
    if (consumed[i]) continue;
    consumed[i] = true;
    const ToleranceInterval t = tolerance_interval(scores[i]);
    std::size_t best = std::numeric_limits<std::size_t>::max();
    double best_dist = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < scores.size(); ++j) {
      if (consumed[j]) continue;
      const double v = scores[j];
      if (v < t.lo || v > t.hi) continue;
      const double dist = std::abs(v - t.center_y);
      if (dist < best_dist || (dist == best_dist && v < scores[best])) {
        best = j;
        best_dist = dist;
      }
    }
    if (best != std::numeric_limits<std::size_t>::max()) {
      consumed[best] = true;
      result.pairs.emplace_back(scores[i], scores[best]);
    } else {
      result.remain.push_back(scores[i]);
    }
  }
  return result;
}

std::vector<double> find_match_scores(const std::vector<double>& remain,
                                      const std::vector<double>& pool, double tol) {
  if (!(tol > 0.0 && tol <= 1.0)) throw AbinError("tol must be in (0, 1]");
  if (pool.empty()) throw EmptyPool();
  for (double v : pool) check_domain(v);

  std::vector<double> complements;
  const int max_widenings = int(std::ceil(1.0 / tol));
  for (double r : remain) {
    const ToleranceInterval t = tolerance_interval(r);
    for (int w = 0; w <= max_widenings; ++w) {
      const double lo = std::max(0.0, t.lo - w * tol);
      const double hi = std::min(1.0, t.hi + w * tol);
      double best = -1.0;
      double best_dist = std::numeric_limits<double>::infinity();
      for (double v : pool) {
        if (v < lo || v > hi) continue;
        const double dist = std::abs(v - t.center_y);
        if (dist < best_dist || (dist == best_dist && v < best)) {
          best = v;
          best_dist = dist;
        }
      }
      if (best >= 0.0) {
        complements.push_back(best);
        break;
      }
    }
  }
  return complements;
}

double best_diff(const SentimentList& list) {
  double yin_side = 0.0;   // Yin and Neutral scores, mapped through the curve
  double yang_side = 0.0;  // Yang scores as-is
  for (double o : list.scores) {
    if (classify(o) == Polarity::Yang)
      yang_side += o;
    else
      yin_side += curve(o);
  }
  return std::abs(yin_side - yang_side);
}

}  // namespace abin::yinyang
