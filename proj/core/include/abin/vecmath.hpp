#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "abin/errors.hpp"

namespace abin::vec {

// Works over any indexable containers (vector<float>, vector<double>, span).
template <class VA, class VB>
double dot(const VA& a, const VB& b) {
  if (a.size() != b.size()) throw DimensionMismatch(a.size(), b.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += double(a[i]) * double(b[i]);
  return acc;
}

template <class V>
double norm(const V& a) {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += double(a[i]) * double(a[i]);
  return std::sqrt(acc);
}

/// Cosine similarity; throws ZeroVector if either input has zero norm.
template <class VA, class VB>
double cosine(const VA& a, const VB& b) {
  const double na = norm(a);
  const double nb = norm(b);
  if (na == 0.0 || nb == 0.0) throw ZeroVector();
  return dot(a, b) / (na * nb);
}

/// Cosine that treats a zero vector as similarity 0 (centroids can degenerate).
template <class VA, class VB>
double cosine_or_zero(const VA& a, const VB& b) {
  const double na = norm(a);
  const double nb = norm(b);
  if (na == 0.0 || nb == 0.0) return 0.0;
  return dot(a, b) / (na * nb);
}

template <class T>
void normalize(std::vector<T>& v) {
  const double n = norm(v);
  if (n == 0.0) return;
  for (T& x : v) x = T(double(x) / n);
}

}  // namespace abin::vec
