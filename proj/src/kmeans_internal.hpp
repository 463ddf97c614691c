#pragma once

#include <cmath>
#include <cstddef>
#include <span>

#include "commscape/kmeans.hpp"

namespace commscape::detail {

inline double squared_distance(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double diff = a[i] - b[i];
    s += diff * diff;
  }
  return s;
}

struct Nearest {
  int label = 0;
  double squared = 0.0;
};

inline Nearest nearest_center(std::span<const double> point, const Centroids& c) {
  Nearest best{0, squared_distance(point, c.row(0))};
  for (std::size_t j = 1; j < c.k; ++j) {
    const double d = squared_distance(point, c.row(j));
    if (d < best.squared) best = {static_cast<int>(j), d};
  }
  return best;
}

struct NearestWithMargin {
  int label = 0;
  double squared = 0.0;
  double margin = 0.0;
};

inline NearestWithMargin nearest_with_margin(std::span<const double> point, const Centroids& c) {
  const Nearest best = nearest_center(point, c);
  double second = INFINITY;
  for (std::size_t j = 0; j < c.k; ++j) {
    if (static_cast<int>(j) == best.label) continue;
    const double d = squared_distance(point, c.row(j));
    if (d < second) second = d;
  }
  return {best.label, best.squared, std::sqrt(second) - std::sqrt(best.squared)};
}

}  // namespace commscape::detail
