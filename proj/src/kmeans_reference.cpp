#include "commscape/error.hpp"
#include "commscape/kmeans.hpp"
#include "kmeans_internal.hpp"

namespace commscape::reference {

Assignment assign(const PointSet& ps, const Centroids& c) {
  if (ps.dims() != c.dims) throw ArgumentError("dimension mismatch");
  Assignment a;
  a.labels.reserve(ps.size());
  for (std::size_t i = 0; i < ps.size(); ++i) {
    int best = 0;
    double best_d = detail::squared_distance(ps.row(i), c.row(0));
    for (std::size_t j = 1; j < c.k; ++j) {
      const double d = detail::squared_distance(ps.row(i), c.row(j));
      if (d < best_d) {
        best_d = d;
        best = static_cast<int>(j);
      }
    }
    a.labels.push_back(best);
    a.objective += best_d;
  }
  return a;
}

}  // namespace commscape::reference
