#include <algorithm>
#include <numeric>

#include "see/models.hpp"

namespace see::detail {

KnnParams train_knn(const ModelSpec& spec, const Dataset& data) {
  return KnnParams{spec.k, data.samples(), data.labels()};
}

ClassLabel predict_knn(const KnnParams& p, std::span<const double> x) {
  const std::size_t n = p.points.size();
  const std::size_t k = std::min(p.k, n);
  std::vector<std::pair<double, std::size_t>> dist(n);
  for (std::size_t i = 0; i < n; ++i) dist[i] = {squared_distance(p.points[i], x), i};
  // Equal distances fall back to stored order.
  std::partial_sort(dist.begin(), dist.begin() + static_cast<std::ptrdiff_t>(k),
                    dist.end());
  std::size_t malicious = 0;
  for (std::size_t i = 0; i < k; ++i) {
    if (p.labels[dist[i].second] == ClassLabel::Malicious) ++malicious;
  }
  return 2 * malicious >= k ? ClassLabel::Malicious : ClassLabel::Legitimate;
}

}  // namespace see::detail
