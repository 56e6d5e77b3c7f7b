#include "see/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "see/errors.hpp"

namespace see {

nlohmann::json DiversityReport::to_json() const {
  return {{"ear", ear},
          {"sigma", sigma},
          {"knn_dist", knn_dist},
          {"mst_dist", mst_dist},
          {"k_used", k_used}};
}

DiversityReport DiversityReport::from_json(const nlohmann::json& j) {
  DiversityReport r;
  r.ear = j.at("ear").get<double>();
  r.sigma = j.at("sigma").get<double>();
  r.knn_dist = j.at("knn_dist").get<double>();
  r.mst_dist = j.at("mst_dist").get<double>();
  r.k_used = j.at("k_used").get<std::size_t>();
  return r;
}

EffectiveAttackSet effective_attacks(const Model& defender, const AttackSet& attacks) {
  EffectiveAttackSet ea;
  ea.total_attacks = attacks.attacks.size();
  for (const auto& x : attacks.attacks) {
    if (defender.predict(x) == ClassLabel::Legitimate) ea.members.push_back(x);
  }
  return ea;
}

double ear(const EffectiveAttackSet& ea) {
  if (ea.total_attacks == 0) throw Error("EAR of zero attacks is undefined");
  return static_cast<double>(ea.members.size()) /
         static_cast<double>(ea.total_attacks);
}

double deviation(std::span<const FeatureVector> points) {
  const std::size_t n = points.size();
  if (n < 2) return 0.0;
  const std::size_t d = points.front().size();
  std::vector<double> mean(d, 0.0);
  for (const auto& p : points) {
    require_dim(d, p.size());
    for (std::size_t j = 0; j < d; ++j) mean[j] += p[j];
  }
  for (double& m : mean) m /= static_cast<double>(n);
  double sum = 0.0;
  for (const auto& p : points) sum += squared_distance(p, mean);
  return std::sqrt(sum / static_cast<double>(n - 1));
}

double knn_dist(std::span<const FeatureVector> points, std::size_t k) {
  const std::size_t n = points.size();
  if (n < 2 || k == 0) return 0.0;
  const std::size_t kk = std::min(k, n - 1);
  std::vector<std::pair<double, std::size_t>> row;
  row.reserve(n - 1);
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    row.clear();
    for (std::size_t j = 0; j < n; ++j) {
      if (j != i) row.emplace_back(distance(points[i], points[j]), j);
    }
    std::partial_sort(row.begin(), row.begin() + static_cast<std::ptrdiff_t>(kk),
                      row.end());
    double s = 0.0;
    for (std::size_t m = 0; m < kk; ++m) s += row[m].first;
    total += s / static_cast<double>(kk);
  }
  return total / static_cast<double>(n);
}

double mst_dist(std::span<const FeatureVector> points) {
  const std::size_t n = points.size();
  if (n < 2) return 0.0;
  // Prim on the dense graph, O(n^2).
  std::vector<double> best(n, std::numeric_limits<double>::infinity());
  std::vector<bool> in_tree(n, false);
  best[0] = 0.0;
  double length = 0.0;
  for (std::size_t step = 0; step < n; ++step) {
    std::size_t u = n;
    for (std::size_t v = 0; v < n; ++v) {
      if (!in_tree[v] && (u == n || best[v] < best[u])) u = v;
    }
    in_tree[u] = true;
    length += best[u];
    for (std::size_t v = 0; v < n; ++v) {
      if (!in_tree[v]) best[v] = std::min(best[v], distance(points[u], points[v]));
    }
  }
  return length / static_cast<double>(n - 1);
}

DiversityReport evaluate(const EffectiveAttackSet& ea, std::size_t k) {
  DiversityReport r;
  r.ear = ear(ea);
  r.sigma = deviation(ea.members);
  r.knn_dist = knn_dist(ea.members, k);
  r.mst_dist = mst_dist(ea.members);
  r.k_used = ea.members.size() >= 2 ? std::min(k, ea.members.size() - 1) : 0;
  return r;
}

}  // namespace see
