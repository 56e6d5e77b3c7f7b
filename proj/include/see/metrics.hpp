#pragma once

#include <span>
#include <vector>

#include "json.hpp"
#include "see/attack_ap.hpp"
#include "see/models.hpp"
#include "see/types.hpp"

namespace see {

/// Attacks the true defender labels Legitimate.
struct EffectiveAttackSet {
  std::vector<FeatureVector> members;
  std::size_t total_attacks = 0;
};

struct DiversityReport {
  double ear = 0.0;
  double sigma = 0.0;
  double knn_dist = 0.0;
  double mst_dist = 0.0;
  std::size_t k_used = 0;

  nlohmann::json to_json() const;
  static DiversityReport from_json(const nlohmann::json& j);
};

inline constexpr std::size_t kDefaultKnnK = 5;

/// Filters by the defender's own answer. Takes the model directly: this is
/// the experimenter's measurement, not a probe, so no budget applies.
EffectiveAttackSet effective_attacks(const Model& defender, const AttackSet& attacks);

double ear(const EffectiveAttackSet& ea);

/// sqrt( sum |x - mean|^2 / (n - 1) ), Euclidean and scalar. 0 when n < 2.
double deviation(std::span<const FeatureVector> points);

/// Mean over points of the mean distance to the min(K, n-1) nearest others.
/// Equal distances are taken in index order. 0 when n < 2.
double knn_dist(std::span<const FeatureVector> points, std::size_t k = kDefaultKnnK);

/// Minimum spanning tree length over the complete Euclidean graph divided by
/// n - 1. Duplicates contribute zero-length edges. 0 when n < 2.
double mst_dist(std::span<const FeatureVector> points);

DiversityReport evaluate(const EffectiveAttackSet& ea, std::size_t k = kDefaultKnnK);

}  // namespace see
