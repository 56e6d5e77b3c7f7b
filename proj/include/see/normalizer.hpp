#pragma once

#include <span>
#include <string>
#include <vector>

#include "json.hpp"

#include "see/rng.hpp"
#include "see/types.hpp"

namespace see {

struct FeatureRange {
  std::string name;
  double min = 0.0;
  double max = 0.0;
};

/// Per-feature min/max in original units.
class NormalizationMap {
 public:
  NormalizationMap() = default;
  explicit NormalizationMap(std::vector<FeatureRange> ranges);

  std::size_t dim() const noexcept { return ranges_.size(); }
  const std::vector<FeatureRange>& ranges() const noexcept { return ranges_; }

  nlohmann::json to_json() const;
  static NormalizationMap from_json(const nlohmann::json& j);

 private:
  std::vector<FeatureRange> ranges_;
};

NormalizationMap fit_normalizer(const Dataset& data);

/// (x - min) / (max - min); constant features map to 0.
FeatureVector apply_normalizer(const NormalizationMap& map,
                               std::span<const double> v, bool clip);
Dataset apply_normalizer(const NormalizationMap& map, const Dataset& data,
                         bool clip);

Dataset shuffle(const Dataset& data, Rng& rng);

}  // namespace see
