#include "see/normalizer.hpp"

#include <algorithm>
#include <numeric>

#include "see/errors.hpp"

namespace see {

NormalizationMap::NormalizationMap(std::vector<FeatureRange> ranges)
    : ranges_(std::move(ranges)) {
  for (const auto& r : ranges_) {
    if (!(r.max >= r.min)) {
      throw Error("normalization range for '" + r.name + "' has max < min");
    }
  }
}

nlohmann::json NormalizationMap::to_json() const {
  nlohmann::json features = nlohmann::json::array();
  for (const auto& r : ranges_) {
    features.push_back({{"name", r.name}, {"min", r.min}, {"max", r.max}});
  }
  return {{"features", features}};
}

NormalizationMap NormalizationMap::from_json(const nlohmann::json& j) {
  std::vector<FeatureRange> ranges;
  try {
    for (const auto& f : j.at("features")) {
      ranges.push_back({f.at("name").get<std::string>(),
                        f.at("min").get<double>(), f.at("max").get<double>()});
    }
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("bad normalization map: ") + e.what());
  }
  return NormalizationMap(std::move(ranges));
}

NormalizationMap fit_normalizer(const Dataset& data) {
  if (data.empty()) throw Error("cannot fit a normalizer on an empty dataset");
  std::vector<FeatureRange> ranges(data.dim());
  for (std::size_t j = 0; j < data.dim(); ++j) {
    ranges[j].name = data.feature_names()[j];
    ranges[j].min = ranges[j].max = data.sample(0)[j];
  }
  for (const auto& s : data.samples()) {
    for (std::size_t j = 0; j < s.size(); ++j) {
      ranges[j].min = std::min(ranges[j].min, s[j]);
      ranges[j].max = std::max(ranges[j].max, s[j]);
    }
  }
  return NormalizationMap(std::move(ranges));
}

FeatureVector apply_normalizer(const NormalizationMap& map,
                               std::span<const double> v, bool clip) {
  require_dim(map.dim(), v.size());
  FeatureVector out(v.size());
  for (std::size_t j = 0; j < v.size(); ++j) {
    const auto& r = map.ranges()[j];
    double span = r.max - r.min;
    out[j] = span > 0.0 ? (v[j] - r.min) / span : 0.0;
  }
  if (clip) clip_unit(out);
  return out;
}

Dataset apply_normalizer(const NormalizationMap& map, const Dataset& data,
                         bool clip) {
  std::vector<FeatureVector> samples;
  samples.reserve(data.size());
  for (const auto& s : data.samples()) {
    samples.push_back(apply_normalizer(map, s, clip));
  }
  return Dataset(std::move(samples), data.labels(), data.feature_names());
}

Dataset shuffle(const Dataset& data, Rng& rng) {
  std::vector<std::size_t> order(data.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  // Fisher-Yates with the documented index draw.
  for (std::size_t i = order.size(); i > 1; --i) {
    std::swap(order[i - 1], order[rng.index(i)]);
  }
  return data.select(order);
}

}  // namespace see
