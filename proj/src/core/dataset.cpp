#include <algorithm>
#include <cmath>

#include "see/errors.hpp"
#include "see/types.hpp"

namespace see {

ClassLabel label_from_int(int value) {
  switch (value) {
    case 0:
      return ClassLabel::Legitimate;
    case 1:
      return ClassLabel::Malicious;
    default:
      throw ParseError("class label must be 0 or 1, got " +
                       std::to_string(value));
  }
}

std::string_view to_string(ClassLabel label) noexcept {
  return label == ClassLabel::Legitimate ? "legitimate" : "malicious";
}

std::vector<std::string> default_feature_names(std::size_t d) {
  std::vector<std::string> names;
  names.reserve(d);
  for (std::size_t i = 0; i < d; ++i) names.push_back("f" + std::to_string(i));
  return names;
}

Dataset::Dataset(std::vector<FeatureVector> samples,
                 std::vector<ClassLabel> labels,
                 std::vector<std::string> feature_names)
    : samples_(std::move(samples)),
      labels_(std::move(labels)),
      feature_names_(std::move(feature_names)) {
  if (samples_.size() != labels_.size()) {
    throw Error("dataset has " + std::to_string(samples_.size()) +
                " samples but " + std::to_string(labels_.size()) + " labels");
  }
  if (!samples_.empty()) {
    dim_ = samples_.front().size();
    if (dim_ == 0) throw Error("dataset samples must have at least one feature");
    for (const auto& s : samples_) require_dim(dim_, s.size());
  } else if (!feature_names_.empty()) {
    dim_ = feature_names_.size();
  }
  if (feature_names_.empty()) {
    feature_names_ = default_feature_names(dim_);
  } else if (feature_names_.size() != dim_) {
    throw Error("feature name count does not match dimensionality");
  }
}

std::size_t Dataset::count(ClassLabel label) const noexcept {
  return static_cast<std::size_t>(
      std::count(labels_.begin(), labels_.end(), label));
}

bool Dataset::has_both_classes() const noexcept {
  return count(ClassLabel::Legitimate) > 0 && count(ClassLabel::Malicious) > 0;
}

Dataset Dataset::select(std::span<const std::size_t> rows) const {
  std::vector<FeatureVector> samples;
  std::vector<ClassLabel> labels;
  samples.reserve(rows.size());
  labels.reserve(rows.size());
  for (std::size_t r : rows) {
    samples.push_back(samples_.at(r));
    labels.push_back(labels_.at(r));
  }
  return Dataset(std::move(samples), std::move(labels), feature_names_);
}

void require_dim(std::size_t expected, std::size_t got) {
  if (expected != got) throw DimensionMismatch(expected, got);
}

double squared_distance(std::span<const double> a,
                        std::span<const double> b) {
  require_dim(a.size(), b.size());
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    double diff = a[i] - b[i];
    s += diff * diff;
  }
  return s;
}

double distance(std::span<const double> a, std::span<const double> b) {
  return std::sqrt(squared_distance(a, b));
}

double dot(std::span<const double> a, std::span<const double> b) {
  require_dim(a.size(), b.size());
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

void clip_unit(std::span<double> x) noexcept {
  for (double& v : x) v = std::clamp(v, 0.0, 1.0);
}

}  // namespace see
