#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace see {

/// A point in the normalized feature space [0,1]^d.
using FeatureVector = std::vector<double>;

enum class ClassLabel : std::uint8_t { Legitimate = 0, Malicious = 1 };

constexpr int to_int(ClassLabel label) noexcept {
  return static_cast<int>(label);
}

ClassLabel label_from_int(int value);
std::string_view to_string(ClassLabel label) noexcept;

/// Labeled samples sharing one dimensionality. Immutable once built.
class Dataset {
 public:
  Dataset() = default;
  Dataset(std::vector<FeatureVector> samples, std::vector<ClassLabel> labels,
          std::vector<std::string> feature_names = {});

  std::size_t size() const noexcept { return samples_.size(); }
  std::size_t dim() const noexcept { return dim_; }
  bool empty() const noexcept { return samples_.empty(); }

  const std::vector<FeatureVector>& samples() const noexcept {
    return samples_;
  }
  const std::vector<ClassLabel>& labels() const noexcept { return labels_; }
  const std::vector<std::string>& feature_names() const noexcept {
    return feature_names_;
  }
  const FeatureVector& sample(std::size_t i) const { return samples_.at(i); }
  ClassLabel label(std::size_t i) const { return labels_.at(i); }

  std::size_t count(ClassLabel label) const noexcept;
  bool has_both_classes() const noexcept;

  /// Rows in the given order; indices may repeat (bootstrap).
  Dataset select(std::span<const std::size_t> rows) const;

 private:
  std::vector<FeatureVector> samples_;
  std::vector<ClassLabel> labels_;
  std::vector<std::string> feature_names_;
  std::size_t dim_ = 0;
};

std::vector<std::string> default_feature_names(std::size_t d);

void require_dim(std::size_t expected, std::size_t got);

double squared_distance(std::span<const double> a, std::span<const double> b);
double distance(std::span<const double> a, std::span<const double> b);
double dot(std::span<const double> a, std::span<const double> b);

void clip_unit(std::span<double> x) noexcept;

}  // namespace see
