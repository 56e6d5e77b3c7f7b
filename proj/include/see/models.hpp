#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "json.hpp"
#include "see/types.hpp"

namespace see {

enum class ModelKind { LinearSvm, Knn, DecisionTree, RandomForest, RbfSvm };

std::string_view to_string(ModelKind kind) noexcept;
ModelKind model_kind_from_string(std::string_view name);

/// Hyperparameters for every model kind; each kind reads only its own fields.
struct ModelSpec {
  ModelKind kind = ModelKind::LinearSvm;
  double c = 1.0;         // LinearSvm, RbfSvm: hinge weight, lambda = 1/(c*n)
  std::size_t k = 3;      // Knn
  double gamma = 0.1;     // RbfSvm
  std::size_t epochs = 50;  // LinearSvm, RbfSvm
  std::size_t max_depth = 20;
  std::size_t min_leaf = 2;
  std::size_t trees = 50;
  /// Features considered per split in a forest; unset means sqrt(d)/d.
  std::optional<double> feature_fraction;
  bool bootstrap = true;
  std::uint64_t train_seed = 0;

  void validate() const;

  static ModelSpec linear_svm(double c = 1.0);
  static ModelSpec knn(std::size_t k = 3);
  static ModelSpec rbf_svm(double gamma = 0.1, double c = 1.0);
  static ModelSpec decision_tree();
  static ModelSpec random_forest(std::size_t trees = 50);

  nlohmann::json to_json() const;
  static ModelSpec from_json(const nlohmann::json& j);
};

struct LinearSvmParams {
  std::vector<double> w;
  double b = 0.0;
};

struct KnnParams {
  std::size_t k = 3;
  std::vector<FeatureVector> points;
  std::vector<ClassLabel> labels;
};

struct TreeNode {
  /// -1 marks a leaf.
  int feature = -1;
  double threshold = 0.0;
  int left = -1;
  int right = -1;
  ClassLabel leaf = ClassLabel::Malicious;
};

/// Node 0 is the root. Samples with x[feature] <= threshold go left.
struct TreeParams {
  std::vector<TreeNode> nodes;
};

struct ForestParams {
  std::vector<TreeParams> trees;
};

struct RbfSvmParams {
  double gamma = 0.1;
  std::vector<FeatureVector> support;
  std::vector<double> coef;
  double bias = 0.0;
};

/// A trained classifier. Prediction is a pure function of the model and the
/// input; every tie (zero margin, split vote, empty leaf) resolves to
/// Malicious.
class Model {
 public:
  using Params = std::variant<LinearSvmParams, KnnParams, TreeParams,
                              ForestParams, RbfSvmParams>;

  Model(ModelKind kind, std::size_t dim, Params params);

  /// w.x + b >= 0 is Malicious.
  static Model linear(std::vector<double> w, double b);
  /// Always answers `label`; handy as a trivially opaque defender.
  static Model constant(std::size_t dim, ClassLabel label);

  ModelKind kind() const noexcept { return kind_; }
  std::size_t dim() const noexcept { return dim_; }
  const Params& params() const noexcept { return params_; }

  ClassLabel predict(std::span<const double> x) const;

  /// Signed margin for the SVM kinds (positive leans Malicious).
  double decision_value(std::span<const double> x) const;

  nlohmann::json to_json() const;
  static Model from_json(const nlohmann::json& j);
  void save(const std::filesystem::path& path) const;
  static Model load(const std::filesystem::path& path);

 private:
  ModelKind kind_;
  std::size_t dim_;
  Params params_;
};

Model train(const ModelSpec& spec, const Dataset& data);

inline ClassLabel predict_label(const Model& model, std::span<const double> x) {
  return model.predict(x);
}

double holdout_accuracy(const Model& model, const Dataset& data);

/// Stratified f-fold cross-validation; returns pooled accuracy over all rows.
/// Fold membership is assigned round-robin within each class in row order.
double cross_validate(const ModelSpec& spec, const Dataset& data,
                      std::size_t folds);

namespace detail {
LinearSvmParams train_linear_svm(const ModelSpec& spec, const Dataset& data);
RbfSvmParams train_rbf_svm(const ModelSpec& spec, const Dataset& data);
KnnParams train_knn(const ModelSpec& spec, const Dataset& data);
TreeParams train_tree(const Dataset& data, std::size_t max_depth,
                      std::size_t min_leaf, std::size_t features_per_split,
                      std::uint64_t seed);
ForestParams train_forest(const ModelSpec& spec, const Dataset& data);

ClassLabel predict_linear(const LinearSvmParams& p, std::span<const double> x);
ClassLabel predict_knn(const KnnParams& p, std::span<const double> x);
ClassLabel predict_tree(const TreeParams& p, std::span<const double> x);
ClassLabel predict_forest(const ForestParams& p, std::span<const double> x);
double rbf_decision(const RbfSvmParams& p, std::span<const double> x);
}  // namespace detail

}  // namespace see
