#include <cmath>
#include <fstream>

#include "see/errors.hpp"
#include "see/models.hpp"

namespace see {

using nlohmann::json;

std::string_view to_string(ModelKind kind) noexcept {
  switch (kind) {
    case ModelKind::LinearSvm:
      return "linear_svm";
    case ModelKind::Knn:
      return "knn";
    case ModelKind::DecisionTree:
      return "decision_tree";
    case ModelKind::RandomForest:
      return "random_forest";
    case ModelKind::RbfSvm:
      return "rbf_svm";
  }
  return "unknown";
}

ModelKind model_kind_from_string(std::string_view name) {
  for (auto kind : {ModelKind::LinearSvm, ModelKind::Knn, ModelKind::DecisionTree,
                    ModelKind::RandomForest, ModelKind::RbfSvm}) {
    if (to_string(kind) == name) return kind;
  }
  throw ConfigError("unknown model kind '" + std::string(name) + "'");
}

void ModelSpec::validate() const {
  if (!(c > 0.0)) throw ConfigError("model c must be > 0");
  if (k < 1) throw ConfigError("knn k must be >= 1");
  if (!(gamma > 0.0)) throw ConfigError("rbf gamma must be > 0");
  if (trees < 1) throw ConfigError("forest tree count must be >= 1");
  if (epochs < 1) throw ConfigError("epochs must be >= 1");
  if (max_depth < 1) throw ConfigError("max_depth must be >= 1");
  if (feature_fraction && !(*feature_fraction > 0.0 && *feature_fraction <= 1.0)) {
    throw ConfigError("feature_fraction must lie in (0,1]");
  }
}

ModelSpec ModelSpec::linear_svm(double c) {
  ModelSpec s;
  s.kind = ModelKind::LinearSvm;
  s.c = c;
  return s;
}

ModelSpec ModelSpec::knn(std::size_t k) {
  ModelSpec s;
  s.kind = ModelKind::Knn;
  s.k = k;
  return s;
}

ModelSpec ModelSpec::rbf_svm(double gamma, double c) {
  ModelSpec s;
  s.kind = ModelKind::RbfSvm;
  s.gamma = gamma;
  s.c = c;
  return s;
}

ModelSpec ModelSpec::decision_tree() {
  ModelSpec s;
  s.kind = ModelKind::DecisionTree;
  return s;
}

ModelSpec ModelSpec::random_forest(std::size_t trees) {
  ModelSpec s;
  s.kind = ModelKind::RandomForest;
  s.trees = trees;
  return s;
}

json ModelSpec::to_json() const {
  json j = {{"kind", to_string(kind)}, {"c", c},           {"k", k},
            {"gamma", gamma},          {"epochs", epochs}, {"max_depth", max_depth},
            {"min_leaf", min_leaf},    {"trees", trees},   {"bootstrap", bootstrap},
            {"train_seed", train_seed}};
  j["feature_fraction"] = feature_fraction ? json(*feature_fraction) : json(nullptr);
  return j;
}

ModelSpec ModelSpec::from_json(const json& j) {
  ModelSpec s;
  try {
    s.kind = model_kind_from_string(j.at("kind").get<std::string>());
    s.c = j.value("c", s.c);
    s.k = j.value("k", s.k);
    s.gamma = j.value("gamma", s.gamma);
    s.epochs = j.value("epochs", s.epochs);
    s.max_depth = j.value("max_depth", s.max_depth);
    s.min_leaf = j.value("min_leaf", s.min_leaf);
    s.trees = j.value("trees", s.trees);
    s.bootstrap = j.value("bootstrap", s.bootstrap);
    s.train_seed = j.value("train_seed", s.train_seed);
    if (j.contains("feature_fraction") && !j["feature_fraction"].is_null()) {
      s.feature_fraction = j["feature_fraction"].get<double>();
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("bad model spec: ") + e.what());
  }
  s.validate();
  return s;
}

Model::Model(ModelKind kind, std::size_t dim, Params params)
    : kind_(kind), dim_(dim), params_(std::move(params)) {
  if (dim_ == 0) throw Error("model dimensionality must be >= 1");
}

Model Model::linear(std::vector<double> w, double b) {
  std::size_t d = w.size();
  return Model(ModelKind::LinearSvm, d, LinearSvmParams{std::move(w), b});
}

Model Model::constant(std::size_t dim, ClassLabel label) {
  return linear(std::vector<double>(dim, 0.0),
                label == ClassLabel::Malicious ? 1.0 : -1.0);
}

ClassLabel Model::predict(std::span<const double> x) const {
  require_dim(dim_, x.size());
  switch (kind_) {
    case ModelKind::LinearSvm:
      return detail::predict_linear(std::get<LinearSvmParams>(params_), x);
    case ModelKind::Knn:
      return detail::predict_knn(std::get<KnnParams>(params_), x);
    case ModelKind::DecisionTree:
      return detail::predict_tree(std::get<TreeParams>(params_), x);
    case ModelKind::RandomForest:
      return detail::predict_forest(std::get<ForestParams>(params_), x);
    case ModelKind::RbfSvm:
      return detail::rbf_decision(std::get<RbfSvmParams>(params_), x) >= 0.0
                 ? ClassLabel::Malicious
                 : ClassLabel::Legitimate;
  }
  throw Error("corrupt model kind");
}

double Model::decision_value(std::span<const double> x) const {
  require_dim(dim_, x.size());
  if (kind_ == ModelKind::LinearSvm) {
    const auto& p = std::get<LinearSvmParams>(params_);
    return p.b + dot(p.w, x);
  }
  if (kind_ == ModelKind::RbfSvm) {
    return detail::rbf_decision(std::get<RbfSvmParams>(params_), x);
  }
  throw Error("decision_value is only defined for SVM models");
}

namespace {

json tree_to_json(const TreeParams& t) {
  json nodes = json::array();
  for (const auto& n : t.nodes) {
    if (n.feature < 0) {
      nodes.push_back({{"leaf", to_int(n.leaf)}});
    } else {
      nodes.push_back({{"feature", n.feature},
                       {"threshold", n.threshold},
                       {"left", n.left},
                       {"right", n.right},
                       {"leaf", to_int(n.leaf)}});
    }
  }
  return nodes;
}

TreeParams tree_from_json(const json& nodes, std::size_t dim) {
  TreeParams t;
  for (const auto& n : nodes) {
    TreeNode node;
    node.leaf = label_from_int(n.at("leaf").get<int>());
    if (n.contains("feature")) {
      node.feature = n.at("feature").get<int>();
      node.threshold = n.at("threshold").get<double>();
      node.left = n.at("left").get<int>();
      node.right = n.at("right").get<int>();
    }
    t.nodes.push_back(node);
  }
  const int count = static_cast<int>(t.nodes.size());
  if (count == 0) throw ParseError("tree has no nodes");
  for (const auto& n : t.nodes) {
    if (n.feature < 0) continue;
    if (static_cast<std::size_t>(n.feature) >= dim || n.left <= 0 ||
        n.right <= 0 || n.left >= count || n.right >= count) {
      throw ParseError("tree node references out of range");
    }
  }
  return t;
}

std::vector<int> labels_to_ints(const std::vector<ClassLabel>& labels) {
  std::vector<int> out;
  out.reserve(labels.size());
  for (auto l : labels) out.push_back(to_int(l));
  return out;
}

}  // namespace

json Model::to_json() const {
  json j = {{"kind", to_string(kind_)}, {"dim", dim_}};
  std::visit(
      [&](const auto& p) {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, LinearSvmParams>) {
          j["w"] = p.w;
          j["b"] = p.b;
        } else if constexpr (std::is_same_v<T, KnnParams>) {
          j["k"] = p.k;
          j["points"] = p.points;
          j["labels"] = labels_to_ints(p.labels);
        } else if constexpr (std::is_same_v<T, TreeParams>) {
          j["nodes"] = tree_to_json(p);
        } else if constexpr (std::is_same_v<T, ForestParams>) {
          json trees = json::array();
          for (const auto& t : p.trees) trees.push_back(tree_to_json(t));
          j["trees"] = trees;
        } else if constexpr (std::is_same_v<T, RbfSvmParams>) {
          j["gamma"] = p.gamma;
          j["support"] = p.support;
          j["coef"] = p.coef;
          j["bias"] = p.bias;
        }
      },
      params_);
  return j;
}

Model Model::from_json(const json& j) {
  try {
    ModelKind kind = model_kind_from_string(j.at("kind").get<std::string>());
    auto dim = j.at("dim").get<std::size_t>();
    auto check_rows = [dim](const std::vector<FeatureVector>& rows) {
      for (const auto& r : rows) {
        if (r.size() != dim) throw ParseError("stored vector has wrong dimension");
      }
    };
    switch (kind) {
      case ModelKind::LinearSvm: {
        LinearSvmParams p{j.at("w").get<std::vector<double>>(), j.at("b").get<double>()};
        if (p.w.size() != dim) throw ParseError("weight vector has wrong dimension");
        return Model(kind, dim, std::move(p));
      }
      case ModelKind::Knn: {
        KnnParams p;
        p.k = j.at("k").get<std::size_t>();
        p.points = j.at("points").get<std::vector<FeatureVector>>();
        for (int l : j.at("labels").get<std::vector<int>>()) p.labels.push_back(label_from_int(l));
        check_rows(p.points);
        if (p.points.size() != p.labels.size() || p.points.empty()) {
          throw ParseError("knn points and labels disagree");
        }
        return Model(kind, dim, std::move(p));
      }
      case ModelKind::DecisionTree:
        return Model(kind, dim, tree_from_json(j.at("nodes"), dim));
      case ModelKind::RandomForest: {
        ForestParams p;
        for (const auto& t : j.at("trees")) p.trees.push_back(tree_from_json(t, dim));
        if (p.trees.empty()) throw ParseError("forest has no trees");
        return Model(kind, dim, std::move(p));
      }
      case ModelKind::RbfSvm: {
        RbfSvmParams p;
        p.gamma = j.at("gamma").get<double>();
        p.support = j.at("support").get<std::vector<FeatureVector>>();
        p.coef = j.at("coef").get<std::vector<double>>();
        p.bias = j.at("bias").get<double>();
        check_rows(p.support);
        if (p.support.size() != p.coef.size()) throw ParseError("rbf coefficients disagree");
        return Model(kind, dim, std::move(p));
      }
    }
  } catch (const json::exception& e) {
    throw ParseError(std::string("bad model JSON: ") + e.what());
  } catch (const ConfigError& e) {
    throw ParseError(e.what());
  }
  throw ParseError("bad model JSON");
}

void Model::save(const std::filesystem::path& path) const {
  std::ofstream out(path);
  if (!out) throw Error("cannot write model to '" + path.string() + "'");
  out << to_json().dump() << '\n';
}

Model Model::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open model file '" + path.string() + "'");
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ParseError(std::string("bad model JSON: ") + e.what());
  }
  return from_json(j);
}

Model train(const ModelSpec& spec, const Dataset& data) {
  spec.validate();
  if (data.empty()) throw TrainingError("cannot train on an empty dataset");
  if (!data.has_both_classes()) {
    throw TrainingError("training data must contain both classes");
  }
  const std::size_t d = data.dim();
  switch (spec.kind) {
    case ModelKind::LinearSvm:
      return Model(spec.kind, d, detail::train_linear_svm(spec, data));
    case ModelKind::Knn:
      return Model(spec.kind, d, detail::train_knn(spec, data));
    case ModelKind::DecisionTree:
      return Model(spec.kind, d,
                   detail::train_tree(data, spec.max_depth, spec.min_leaf, 0,
                                      spec.train_seed));
    case ModelKind::RandomForest:
      return Model(spec.kind, d, detail::train_forest(spec, data));
    case ModelKind::RbfSvm:
      return Model(spec.kind, d, detail::train_rbf_svm(spec, data));
  }
  throw ConfigError("unknown model kind");
}

double holdout_accuracy(const Model& model, const Dataset& data) {
  if (data.empty()) throw Error("accuracy of an empty dataset is undefined");
  std::size_t correct = 0;
  for (std::size_t i = 0; i < data.size(); ++i) {
    correct += model.predict(data.sample(i)) == data.label(i);
  }
  return static_cast<double>(correct) / static_cast<double>(data.size());
}

double cross_validate(const ModelSpec& spec, const Dataset& data,
                      std::size_t folds) {
  if (folds < 2) throw ConfigError("cross-validation needs at least 2 folds");
  if (data.size() < folds) throw TrainingError("fewer rows than folds");
  std::vector<std::size_t> fold_of(data.size());
  std::size_t next[2] = {0, 0};
  for (std::size_t i = 0; i < data.size(); ++i) {
    auto cls = static_cast<std::size_t>(to_int(data.label(i)));
    fold_of[i] = next[cls]++ % folds;
  }
  std::size_t correct = 0;
  for (std::size_t f = 0; f < folds; ++f) {
    std::vector<std::size_t> train_rows, test_rows;
    for (std::size_t i = 0; i < data.size(); ++i) {
      (fold_of[i] == f ? test_rows : train_rows).push_back(i);
    }
    Model m = train(spec, data.select(train_rows));
    for (std::size_t i : test_rows) correct += m.predict(data.sample(i)) == data.label(i);
  }
  return static_cast<double>(correct) / static_cast<double>(data.size());
}

}  // namespace see
