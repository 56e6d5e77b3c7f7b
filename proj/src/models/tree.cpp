// CART classification trees with Gini impurity, plus a bagged forest.

#include <algorithm>
#include <cmath>
#include <numeric>

#include "see/models.hpp"
#include "see/rng.hpp"

namespace see::detail {
namespace {

ClassLabel majority(std::size_t malicious, std::size_t total) {
  return 2 * malicious >= total ? ClassLabel::Malicious : ClassLabel::Legitimate;
}

double gini(std::size_t malicious, std::size_t total) {
  if (total == 0) return 0.0;
  double p = static_cast<double>(malicious) / static_cast<double>(total);
  return 2.0 * p * (1.0 - p);
}

class TreeBuilder {
 public:
  TreeBuilder(const Dataset& data, std::size_t max_depth, std::size_t min_leaf,
              std::size_t features_per_split, std::uint64_t seed)
      : data_(data),
        max_depth_(max_depth),
        min_leaf_(std::max<std::size_t>(min_leaf, 1)),
        features_per_split_(features_per_split),
        rng_(seed) {}

  TreeParams build() {
    std::vector<std::size_t> rows(data_.size());
    std::iota(rows.begin(), rows.end(), std::size_t{0});
    grow(rows, 0);
    return TreeParams{std::move(nodes_)};
  }

 private:
  struct Split {
    int feature = -1;
    double threshold = 0.0;
    double impurity = 0.0;
  };

  int grow(std::vector<std::size_t>& rows, std::size_t depth) {
    const int id = static_cast<int>(nodes_.size());
    nodes_.emplace_back();
    std::size_t malicious = 0;
    for (std::size_t r : rows) {
      if (data_.label(r) == ClassLabel::Malicious) ++malicious;
    }
    nodes_[id].leaf = majority(malicious, rows.size());

    const bool pure = malicious == 0 || malicious == rows.size();
    if (pure || depth >= max_depth_ || rows.size() < 2 * min_leaf_) return id;

    Split best = find_split(rows);
    if (best.feature < 0) return id;

    std::vector<std::size_t> left, right;
    for (std::size_t r : rows) {
      (data_.sample(r)[best.feature] <= best.threshold ? left : right).push_back(r);
    }
    rows.clear();
    rows.shrink_to_fit();
    nodes_[id].feature = best.feature;
    nodes_[id].threshold = best.threshold;
    int l = grow(left, depth + 1);
    int r = grow(right, depth + 1);
    nodes_[id].left = l;
    nodes_[id].right = r;
    return id;
  }

  std::vector<std::size_t> candidate_features() {
    const std::size_t d = data_.dim();
    std::vector<std::size_t> feats(d);
    std::iota(feats.begin(), feats.end(), std::size_t{0});
    if (features_per_split_ == 0 || features_per_split_ >= d) return feats;
    for (std::size_t i = 0; i < features_per_split_; ++i) {
      std::swap(feats[i], feats[i + rng_.index(d - i)]);
    }
    feats.resize(features_per_split_);
    std::sort(feats.begin(), feats.end());
    return feats;
  }

  // Lowest weighted child impurity wins; ties keep the earlier feature and
  // the lower threshold. Zero-gain splits are allowed so XOR-like layouts
  // can still be separated deeper down.
  Split find_split(const std::vector<std::size_t>& rows) {
    Split best;
    double best_score = INFINITY;
    const std::size_t n = rows.size();
    std::size_t total_mal = 0;
    for (std::size_t r : rows) total_mal += data_.label(r) == ClassLabel::Malicious;

    std::vector<std::pair<double, ClassLabel>> column(n);
    for (std::size_t f : candidate_features()) {
      for (std::size_t i = 0; i < n; ++i) {
        column[i] = {data_.sample(rows[i])[f], data_.label(rows[i])};
      }
      std::sort(column.begin(), column.end(),
                [](const auto& a, const auto& b) { return a.first < b.first; });
      std::size_t left_mal = 0;
      for (std::size_t i = 0; i + 1 < n; ++i) {
        left_mal += column[i].second == ClassLabel::Malicious;
        const std::size_t nl = i + 1;
        const std::size_t nr = n - nl;
        if (column[i].first == column[i + 1].first) continue;
        if (nl < min_leaf_ || nr < min_leaf_) continue;
        double score = (static_cast<double>(nl) * gini(left_mal, nl) +
                        static_cast<double>(nr) * gini(total_mal - left_mal, nr)) /
                       static_cast<double>(n);
        if (score < best_score) {
          best_score = score;
          best.feature = static_cast<int>(f);
          best.threshold = 0.5 * (column[i].first + column[i + 1].first);
          best.impurity = score;
        }
      }
    }
    return best;
  }

  const Dataset& data_;
  std::size_t max_depth_;
  std::size_t min_leaf_;
  std::size_t features_per_split_;
  Rng rng_;
  std::vector<TreeNode> nodes_;
};

}  // namespace

TreeParams train_tree(const Dataset& data, std::size_t max_depth,
                      std::size_t min_leaf, std::size_t features_per_split,
                      std::uint64_t seed) {
  return TreeBuilder(data, max_depth, min_leaf, features_per_split, seed).build();
}

ForestParams train_forest(const ModelSpec& spec, const Dataset& data) {
  const std::size_t d = data.dim();
  const double fraction = spec.feature_fraction.value_or(
      std::sqrt(static_cast<double>(d)) / static_cast<double>(d));
  const auto per_split = std::clamp<std::size_t>(
      static_cast<std::size_t>(std::lround(fraction * static_cast<double>(d))), 1, d);

  ForestParams forest;
  forest.trees.reserve(spec.trees);
  const std::size_t n = data.size();
  for (std::size_t t = 0; t < spec.trees; ++t) {
    Rng rng = Rng::derive(spec.train_seed, t);
    std::uint64_t tree_seed = rng.next_u64();
    if (!spec.bootstrap) {
      forest.trees.push_back(
          train_tree(data, spec.max_depth, spec.min_leaf, per_split, tree_seed));
      continue;
    }
    std::vector<std::size_t> rows(n);
    for (auto& r : rows) r = rng.index(n);
    Dataset sample = data.select(rows);
    forest.trees.push_back(
        train_tree(sample, spec.max_depth, spec.min_leaf, per_split, tree_seed));
  }
  return forest;
}

ClassLabel predict_tree(const TreeParams& p, std::span<const double> x) {
  std::size_t id = 0;
  while (p.nodes[id].feature >= 0) {
    const auto& node = p.nodes[id];
    id = static_cast<std::size_t>(
        x[static_cast<std::size_t>(node.feature)] <= node.threshold ? node.left
                                                                    : node.right);
  }
  return p.nodes[id].leaf;
}

ClassLabel predict_forest(const ForestParams& p, std::span<const double> x) {
  std::size_t malicious = 0;
  for (const auto& tree : p.trees) {
    malicious += predict_tree(tree, x) == ClassLabel::Malicious;
  }
  return majority(malicious, p.trees.size());
}

}  // namespace see::detail
