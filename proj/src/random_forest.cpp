#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <vector>

#include "casc/classifiers.hpp"
#include "casc/rng.hpp"

// Random forest training: bootstrap sample per tree, Gini splits over
// floor(sqrt(d)) candidate features per node, grown to purity.

namespace casc::detail {

namespace {

struct TreeBuilder {
  const Matrix& x;
  std::span<const int> y;
  int min_leaf;
  std::size_t mtry;
  Rng& rng;
  RfTree& tree;
  std::vector<std::size_t> feature_pool;
  std::vector<std::pair<double, int>> scratch;  // (value, label)

  std::int32_t make_leaf(std::size_t n1, std::size_t n) {
    RfTree::Node node;
    node.feature = -1;
    node.left = n1 * 2 > n ? 1 : 0;  // ties vote 0
    tree.nodes.push_back(node);
    return static_cast<std::int32_t>(tree.nodes.size() - 1);
  }

  std::int32_t build(std::vector<std::uint32_t>& rows) {
    const std::size_t n = rows.size();
    std::size_t n1 = 0;
    for (std::uint32_t r : rows) n1 += static_cast<std::size_t>(y[r]);
    if (n1 == 0 || n1 == n || n < 2 * static_cast<std::size_t>(min_leaf) || n < 2)
      return make_leaf(n1, n);

    // sample mtry distinct features, iterate them in ascending order
    const std::size_t d = x.cols;
    feature_pool.resize(d);
    std::iota(feature_pool.begin(), feature_pool.end(), std::size_t{0});
    for (std::size_t i = 0; i < mtry; ++i) {
      std::size_t j = i + static_cast<std::size_t>(rng.below(d - i));
      std::swap(feature_pool[i], feature_pool[j]);
    }
    std::sort(feature_pool.begin(), feature_pool.begin() + static_cast<std::ptrdiff_t>(mtry));

    double best_score = -1.0;  // weighted child Gini, lower is better
    int best_feature = -1;
    double best_threshold = 0.0;
    for (std::size_t fi = 0; fi < mtry; ++fi) {
      const std::size_t f = feature_pool[fi];
      scratch.clear();
      for (std::uint32_t r : rows) scratch.emplace_back(x.at(r, f), y[r]);
      std::sort(scratch.begin(), scratch.end(),
                [](const auto& a, const auto& b) { return a.first < b.first; });
      std::size_t left_n = 0, left_1 = 0;
      for (std::size_t i = 0; i + 1 < n; ++i) {
        ++left_n;
        left_1 += static_cast<std::size_t>(scratch[i].second);
        if (scratch[i].first == scratch[i + 1].first) continue;  // not a boundary
        const std::size_t right_n = n - left_n;
        const std::size_t right_1 = n1 - left_1;
        if (left_n < static_cast<std::size_t>(min_leaf) ||
            right_n < static_cast<std::size_t>(min_leaf))
          continue;
        const double lp = static_cast<double>(left_1) / static_cast<double>(left_n);
        const double rp = static_cast<double>(right_1) / static_cast<double>(right_n);
        const double score =
            (static_cast<double>(left_n) * 2.0 * lp * (1.0 - lp) +
             static_cast<double>(right_n) * 2.0 * rp * (1.0 - rp)) /
            static_cast<double>(n);
        if (best_feature < 0 || score < best_score) {
          best_score = score;
          best_feature = static_cast<int>(f);
          best_threshold = scratch[i].first + (scratch[i + 1].first - scratch[i].first) / 2.0;
        }
      }
    }
    if (best_feature < 0) return make_leaf(n1, n);  // candidates all constant

    std::vector<std::uint32_t> left, right;
    left.reserve(n);
    right.reserve(n);
    for (std::uint32_t r : rows)
      (x.at(r, static_cast<std::size_t>(best_feature)) <= best_threshold ? left : right)
          .push_back(r);
    if (left.empty() || right.empty()) return make_leaf(n1, n);  // midpoint rounding collapse
    rows.clear();
    rows.shrink_to_fit();

    std::size_t self = tree.nodes.size();
    tree.nodes.emplace_back();
    tree.nodes[self].feature = best_feature;
    tree.nodes[self].threshold = best_threshold;
    std::int32_t l = build(left);
    tree.nodes[self].left = l;
    std::int32_t r = build(right);
    tree.nodes[self].right = r;
    return static_cast<std::int32_t>(self);
  }
};

}  // namespace

RfParams fit_random_forest(const Matrix& xs, std::span<const int> labels, std::uint64_t seed,
                           const HyperParams& hp) {
  RfParams params;
  params.trees.resize(static_cast<std::size_t>(hp.rf_trees));
  const std::size_t n = xs.rows;
  std::size_t mtry = static_cast<std::size_t>(std::max(1.0, std::floor(std::sqrt(
                         static_cast<double>(xs.cols)))));
  if (mtry > xs.cols) mtry = xs.cols;
  for (std::size_t t = 0; t < params.trees.size(); ++t) {
    Rng rng(derive_seed(seed, hash_tag("rf-tree"), t));
    std::vector<std::uint32_t> sample(n);
    for (auto& r : sample) r = static_cast<std::uint32_t>(rng.below(n));
    std::sort(sample.begin(), sample.end());
    TreeBuilder builder{xs, labels, hp.rf_min_leaf, mtry, rng, params.trees[t], {}, {}};
    builder.build(sample);
  }
  return params;
}

}  // namespace casc::detail
