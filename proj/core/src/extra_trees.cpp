// Copyright 2026 The litscreen Authors. All Rights Reserved.
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//     http://www.apache.org/licenses/LICENSE-2.0
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// Extremely randomized trees: at every node each non-constant feature gets
// one uniformly random threshold in (min, max) of the node's values; the
// threshold with the lowest weighted Gini impurity wins. Leaves hold the
// weighted share of relevant rows, and the ensemble score is their mean.

#include <algorithm>
#include <cmath>
#include <limits>

#include "litscreen/error.hpp"
#include "models.hpp"

namespace litscreen::detail {
namespace {

class ExtraTrees final : public Model {
 public:
  explicit ExtraTrees(std::vector<std::vector<TreeNode>> trees) : trees_(std::move(trees)) {
    if (trees_.empty()) throw Error("extratrees model has no trees");
  }

  double score(const FeatureMatrix::RowView& row) const override {
    double s = 0;
    for (const auto& t : trees_) s += eval_tree(t, row);
    return s / static_cast<double>(trees_.size());
  }

  json to_json() const override {
    json trees = json::array();
    for (const auto& t : trees_) trees.push_back(tree_to_json(t));
    return json{{"trees", trees}};
  }

 private:
  std::vector<std::vector<TreeNode>> trees_;
};

struct FeatureStats {
  double min = std::numeric_limits<double>::infinity();
  double max = -std::numeric_limits<double>::infinity();
  double stored_weight = 0;      // rows with a stored (nonzero) value
  double stored_pos_weight = 0;
  double threshold = 0;
  double right_weight = 0;       // rows with value > threshold
  double right_pos_weight = 0;
};

class TreeBuilder {
 public:
  TreeBuilder(const TrainingSet& data, std::size_t min_leaf, std::size_t max_depth, Rng& rng)
      : data_(data), min_leaf_(min_leaf), max_depth_(max_depth), rng_(rng), stats_(data.X.cols()),
        touched_flag_(data.X.cols(), 0), counts_(data.X.cols(), 0.0) {}

  std::vector<TreeNode> build() {
    std::vector<std::size_t> all(data_.X.rows());
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
    nodes_.clear();
    nodes_.push_back(TreeNode{});
    struct Pending {
      std::int32_t node;
      std::vector<std::size_t> rows;
      std::size_t depth;
    };
    std::vector<Pending> stack;
    stack.push_back({0, std::move(all), 0});
    while (!stack.empty()) {
      Pending p = std::move(stack.back());
      stack.pop_back();
      double weight = 0, pos = 0;
      for (auto r : p.rows) {
        weight += data_.weights[r];
        if (data_.y[r]) pos += data_.weights[r];
      }
      nodes_[p.node].value = weight > 0 ? pos / weight : 0.0;
      const bool pure = pos == 0 || pos == weight;
      if (pure || p.rows.size() < 2 * min_leaf_ || (max_depth_ && p.depth >= max_depth_)) continue;
      auto split = choose_split(p.rows, weight, pos);
      if (split.feature < 0) continue;
      std::vector<std::size_t> left, right;
      for (auto r : p.rows) {
        (data_.X.row(r).get(static_cast<std::uint32_t>(split.feature)) <= split.threshold ? left : right).push_back(r);
      }
      if (left.size() < min_leaf_ || right.size() < min_leaf_) continue;
      const auto l = static_cast<std::int32_t>(nodes_.size());
      nodes_.push_back(TreeNode{});
      nodes_.push_back(TreeNode{});
      nodes_[p.node].feature = split.feature;
      nodes_[p.node].threshold = split.threshold;
      nodes_[p.node].left = l;
      nodes_[p.node].right = l + 1;
      stack.push_back({l + 1, std::move(right), p.depth + 1});
      stack.push_back({l, std::move(left), p.depth + 1});
    }
    return std::move(nodes_);
  }

 private:
  struct Split {
    std::int32_t feature = -1;
    double threshold = 0;
  };

  Split choose_split(const std::vector<std::size_t>& rows, double weight, double pos) {
    const auto node_size = static_cast<double>(rows.size());
    touched_.clear();
    // pass 1: per-feature range over stored values
    for (auto r : rows) {
      const auto row = data_.X.row(r);
      for (std::size_t k = 0; k < row.columns.size(); ++k) {
        const auto c = row.columns[k];
        auto& s = stats_[c];
        if (!touched_flag_[c]) {
          touched_flag_[c] = 1;
          touched_.push_back(c);
          s = FeatureStats{};
          counts_[c] = 0;
        }
        s.min = std::min(s.min, row.values[k]);
        s.max = std::max(s.max, row.values[k]);
        s.stored_weight += data_.weights[r];
        if (data_.y[r]) s.stored_pos_weight += data_.weights[r];
        counts_[c] += 1;
      }
    }
    std::sort(touched_.begin(), touched_.end());
    // thresholds drawn in ascending feature order
    std::vector<std::uint32_t> candidates;
    for (auto c : touched_) {
      auto& s = stats_[c];
      if (counts_[c] < node_size) {  // some rows hold an unstored zero
        s.min = std::min(s.min, 0.0);
        s.max = std::max(s.max, 0.0);
      }
      if (!(s.max > s.min)) continue;
      s.threshold = s.min + rng_.uniform() * (s.max - s.min);
      candidates.push_back(c);
    }
    // pass 2: weight on the right of each threshold
    for (auto r : rows) {
      const auto row = data_.X.row(r);
      for (std::size_t k = 0; k < row.columns.size(); ++k) {
        auto& s = stats_[row.columns[k]];
        if (row.values[k] > s.threshold) {
          s.right_weight += data_.weights[r];
          if (data_.y[r]) s.right_pos_weight += data_.weights[r];
        }
      }
    }
    Split best;
    double best_impurity = std::numeric_limits<double>::infinity();
    for (auto c : candidates) {
      auto& s = stats_[c];
      double rw = s.right_weight, rp = s.right_pos_weight;
      if (s.threshold < 0.0) {  // unstored zeros fall right as well
        rw += weight - s.stored_weight;
        rp += pos - s.stored_pos_weight;
      }
      const double lw = weight - rw, lp = pos - rp;
      if (lw <= 0 || rw <= 0) continue;
      const double gini_l = 1.0 - (lp / lw) * (lp / lw) - ((lw - lp) / lw) * ((lw - lp) / lw);
      const double gini_r = 1.0 - (rp / rw) * (rp / rw) - ((rw - rp) / rw) * ((rw - rp) / rw);
      const double impurity = lw * gini_l + rw * gini_r;
      if (impurity < best_impurity) {
        best_impurity = impurity;
        best = Split{static_cast<std::int32_t>(c), s.threshold};
      }
    }
    for (auto c : touched_) touched_flag_[c] = 0;
    return best;
  }

  const TrainingSet& data_;
  std::size_t min_leaf_;
  std::size_t max_depth_;
  Rng& rng_;
  std::vector<FeatureStats> stats_;
  std::vector<char> touched_flag_;
  std::vector<std::uint32_t> touched_;
  std::vector<double> counts_;
  std::vector<TreeNode> nodes_;
};

}  // namespace

std::unique_ptr<Model> train_extra_trees(const ModelSpec& spec, const TrainingSet& data) {
  const auto trees = static_cast<std::size_t>(spec.param("trees"));
  const auto min_leaf = static_cast<std::size_t>(std::max(1.0, spec.param("min_leaf")));
  const auto max_depth = static_cast<std::size_t>(std::max(0.0, spec.param("max_depth")));
  if (trees == 0) throw Error("extratrees needs at least one tree");
  std::vector<std::vector<TreeNode>> forest;
  forest.reserve(trees);
  for (std::size_t t = 0; t < trees; ++t) {
    Rng rng(splitmix64(spec.seed ^ splitmix64(t + 1)));
    TreeBuilder builder(data, min_leaf, max_depth, rng);
    forest.push_back(builder.build());
  }
  return std::make_unique<ExtraTrees>(std::move(forest));
}

std::unique_ptr<Model> load_extra_trees(const json& j) {
  std::vector<std::vector<TreeNode>> forest;
  for (const auto& t : j.at("trees")) forest.push_back(tree_from_json(t));
  return std::make_unique<ExtraTrees>(std::move(forest));
}

}  // namespace litscreen::detail
