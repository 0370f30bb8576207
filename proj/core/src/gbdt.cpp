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
// Gradient-boosted decision trees with logistic loss. Features are
// quantized into at most max_bins histogram bins per column; trees grow
// depth-wise with second-order gain and L2-regularized leaf values.
// score(x) = sigmoid(F0 + sum_t learning_rate * tree_t(x)), where F0 is the
// prior log-odds of the weighted training labels.

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "litscreen/error.hpp"
#include "models.hpp"

namespace litscreen::detail {
namespace {

class Gbdt final : public Model {
 public:
  Gbdt(double base, double learning_rate, std::vector<std::vector<TreeNode>> trees)
      : base_(base), learning_rate_(learning_rate), trees_(std::move(trees)) {}

  double raw(const FeatureMatrix::RowView& row) const {
    double f = base_;
    for (const auto& t : trees_) f += learning_rate_ * eval_tree(t, row);
    return f;
  }

  double score(const FeatureMatrix::RowView& row) const override { return sigmoid(raw(row)); }

  json to_json() const override {
    json trees = json::array();
    for (const auto& t : trees_) trees.push_back(tree_to_json(t));
    return json{{"base", base_}, {"learning_rate", learning_rate_}, {"trees", trees}};
  }

 private:
  double base_;
  double learning_rate_;
  std::vector<std::vector<TreeNode>> trees_;
};

// Per-column bin upper bounds; value x falls in the first bin whose bound is >= x.
struct BinMap {
  std::vector<std::size_t> offset;       // first histogram slot of each column
  std::vector<std::vector<double>> bounds;
  std::vector<std::uint32_t> zero_bin;   // bin of an unstored zero
  std::size_t total_bins = 0;

  std::uint32_t bin_of(std::size_t column, double x) const {
    const auto& b = bounds[column];
    auto it = std::lower_bound(b.begin(), b.end(), x);
    if (it == b.end()) --it;
    return static_cast<std::uint32_t>(it - b.begin());
  }
};

BinMap make_bins(const FeatureMatrix& X, std::size_t max_bins) {
  const std::size_t n = X.rows();
  std::vector<std::map<double, std::size_t>> values(X.cols());
  std::vector<std::size_t> stored(X.cols(), 0);
  for (std::size_t r = 0; r < n; ++r) {
    const auto row = X.row(r);
    for (std::size_t k = 0; k < row.columns.size(); ++k) {
      ++values[row.columns[k]][row.values[k]];
      ++stored[row.columns[k]];
    }
  }
  BinMap bins;
  bins.offset.resize(X.cols());
  bins.bounds.resize(X.cols());
  bins.zero_bin.resize(X.cols());
  for (std::size_t c = 0; c < X.cols(); ++c) {
    auto& distinct = values[c];
    if (stored[c] < n) distinct[0.0] += n - stored[c];
    auto& bounds = bins.bounds[c];
    if (distinct.size() <= max_bins) {
      for (const auto& [v, count] : distinct) bounds.push_back(v);
    } else {
      // equal-frequency cuts over the value multiset
      const double per_bin = static_cast<double>(n) / static_cast<double>(max_bins);
      double seen = 0;
      double next_cut = per_bin;
      for (auto it = distinct.begin(); it != distinct.end(); ++it) {
        seen += static_cast<double>(it->second);
        const bool last = std::next(it) == distinct.end();
        if (last || (seen >= next_cut && bounds.size() + 1 < max_bins)) {
          bounds.push_back(it->first);
          while (next_cut <= seen) next_cut += per_bin;
        }
      }
    }
    if (bounds.empty()) bounds.push_back(0.0);
    bins.offset[c] = bins.total_bins;
    bins.total_bins += bounds.size();
    bins.zero_bin[c] = bins.bin_of(c, 0.0);
  }
  return bins;
}

struct BinnedRows {
  std::vector<std::size_t> row_ptr;
  std::vector<std::uint32_t> columns;
  std::vector<std::uint32_t> bins;

  std::uint32_t bin(std::size_t r, std::uint32_t column, const BinMap& map) const {
    auto first = columns.begin() + static_cast<std::ptrdiff_t>(row_ptr[r]);
    auto last = columns.begin() + static_cast<std::ptrdiff_t>(row_ptr[r + 1]);
    auto it = std::lower_bound(first, last, column);
    if (it == last || *it != column) return map.zero_bin[column];
    return bins[static_cast<std::size_t>(it - columns.begin())];
  }
};

BinnedRows bin_rows(const FeatureMatrix& X, const BinMap& map) {
  BinnedRows out;
  out.row_ptr.reserve(X.rows() + 1);
  out.row_ptr.push_back(0);
  for (std::size_t r = 0; r < X.rows(); ++r) {
    const auto row = X.row(r);
    for (std::size_t k = 0; k < row.columns.size(); ++k) {
      out.columns.push_back(row.columns[k]);
      out.bins.push_back(map.bin_of(row.columns[k], row.values[k]));
    }
    out.row_ptr.push_back(out.columns.size());
  }
  return out;
}

struct GrowParams {
  std::size_t max_depth;
  std::size_t min_leaf;
  double l2;
  double min_hessian;
};

class TreeGrower {
 public:
  TreeGrower(const FeatureMatrix& X, const BinMap& map, const BinnedRows& binned, const GrowParams& params)
      : X_(X), map_(map), binned_(binned), params_(params), grad_(map.total_bins, 0.0), hess_(map.total_bins, 0.0),
        count_(map.total_bins, 0), touched_flag_(X.cols(), 0) {}

  // Grows one tree on (g, h); leaf_of[r] receives the leaf index of each row.
  std::vector<TreeNode> grow(const std::vector<double>& g, const std::vector<double>& h,
                             std::vector<std::int32_t>& leaf_of) {
    std::vector<TreeNode> nodes(1);
    struct Pending {
      std::int32_t node;
      std::vector<std::size_t> rows;
      std::size_t depth;
    };
    std::vector<Pending> level;
    std::vector<std::size_t> all(X_.rows());
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
    level.push_back({0, std::move(all), 0});
    while (!level.empty()) {
      std::vector<Pending> next;
      for (auto& p : level) {
        double G = 0, H = 0;
        for (auto r : p.rows) {
          G += g[r];
          H += h[r];
        }
        nodes[p.node].value = -G / (H + params_.l2);
        const bool can_split = p.depth < params_.max_depth && p.rows.size() >= 2 * params_.min_leaf;
        const Split split = can_split ? best_split(p.rows, g, h, G, H) : Split{};
        if (split.feature < 0) {
          for (auto r : p.rows) leaf_of[r] = p.node;
          continue;
        }
        std::vector<std::size_t> left, right;
        for (auto r : p.rows) {
          (binned_.bin(r, static_cast<std::uint32_t>(split.feature), map_) <= split.bin ? left : right).push_back(r);
        }
        const auto l = static_cast<std::int32_t>(nodes.size());
        nodes.push_back(TreeNode{});
        nodes.push_back(TreeNode{});
        nodes[p.node].feature = split.feature;
        nodes[p.node].threshold = map_.bounds[static_cast<std::size_t>(split.feature)][split.bin];
        nodes[p.node].left = l;
        nodes[p.node].right = l + 1;
        next.push_back({l, std::move(left), p.depth + 1});
        next.push_back({l + 1, std::move(right), p.depth + 1});
      }
      level = std::move(next);
    }
    return nodes;
  }

 private:
  struct Split {
    std::int32_t feature = -1;
    std::uint32_t bin = 0;
  };

  Split best_split(const std::vector<std::size_t>& rows, const std::vector<double>& g, const std::vector<double>& h,
                   double G, double H) {
    touched_.clear();
    for (auto r : rows) {
      for (std::size_t k = binned_.row_ptr[r]; k < binned_.row_ptr[r + 1]; ++k) {
        const auto c = binned_.columns[k];
        if (!touched_flag_[c]) {
          touched_flag_[c] = 1;
          touched_.push_back(c);
        }
        const std::size_t slot = map_.offset[c] + binned_.bins[k];
        grad_[slot] += g[r];
        hess_[slot] += h[r];
        count_[slot] += 1;
      }
    }
    std::sort(touched_.begin(), touched_.end());
    const double parent = G * G / (H + params_.l2);
    const auto node_rows = rows.size();
    Split best;
    double best_gain = 0.0;
    for (auto c : touched_) {
      const std::size_t first = map_.offset[c];
      const std::size_t nb = map_.bounds[c].size();
      // unstored zeros: whatever the stored entries do not account for
      double sg = 0, sh = 0;
      std::size_t sn = 0;
      for (std::size_t b = 0; b < nb; ++b) {
        sg += grad_[first + b];
        sh += hess_[first + b];
        sn += count_[first + b];
      }
      const std::size_t zslot = first + map_.zero_bin[c];
      grad_[zslot] += G - sg;
      hess_[zslot] += H - sh;
      count_[zslot] += node_rows - sn;

      double gl = 0, hl = 0;
      std::size_t nl = 0;
      for (std::size_t b = 0; b + 1 < nb; ++b) {
        gl += grad_[first + b];
        hl += hess_[first + b];
        nl += count_[first + b];
        const std::size_t nr = node_rows - nl;
        if (nl < params_.min_leaf) continue;
        if (nr < params_.min_leaf) break;
        const double gr = G - gl, hr = H - hl;
        if (hl < params_.min_hessian || hr < params_.min_hessian) continue;
        const double gain = gl * gl / (hl + params_.l2) + gr * gr / (hr + params_.l2) - parent;
        if (gain > best_gain) {
          best_gain = gain;
          best = Split{static_cast<std::int32_t>(c), static_cast<std::uint32_t>(b)};
        }
      }
      std::fill(grad_.begin() + static_cast<std::ptrdiff_t>(first), grad_.begin() + static_cast<std::ptrdiff_t>(first + nb), 0.0);
      std::fill(hess_.begin() + static_cast<std::ptrdiff_t>(first), hess_.begin() + static_cast<std::ptrdiff_t>(first + nb), 0.0);
      std::fill(count_.begin() + static_cast<std::ptrdiff_t>(first), count_.begin() + static_cast<std::ptrdiff_t>(first + nb), 0);
      touched_flag_[c] = 0;
    }
    return best;
  }

  const FeatureMatrix& X_;
  const BinMap& map_;
  const BinnedRows& binned_;
  GrowParams params_;
  std::vector<double> grad_, hess_;
  std::vector<std::size_t> count_;
  std::vector<char> touched_flag_;
  std::vector<std::uint32_t> touched_;
};

}  // namespace

std::unique_ptr<Model> train_gbdt(const ModelSpec& spec, const TrainingSet& data) {
  const FeatureMatrix& X = data.X;
  const auto n_trees = static_cast<std::size_t>(spec.param("trees"));
  const double learning_rate = spec.param("learning_rate");
  const auto max_bins = static_cast<std::size_t>(spec.param("max_bins"));
  if (max_bins < 2) throw Error("gbdt max_bins must be at least 2");
  if (learning_rate < 0) throw Error("gbdt learning_rate must be non-negative");
  GrowParams params{static_cast<std::size_t>(std::max(0.0, spec.param("max_depth"))),
                    static_cast<std::size_t>(std::max(1.0, spec.param("min_leaf"))), spec.param("l2"),
                    spec.param("min_hessian")};
  if (params.l2 < 0) throw Error("gbdt l2 must be non-negative");

  const std::size_t n = X.rows();
  double weight = 0, pos = 0;
  for (std::size_t i = 0; i < n; ++i) {
    weight += data.weights[i];
    if (data.y[i]) pos += data.weights[i];
  }
  const double prior = pos / weight;
  const double base = std::log(prior / (1.0 - prior));

  const BinMap map = make_bins(X, max_bins);
  const BinnedRows binned = bin_rows(X, map);
  TreeGrower grower(X, map, binned, params);

  std::vector<double> f(n, base), g(n), h(n);
  std::vector<std::int32_t> leaf_of(n, 0);
  std::vector<std::vector<TreeNode>> trees;
  trees.reserve(n_trees);
  for (std::size_t t = 0; t < n_trees; ++t) {
    for (std::size_t i = 0; i < n; ++i) {
      const double p = sigmoid(f[i]);
      g[i] = data.weights[i] * (p - static_cast<double>(data.y[i]));
      h[i] = data.weights[i] * std::max(p * (1.0 - p), 1e-16);
    }
    auto tree = grower.grow(g, h, leaf_of);
    for (std::size_t i = 0; i < n; ++i) f[i] += learning_rate * tree[static_cast<std::size_t>(leaf_of[i])].value;
    trees.push_back(std::move(tree));
  }
  return std::make_unique<Gbdt>(base, learning_rate, std::move(trees));
}

std::unique_ptr<Model> load_gbdt(const json& j) {
  std::vector<std::vector<TreeNode>> trees;
  for (const auto& t : j.at("trees")) trees.push_back(tree_from_json(t));
  return std::make_unique<Gbdt>(j.at("base").get<double>(), j.at("learning_rate").get<double>(), std::move(trees));
}

}  // namespace litscreen::detail
