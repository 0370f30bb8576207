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
#pragma once

// Learner internals shared by the family implementations.

#include <cmath>
#include <cstdint>
#include <memory>
#include <random>
#include <span>
#include <vector>

#include <nlohmann/json.hpp>

#include "litscreen/learners.hpp"
#include "litscreen/matrix.hpp"

namespace litscreen::detail {

using nlohmann::json;

class Model {
 public:
  virtual ~Model() = default;
  virtual double score(const FeatureMatrix::RowView& row) const = 0;
  virtual json to_json() const = 0;
};

struct TrainingSet {
  const FeatureMatrix& X;
  std::span<const int> y;
  std::vector<double> weights;  // per-row sample weights
  std::size_t positives = 0;
};

std::unique_ptr<Model> train_linear(const ModelSpec& spec, const TrainingSet& data);
std::unique_ptr<Model> train_svm(const ModelSpec& spec, const TrainingSet& data);
std::unique_ptr<Model> train_gnb(const ModelSpec& spec, const TrainingSet& data);
std::unique_ptr<Model> train_cnb(const ModelSpec& spec, const TrainingSet& data);
std::unique_ptr<Model> train_extra_trees(const ModelSpec& spec, const TrainingSet& data);
std::unique_ptr<Model> train_gbdt(const ModelSpec& spec, const TrainingSet& data);

std::unique_ptr<Model> load_linear(const json& j);
std::unique_ptr<Model> load_svm(const json& j);
std::unique_ptr<Model> load_gnb(const json& j);
std::unique_ptr<Model> load_cnb(const json& j);
std::unique_ptr<Model> load_extra_trees(const json& j);
std::unique_ptr<Model> load_gbdt(const json& j);

inline double sigmoid(double z) {
  if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// mt19937_64 output is fixed by the standard; the [0, 1) mapping is ours so
// results do not depend on the library's distribution implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

 private:
  std::mt19937_64 engine_;
};

// Compact binary-tree node used by both tree families.
struct TreeNode {
  std::int32_t feature = -1;  // -1 for a leaf
  double threshold = 0.0;     // x <= threshold goes left
  std::int32_t left = -1;
  std::int32_t right = -1;
  double value = 0.0;
};

inline double eval_tree(const std::vector<TreeNode>& nodes, const FeatureMatrix::RowView& row) {
  std::int32_t i = 0;
  while (nodes[i].feature >= 0) {
    const auto& n = nodes[i];
    i = row.get(static_cast<std::uint32_t>(n.feature)) <= n.threshold ? n.left : n.right;
  }
  return nodes[i].value;
}

json tree_to_json(const std::vector<TreeNode>& nodes);
std::vector<TreeNode> tree_from_json(const json& j);

}  // namespace litscreen::detail
