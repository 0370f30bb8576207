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

#include <cstdint>
#include <iosfwd>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "litscreen/matrix.hpp"

namespace litscreen {

enum class ModelFamily { kLinear, kGnb, kCnb, kSvm, kExtraTrees, kGbdt };

std::string_view family_name(ModelFamily family);
// Accepts the names produced by family_name(). Throws Error otherwise.
ModelFamily parse_family(std::string_view name);

// Family plus hyperparameter overrides. Every hyperparameter has a default:
//
//   linear      l2=1e-4 iterations=500 tolerance=1e-8 class_weight=0
//   gnb         var_smoothing=1e-9 class_weight=0
//   cnb         alpha=1 class_weight=0
//   svm         l2=1e-4 epochs=30 eta0=0.1 class_weight=0
//   extratrees  trees=300 min_leaf=1 max_depth=0 class_weight=0
//   gbdt        trees=300 max_depth=6 learning_rate=0.1 max_bins=255
//               min_leaf=20 l2=1 min_hessian=1e-3 class_weight=0
//
// class_weight=1 switches on inverse class-frequency sample weights.
// max_depth=0 means unlimited. The seed drives all randomness.
struct ModelSpec {
  ModelFamily family = ModelFamily::kGbdt;
  std::map<std::string, double> hyperparameters;
  std::uint64_t seed = 0;

  static const std::map<std::string, double>& defaults(ModelFamily family);
  // Defaults merged with overrides. Throws Error on an unknown name.
  std::map<std::string, double> resolved() const;
  double param(std::string_view name) const;
};

namespace detail {
class Model;
}

// A trained model. Immutable and safe to share across threads. Higher
// scores mean "more likely relevant".
class Scorer {
 public:
  Scorer() = default;

  ModelFamily family() const noexcept { return spec_.family; }
  const ModelSpec& spec() const noexcept { return spec_; }
  const std::vector<std::string>& feature_names() const noexcept { return features_; }

  // One finite score per row, in row order. Columns are matched by name;
  // throws SchemaError naming missing or extra features.
  std::vector<double> score_batch(const FeatureMatrix& X) const;

  // Structured-text dump (JSON); see docs/model_format.md.
  void save(std::ostream& out) const;
  static Scorer load(std::istream& in);

 private:
  friend Scorer train(const ModelSpec&, const FeatureMatrix&, std::span<const int>);

  ModelSpec spec_;
  std::vector<std::string> features_;
  std::shared_ptr<const detail::Model> model_;
};

inline constexpr int kModelFormatVersion = 1;

// Deterministic in (spec, X, y). Throws Error on a length mismatch, an empty
// matrix, a non-finite feature value, labels outside {0, 1}, or a single
// class for any family other than extratrees.
Scorer train(const ModelSpec& spec, const FeatureMatrix& X, std::span<const int> y);

}  // namespace litscreen
