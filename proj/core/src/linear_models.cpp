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
// Logistic regression (full-batch gradient descent) and linear hinge-loss SVM
// (epoch-ordered subgradient descent). Both learn on max-abs scaled
// features and store weights folded back into the raw feature space.

#include <algorithm>
#include <cmath>

#include "litscreen/error.hpp"
#include "models.hpp"

namespace litscreen::detail {
namespace {

std::vector<double> max_abs_scale(const FeatureMatrix& X) {
  std::vector<double> scale(X.cols(), 0.0);
  for (std::size_t r = 0; r < X.rows(); ++r) {
    const auto row = X.row(r);
    for (std::size_t k = 0; k < row.columns.size(); ++k) {
      scale[row.columns[k]] = std::max(scale[row.columns[k]], std::abs(row.values[k]));
    }
  }
  for (double& s : scale) s = s > 0 ? 1.0 / s : 1.0;
  return scale;
}

double dot(const std::vector<double>& w, const FeatureMatrix::RowView& row, const std::vector<double>* scale) {
  double s = 0;
  for (std::size_t k = 0; k < row.columns.size(); ++k) {
    const auto c = row.columns[k];
    s += w[c] * (scale ? (*scale)[c] : 1.0) * row.values[k];
  }
  return s;
}

class LinearModel final : public Model {
 public:
  LinearModel(std::vector<double> weights, double bias, bool probability)
      : weights_(std::move(weights)), bias_(bias), probability_(probability) {}

  double score(const FeatureMatrix::RowView& row) const override {
    const double margin = bias_ + dot(weights_, row, nullptr);
    return probability_ ? sigmoid(margin) : margin;
  }

  json to_json() const override { return json{{"weights", weights_}, {"bias", bias_}}; }

 private:
  std::vector<double> weights_;
  double bias_;
  bool probability_;
};

std::vector<double> fold_scale(std::vector<double> w, const std::vector<double>& scale) {
  for (std::size_t c = 0; c < w.size(); ++c) w[c] *= scale[c];
  return w;
}

// Largest eigenvalue of the weighted second-moment matrix of [x, 1] by power
// iteration from a fixed start; bounds the logistic loss curvature.
double curvature_bound(const FeatureMatrix& X, const std::vector<double>& scale, const std::vector<double>& weights,
                       double weight_sum) {
  const std::size_t d = X.cols();
  std::vector<double> v(d + 1, 1.0 / std::sqrt(static_cast<double>(d + 1)));
  double lambda = 1.0;
  for (int iter = 0; iter < 60; ++iter) {
    std::vector<double> next(d + 1, 0.0);
    for (std::size_t r = 0; r < X.rows(); ++r) {
      const auto row = X.row(r);
      const double xv = dot(v, row, &scale) + v[d];
      const double a = weights[r] * xv / weight_sum;
      for (std::size_t k = 0; k < row.columns.size(); ++k) next[row.columns[k]] += a * scale[row.columns[k]] * row.values[k];
      next[d] += a;
    }
    double norm = 0;
    for (double x : next) norm += x * x;
    norm = std::sqrt(norm);
    if (norm == 0) break;
    lambda = norm;
    for (std::size_t i = 0; i <= d; ++i) v[i] = next[i] / norm;
  }
  return lambda;
}

}  // namespace

std::unique_ptr<Model> train_linear(const ModelSpec& spec, const TrainingSet& data) {
  const FeatureMatrix& X = data.X;
  const double l2 = spec.param("l2");
  const auto iterations = static_cast<std::size_t>(spec.param("iterations"));
  const double tolerance = spec.param("tolerance");
  const std::size_t d = X.cols();
  const auto scale = max_abs_scale(X);
  double weight_sum = 0;
  for (double w : data.weights) weight_sum += w;

  // 1.1 margin over the power-iteration estimate keeps the step below 2/L.
  const double lipschitz = 0.25 * curvature_bound(X, scale, data.weights, weight_sum) * 1.1 + l2;
  const double step = 1.0 / lipschitz;

  std::vector<double> w(d, 0.0), grad(d, 0.0);
  double b = 0.0;
  for (std::size_t it = 0; it < iterations; ++it) {
    std::fill(grad.begin(), grad.end(), 0.0);
    double grad_b = 0;
    for (std::size_t r = 0; r < X.rows(); ++r) {
      const auto row = X.row(r);
      const double p = sigmoid(b + dot(w, row, &scale));
      const double residual = data.weights[r] * (p - data.y[r]) / weight_sum;
      for (std::size_t k = 0; k < row.columns.size(); ++k) {
        grad[row.columns[k]] += residual * scale[row.columns[k]] * row.values[k];
      }
      grad_b += residual;
    }
    double largest = std::abs(grad_b);
    for (std::size_t c = 0; c < d; ++c) {
      grad[c] += l2 * w[c];
      largest = std::max(largest, std::abs(grad[c]));
    }
    if (largest < tolerance) break;
    for (std::size_t c = 0; c < d; ++c) w[c] -= step * grad[c];
    b -= step * grad_b;
  }
  return std::make_unique<LinearModel>(fold_scale(std::move(w), scale), b, true);
}

std::unique_ptr<Model> train_svm(const ModelSpec& spec, const TrainingSet& data) {
  const FeatureMatrix& X = data.X;
  const double l2 = spec.param("l2");
  const auto epochs = static_cast<std::size_t>(spec.param("epochs"));
  const double eta0 = spec.param("eta0");
  if (eta0 <= 0) throw Error("svm eta0 must be positive");
  const auto scale = max_abs_scale(X);

  // w = shrink * v keeps the per-step L2 decay O(1) on sparse rows.
  std::vector<double> v(X.cols(), 0.0);
  double shrink = 1.0;
  double b = 0.0;
  std::size_t t = 0;
  for (std::size_t epoch = 0; epoch < epochs; ++epoch) {
    for (std::size_t r = 0; r < X.rows(); ++r) {
      ++t;
      const double eta = eta0 / (1.0 + eta0 * l2 * static_cast<double>(t));
      const auto row = X.row(r);
      const double sign = data.y[r] ? 1.0 : -1.0;
      const double margin = sign * (b + shrink * dot(v, row, &scale));
      shrink *= (1.0 - eta * l2);
      if (margin < 1.0) {
        const double g = eta * data.weights[r] * sign;
        for (std::size_t k = 0; k < row.columns.size(); ++k) {
          v[row.columns[k]] += g * scale[row.columns[k]] * row.values[k] / shrink;
        }
        b += g;
      }
      if (shrink < 1e-9) {
        for (double& x : v) x *= shrink;
        shrink = 1.0;
      }
    }
  }
  for (double& x : v) x *= shrink;
  return std::make_unique<LinearModel>(fold_scale(std::move(v), scale), b, false);
}

std::unique_ptr<Model> load_linear(const json& j) {
  return std::make_unique<LinearModel>(j.at("weights").get<std::vector<double>>(), j.at("bias").get<double>(), true);
}

std::unique_ptr<Model> load_svm(const json& j) {
  return std::make_unique<LinearModel>(j.at("weights").get<std::vector<double>>(), j.at("bias").get<double>(), false);
}

}  // namespace litscreen::detail
