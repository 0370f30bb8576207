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
#include <algorithm>
#include <cmath>
#include <numbers>

#include "litscreen/error.hpp"
#include "models.hpp"

namespace litscreen::detail {
namespace {

// Score is the log posterior odds, log P(1|x) - log P(0|x).
class GaussianNb final : public Model {
 public:
  GaussianNb(std::vector<double> mean0, std::vector<double> var0, std::vector<double> mean1, std::vector<double> var1,
             double log_prior_ratio)
      : mean0_(std::move(mean0)), var0_(std::move(var0)), mean1_(std::move(mean1)), var1_(std::move(var1)),
        log_prior_ratio_(log_prior_ratio) {
    // contribution of an all-zero row; score() then corrects only nonzeros
    zero_score_ = log_prior_ratio_;
    for (std::size_t c = 0; c < mean0_.size(); ++c) zero_score_ += term(c, 0.0);
  }

  double score(const FeatureMatrix::RowView& row) const override {
    double s = zero_score_;
    for (std::size_t k = 0; k < row.columns.size(); ++k) {
      const auto c = row.columns[k];
      s += term(c, row.values[k]) - term(c, 0.0);
    }
    return s;
  }

  json to_json() const override {
    return json{{"mean0", mean0_}, {"var0", var0_}, {"mean1", mean1_}, {"var1", var1_},
                {"log_prior_ratio", log_prior_ratio_}};
  }

 private:
  static double log_density(double x, double mean, double var) {
    const double d = x - mean;
    return -0.5 * std::log(2.0 * std::numbers::pi * var) - d * d / (2.0 * var);
  }
  double term(std::size_t c, double x) const {
    return log_density(x, mean1_[c], var1_[c]) - log_density(x, mean0_[c], var0_[c]);
  }

  std::vector<double> mean0_, var0_, mean1_, var1_;
  double log_prior_ratio_;
  double zero_score_ = 0;
};

// Complement Naive Bayes: each class is described by the feature mass of
// every *other* class. Score = sum_j x_j (w1_j - w0_j), w_cj = -log theta~_cj.
// Columns with negative training values are not count-like and are left out.
class ComplementNb final : public Model {
 public:
  explicit ComplementNb(std::vector<double> weight_diff) : weight_diff_(std::move(weight_diff)) {}

  double score(const FeatureMatrix::RowView& row) const override {
    double s = 0;
    for (std::size_t k = 0; k < row.columns.size(); ++k) {
      s += weight_diff_[row.columns[k]] * std::max(0.0, row.values[k]);
    }
    return s;
  }

  json to_json() const override { return json{{"weight_diff", weight_diff_}}; }

 private:
  std::vector<double> weight_diff_;
};

}  // namespace

std::unique_ptr<Model> train_gnb(const ModelSpec& spec, const TrainingSet& data) {
  const FeatureMatrix& X = data.X;
  const std::size_t d = X.cols();
  const double var_smoothing = spec.param("var_smoothing");
  const bool balanced = spec.param("class_weight") != 0.0;

  double count[2] = {0, 0};
  std::vector<double> mean[2] = {std::vector<double>(d, 0.0), std::vector<double>(d, 0.0)};
  std::vector<double> var[2] = {std::vector<double>(d, 0.0), std::vector<double>(d, 0.0)};
  std::vector<double> nnz[2] = {std::vector<double>(d, 0.0), std::vector<double>(d, 0.0)};
  std::vector<double> all_mean(d, 0.0), all_var(d, 0.0), all_nnz(d, 0.0);
  for (std::size_t r = 0; r < X.rows(); ++r) {
    const int y = data.y[r];
    count[y] += 1;
    const auto row = X.row(r);
    for (std::size_t k = 0; k < row.columns.size(); ++k) {
      mean[y][row.columns[k]] += row.values[k];
      all_mean[row.columns[k]] += row.values[k];
    }
  }
  const double n = count[0] + count[1];
  for (std::size_t c = 0; c < d; ++c) {
    mean[0][c] /= count[0];
    mean[1][c] /= count[1];
    all_mean[c] /= n;
  }
  // two-pass variance; unstored zeros contribute mean^2 each
  for (std::size_t r = 0; r < X.rows(); ++r) {
    const int y = data.y[r];
    const auto row = X.row(r);
    for (std::size_t k = 0; k < row.columns.size(); ++k) {
      const auto c = row.columns[k];
      const double dy = row.values[k] - mean[y][c];
      const double da = row.values[k] - all_mean[c];
      var[y][c] += dy * dy;
      all_var[c] += da * da;
      nnz[y][c] += 1;
      all_nnz[c] += 1;
    }
  }
  double largest = 0;
  for (std::size_t c = 0; c < d; ++c) {
    for (int y = 0; y < 2; ++y) {
      var[y][c] = (var[y][c] + (count[y] - nnz[y][c]) * mean[y][c] * mean[y][c]) / count[y];
    }
    all_var[c] = (all_var[c] + (n - all_nnz[c]) * all_mean[c] * all_mean[c]) / n;
    largest = std::max(largest, all_var[c]);
  }
  const double epsilon = largest > 0 ? var_smoothing * largest : var_smoothing;
  for (std::size_t c = 0; c < d; ++c) {
    var[0][c] += epsilon;
    var[1][c] += epsilon;
  }
  const double log_prior_ratio = balanced ? 0.0 : std::log(count[1] / count[0]);
  return std::make_unique<GaussianNb>(std::move(mean[0]), std::move(var[0]), std::move(mean[1]), std::move(var[1]),
                                      log_prior_ratio);
}

std::unique_ptr<Model> train_cnb(const ModelSpec& spec, const TrainingSet& data) {
  const FeatureMatrix& X = data.X;
  const std::size_t d = X.cols();
  const double alpha = spec.param("alpha");
  if (alpha <= 0) throw Error("cnb alpha must be positive");

  std::vector<double> mass[2] = {std::vector<double>(d, 0.0), std::vector<double>(d, 0.0)};
  std::vector<char> usable(d, 1);
  for (std::size_t r = 0; r < X.rows(); ++r) {
    const auto row = X.row(r);
    for (std::size_t k = 0; k < row.columns.size(); ++k) {
      if (row.values[k] < 0) usable[row.columns[k]] = 0;
      mass[data.y[r]][row.columns[k]] += data.weights[r] * row.values[k];
    }
  }
  // complement of class c is the other class
  double total[2] = {0, 0};
  for (std::size_t c = 0; c < d; ++c) {
    if (!usable[c]) continue;
    total[0] += mass[1][c] + alpha;
    total[1] += mass[0][c] + alpha;
  }
  std::vector<double> diff(d, 0.0);
  for (std::size_t c = 0; c < d; ++c) {
    if (!usable[c]) continue;
    const double w0 = -std::log((mass[1][c] + alpha) / total[0]);
    const double w1 = -std::log((mass[0][c] + alpha) / total[1]);
    diff[c] = w1 - w0;
  }
  return std::make_unique<ComplementNb>(std::move(diff));
}

std::unique_ptr<Model> load_gnb(const json& j) {
  return std::make_unique<GaussianNb>(j.at("mean0").get<std::vector<double>>(), j.at("var0").get<std::vector<double>>(),
                                      j.at("mean1").get<std::vector<double>>(), j.at("var1").get<std::vector<double>>(),
                                      j.at("log_prior_ratio").get<double>());
}

std::unique_ptr<Model> load_cnb(const json& j) {
  return std::make_unique<ComplementNb>(j.at("weight_diff").get<std::vector<double>>());
}

}  // namespace litscreen::detail
