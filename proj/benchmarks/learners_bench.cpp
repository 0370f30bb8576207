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
#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "litscreen/learners.hpp"

namespace {

using namespace litscreen;

struct Data {
  FeatureMatrix X;
  std::vector<int> y;
};

const Data& data() {
  static const Data d = [] {
    std::mt19937_64 rng(3);
    std::normal_distribution<double> noise(0.0, 1.0);
    std::vector<std::string> names;
    for (int c = 0; c < 20; ++c) names.push_back("f" + std::to_string(c));
    Data out{FeatureMatrix(names), {}};
    for (int i = 0; i < 2000; ++i) {
      const int label = i % 9 == 0 ? 1 : 0;
      std::vector<double> row;
      for (int c = 0; c < 20; ++c) row.push_back(std::abs(noise(rng) + (c < 3 ? label : 0)));
      out.X.add_dense_row(row);
      out.y.push_back(label);
    }
    return out;
  }();
  return d;
}

void BM_Train(benchmark::State& state) {
  ModelSpec spec;
  spec.family = static_cast<ModelFamily>(state.range(0));
  if (spec.family == ModelFamily::kExtraTrees || spec.family == ModelFamily::kGbdt) spec.hyperparameters = {{"trees", 50}};
  state.SetLabel(std::string(family_name(spec.family)));
  for (auto _ : state) benchmark::DoNotOptimize(train(spec, data().X, data().y));
}
BENCHMARK(BM_Train)->DenseRange(0, 5)->Unit(benchmark::kMillisecond);

void BM_Score(benchmark::State& state) {
  ModelSpec spec;
  spec.family = static_cast<ModelFamily>(state.range(0));
  if (spec.family == ModelFamily::kExtraTrees || spec.family == ModelFamily::kGbdt) spec.hyperparameters = {{"trees", 50}};
  state.SetLabel(std::string(family_name(spec.family)));
  const Scorer scorer = train(spec, data().X, data().y);
  for (auto _ : state) benchmark::DoNotOptimize(scorer.score_batch(data().X));
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * data().X.rows()));
}
BENCHMARK(BM_Score)->DenseRange(0, 5);

}  // namespace

BENCHMARK_MAIN();
