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

// Deterministic stand-in for the transformer sidecar. Similarity is the
// cosine of signed feature-hashed bag-of-words embeddings (salted per model),
// and fine-tuning fits a small logistic model over hashed similarity, token
// overlap and keyword coverage. No checkpoints are needed.

#include <cstddef>
#include <iosfwd>
#include <map>
#include <mutex>
#include <string>
#include <string_view>
#include <vector>

namespace litscreen {

class StubSidecar {
 public:
  static constexpr std::string_view kVersion = "stub-1.0";

  // Handles one request envelope for `endpoint` (health, similarity,
  // finetune, score) and returns the response envelope. Never throws;
  // failures come back as {"ok": false, "error": {...}}.
  std::string handle(std::string_view endpoint, std::string_view request);

  std::size_t requests_handled() const;

  // Embedding cosine in [-1, 1] used by the similarity endpoint.
  static double similarity(std::string_view model_id, std::string_view a, std::string_view b);

 private:
  struct Classifier {
    std::vector<double> weights;
    std::string model_id;
  };

  mutable std::mutex mutex_;
  std::size_t handled_ = 0;
  std::map<std::string, Classifier> classifiers_;
};

// Line-delimited envelopes on `in`, responses on `out`, until EOF.
void serve_stdio(StubSidecar& sidecar, std::istream& in, std::ostream& out);

}  // namespace litscreen
