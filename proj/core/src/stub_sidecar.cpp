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
#include "litscreen/stub_sidecar.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <numeric>
#include <ostream>
#include <random>

#include <nlohmann/json.hpp>

#include "litscreen/bridge.hpp"
#include "litscreen/features.hpp"
#include "litscreen/text.hpp"

namespace litscreen {

using json = nlohmann::json;

namespace {

constexpr std::size_t kEmbeddingDims = 1024;
constexpr double kToyStep = 0.5;

std::uint64_t fnv1a(std::string_view salt, std::string_view token) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto mix = [&h](unsigned char c) {
    h ^= c;
    h *= 0x100000001b3ULL;
  };
  for (unsigned char c : salt) mix(c);
  mix(0);
  for (unsigned char c : token) mix(c);
  return h;
}

std::vector<double> embed(std::string_view model_id, std::string_view text) {
  std::vector<double> v(kEmbeddingDims, 0.0);
  const TokenList tokens = tokenize(text);
  if (tokens.empty()) throw Error("text truncated to zero tokens");
  for (const auto& t : tokens) {
    const std::uint64_t h = fnv1a(model_id, t);
    v[h % kEmbeddingDims] += (h >> 63) ? -1.0 : 1.0;
  }
  return v;
}

// Toy pair representation for the fine-tune head.
std::vector<double> pair_inputs(std::string_view model_id, std::string_view q, std::string_view a) {
  const TokenSet qs(tokenize(q));
  const TokenSet as(tokenize(a));
  return {1.0, StubSidecar::similarity(model_id, q, a), jaccard(qs, as), match_prop(q, a)};
}

json ok_envelope(const json& id, json body) {
  return {{"protocol_version", kProtocolVersion}, {"id", id}, {"ok", true}, {"body", std::move(body)}};
}

json error_envelope(const json& id, const std::string& message) {
  return {{"protocol_version", kProtocolVersion},
          {"id", id},
          {"ok", false},
          {"error", {{"message", message}, {"log_tail", std::string("stub-sidecar: ") + message}}}};
}

struct PairIn {
  std::string model_id;
  std::string question;
  std::string article;
};

std::vector<PairIn> read_pairs(const json& body) {
  std::vector<PairIn> out;
  for (const json& p : body.at("pairs")) {
    PairIn in{p.at("model_id").get<std::string>(), p.at("question_text").get<std::string>(),
              p.at("article_text").get<std::string>()};
    parse_model_id(in.model_id);
    if (in.question.empty() || in.article.empty()) throw Error("empty pair text");
    out.push_back(std::move(in));
  }
  return out;
}

}  // namespace

double StubSidecar::similarity(std::string_view model_id, std::string_view a, std::string_view b) {
  const auto x = embed(model_id, a);
  const auto y = embed(model_id, b);
  double dot = 0, nx = 0, ny = 0;
  for (std::size_t i = 0; i < kEmbeddingDims; ++i) {
    dot += x[i] * y[i];
    nx += x[i] * x[i];
    ny += y[i] * y[i];
  }
  if (nx == 0 || ny == 0) return 0.0;  // every token cancelled out
  return std::clamp(dot / std::sqrt(nx * ny), -1.0, 1.0);
}

std::size_t StubSidecar::requests_handled() const {
  std::lock_guard lock(mutex_);
  return handled_;
}

std::string StubSidecar::handle(std::string_view endpoint, std::string_view request) {
  {
    std::lock_guard lock(mutex_);
    ++handled_;
  }
  json id = nullptr;
  try {
    const json envelope = json::parse(request);
    if (envelope.contains("id")) id = envelope["id"];
    if (!envelope.contains("protocol_version") || envelope["protocol_version"] != kProtocolVersion)
      return error_envelope(id, "unsupported protocol version").dump();
    if (endpoint.empty() && envelope.contains("endpoint")) endpoint = envelope["endpoint"].get_ref<const std::string&>();
    const json& body = envelope.at("body");

    if (endpoint == "health") {
      json models = json::array();
      for (const auto& e : transformer_roster())
        models.push_back({{"model_id", e.model_id}, {"heads", e.heads}, {"layers", e.layers}, {"vocab_size", e.vocab_size}});
      return ok_envelope(id, {{"sidecar_version", kVersion}, {"models", models}}).dump();
    }

    if (endpoint == "similarity") {
      json scores = json::array();
      for (const auto& p : read_pairs(body)) scores.push_back(similarity(p.model_id, p.question, p.article));
      return ok_envelope(id, {{"scores", scores}}).dump();
    }

    if (endpoint == "finetune") {
      FinetuneConfig config;
      config.base = parse_model_id(body.at("base_model").get<std::string>());
      config.epochs = body.at("epochs").get<int>();
      config.seed = body.at("seed").get<std::uint64_t>();
      for (const auto& [k, v] : body.at("hyperparameters").items()) config.hyperparameters[k] = v.get<double>();
      if (config.epochs != 1 && config.epochs != 2) return error_envelope(id, "epochs must be 1 or 2").dump();
      std::vector<LabeledPair> pairs;
      for (const json& p : body.at("pairs"))
        pairs.push_back({"", p.at(0).get<std::string>(), p.at(1).get<std::string>(), p.at(2).get<int>()});
      const bool has0 = std::any_of(pairs.begin(), pairs.end(), [](const auto& p) { return p.label == 0; });
      const bool has1 = std::any_of(pairs.begin(), pairs.end(), [](const auto& p) { return p.label == 1; });
      if (!has0 || !has1) return error_envelope(id, "training set must contain both labels").dump();

      const std::string model_id(model_id_name(config.base));
      std::vector<std::vector<double>> inputs;
      inputs.reserve(pairs.size());
      for (const auto& p : pairs) inputs.push_back(pair_inputs(model_id, p.question_text, p.article_text));

      std::vector<double> w(inputs.front().size(), 0.0);
      std::vector<std::size_t> order(pairs.size());
      std::iota(order.begin(), order.end(), 0);
      std::mt19937_64 rng(config.seed);
      for (int epoch = 0; epoch < config.epochs; ++epoch) {
        for (std::size_t i = order.size(); i > 1; --i) std::swap(order[i - 1], order[rng() % i]);
        for (std::size_t i : order) {
          double z = 0;
          for (std::size_t k = 0; k < w.size(); ++k) z += w[k] * inputs[i][k];
          const double p = 1.0 / (1.0 + std::exp(-z));
          const double g = p - pairs[i].label;
          for (std::size_t k = 0; k < w.size(); ++k) w[k] -= kToyStep * g * inputs[i][k];
        }
      }

      const std::string fingerprint = training_fingerprint(pairs, config);
      if (body.contains("fingerprint") && body["fingerprint"] != fingerprint)
        return error_envelope(id, "fingerprint mismatch").dump();
      const std::string handle_id = "ft-" + fingerprint.substr(0, 24);
      {
        std::lock_guard lock(mutex_);
        classifiers_[handle_id] = Classifier{w, model_id};
      }
      return ok_envelope(id, {{"handle_id", handle_id}, {"fingerprint", fingerprint}, {"epochs", config.epochs}}).dump();
    }

    if (endpoint == "score") {
      const std::string handle_id = body.at("handle_id").get<std::string>();
      Classifier model;
      {
        std::lock_guard lock(mutex_);
        auto it = classifiers_.find(handle_id);
        if (it == classifiers_.end()) return error_envelope(id, "unknown handle '" + handle_id + "'").dump();
        model = it->second;
      }
      json probs = json::array();
      for (const auto& p : read_pairs(body)) {
        const auto x = pair_inputs(model.model_id, p.question, p.article);
        double z = 0;
        for (std::size_t k = 0; k < x.size(); ++k) z += model.weights[k] * x[k];
        probs.push_back(1.0 / (1.0 + std::exp(-z)));
      }
      return ok_envelope(id, {{"probabilities", probs}}).dump();
    }

    return error_envelope(id, "unknown endpoint '" + std::string(endpoint) + "'").dump();
  } catch (const std::exception& e) {
    return error_envelope(id, e.what()).dump();
  }
}

void serve_stdio(StubSidecar& sidecar, std::istream& in, std::ostream& out) {
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    out << sidecar.handle("", line) << '\n';
    out.flush();
  }
}

}  // namespace litscreen
