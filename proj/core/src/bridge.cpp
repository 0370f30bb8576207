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
#include "litscreen/bridge.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <future>
#include <set>
#include <thread>

#include <nlohmann/json.hpp>

#include "litscreen/digest.hpp"

namespace litscreen {

using json = nlohmann::json;

namespace {

constexpr std::array<RosterEntry, 3> kRoster = {{
    {TransformerModel::kBioBert, "biobert", "BioBERT", 12, 12, 28996},
    {TransformerModel::kBlueBert, "bluebert", "BlueBERT", 12, 12, 30522},
    {TransformerModel::kBlueBertLarge, "bluebert_large", "BlueBERTxL", 16, 24, 30522},
}};

constexpr std::size_t kExcerptChars = 200;

std::string excerpt(std::string_view payload) {
  if (payload.size() <= kExcerptChars) return std::string(payload);
  return std::string(payload.substr(0, kExcerptChars)) + "...";
}

[[noreturn]] void malformed(std::string_view what, std::string_view payload) {
  throw BridgeError("malformed sidecar response (" + std::string(what) + "): " + excerpt(payload));
}

void check_pair(const PairRequest& pair, std::size_t index) {
  if (pair.question_text.empty() || pair.article_text.empty())
    throw Error("pair " + std::to_string(index) + " has empty question or article text");
}

json pairs_json(std::span<const PairRequest> pairs, std::size_t begin, std::size_t end) {
  json out = json::array();
  for (std::size_t i = begin; i < end; ++i)
    out.push_back({{"question_text", pairs[i].question_text},
                   {"article_text", pairs[i].article_text},
                   {"model_id", model_id_name(pairs[i].model)}});
  return out;
}

// Pulls a numeric array of exactly `expected` finite values in [lo, hi].
std::vector<double> read_values(const json& body, const char* field, std::size_t expected, double lo, double hi,
                                std::string_view raw) {
  if (!body.is_object() || !body.contains(field) || !body[field].is_array()) malformed(std::string("missing ") + field, raw);
  const json& arr = body[field];
  if (arr.size() != expected)
    malformed("expected " + std::to_string(expected) + " values, got " + std::to_string(arr.size()), raw);
  std::vector<double> values;
  values.reserve(expected);
  for (const json& v : arr) {
    if (!v.is_number()) malformed("non-numeric value", raw);
    const double x = v.get<double>();
    if (!std::isfinite(x) || x < lo || x > hi) {
      throw BridgeError("sidecar value out of range [" + std::to_string(lo) + ", " + std::to_string(hi) +
                        "]: " + excerpt(v.dump()));
    }
    values.push_back(x);
  }
  return values;
}

}  // namespace

const std::array<RosterEntry, 3>& transformer_roster() { return kRoster; }

const RosterEntry& roster_entry(TransformerModel model) {
  for (const auto& e : kRoster)
    if (e.model == model) return e;
  throw Error("unknown transformer model");
}

std::string_view model_id_name(TransformerModel model) { return roster_entry(model).model_id; }

TransformerModel parse_model_id(std::string_view name) {
  for (const auto& e : kRoster)
    if (e.model_id == name) return e.model;
  throw Error("unknown transformer model id '" + std::string(name) + "'");
}

std::map<std::string, double> FinetuneConfig::resolved_hyperparameters() const {
  std::map<std::string, double> out = {
      {"learning_rate", 2e-5}, {"batch_size", 16}, {"max_seq_length", 512}, {"warmup_fraction", 0.1}};
  for (const auto& [k, v] : hyperparameters) {
    if (!out.count(k)) throw Error("unknown fine-tune hyperparameter '" + k + "'");
    out[k] = v;
  }
  return out;
}

namespace {

json finetune_config_json(const FinetuneConfig& config) {
  json hp = json::object();
  for (const auto& [k, v] : config.resolved_hyperparameters()) hp[k] = v;
  return {{"base_model", model_id_name(config.base)},
          {"epochs", config.epochs},
          {"seed", config.seed},
          {"hyperparameters", hp}};
}

json training_pairs_json(std::span<const LabeledPair> pairs) {
  json out = json::array();
  for (const auto& p : pairs) out.push_back(json::array({p.question_text, p.article_text, p.label}));
  return out;
}

}  // namespace

std::string training_fingerprint(std::span<const LabeledPair> pairs, const FinetuneConfig& config) {
  json doc = finetune_config_json(config);
  doc["pairs"] = training_pairs_json(pairs);
  return sha256_hex(doc.dump());
}

// ---- client ----------------------------------------------------------------

BridgeClient::BridgeClient(std::shared_ptr<Transport> transport, BridgeOptions options)
    : transport_(std::move(transport)), options_(std::move(options)) {
  if (!transport_) throw Error("bridge client needs a transport");
  if (options_.max_batch == 0) throw Error("max_batch must be positive");
  if (options_.max_in_flight == 0) throw Error("max_in_flight must be positive");
  if (options_.cache_enabled) load_cache();
}

std::string BridgeClient::next_id(std::string_view endpoint) {
  return std::string(endpoint) + "-" + std::to_string(envelope_counter_.fetch_add(1) + 1);
}

// Sends one envelope, retrying connectivity failures with doubling backoff.
// Returns the raw response and fills `response_body` with its body as JSON.
std::string BridgeClient::roundtrip(std::string_view endpoint, const std::string& body_json, std::string& response_body) {
  const std::string id = next_id(endpoint);
  json envelope = {{"protocol_version", kProtocolVersion}, {"id", id}, {"endpoint", endpoint}};
  envelope["body"] = json::parse(body_json);
  const std::string request = envelope.dump();

  std::string raw;
  auto delay = options_.backoff;
  for (std::size_t attempt = 0;; ++attempt) {
    try {
      ++requests_;
      raw = transport_->call(endpoint, request);
      break;
    } catch (const SidecarUnavailable& e) {
      if (attempt >= options_.max_retries)
        throw BridgeError("sidecar unreachable after " + std::to_string(attempt + 1) + " attempts: " + e.what());
      std::this_thread::sleep_for(delay);
      delay *= 2;
    }
  }

  json response;
  try {
    response = json::parse(raw);
  } catch (const json::exception&) {
    malformed("not JSON", raw);
  }
  if (!response.is_object()) malformed("envelope is not an object", raw);
  if (!response.contains("protocol_version") || !response["protocol_version"].is_number_integer())
    malformed("missing protocol_version", raw);
  if (response["protocol_version"].get<int>() != kProtocolVersion) {
    throw BridgeError("sidecar protocol version " + response["protocol_version"].dump() + " does not match client version " +
                      std::to_string(kProtocolVersion));
  }
  if (!response.contains("id") || !response["id"].is_string() || response["id"].get<std::string>() != id)
    malformed("envelope id does not match request " + id, raw);
  if (!response.contains("ok") || !response["ok"].is_boolean()) malformed("missing ok flag", raw);
  if (!response["ok"].get<bool>()) {
    std::string message = "sidecar error";
    std::string log_tail;
    if (response.contains("error") && response["error"].is_object()) {
      const json& err = response["error"];
      if (err.contains("message") && err["message"].is_string()) message = err["message"].get<std::string>();
      if (err.contains("log_tail") && err["log_tail"].is_string()) log_tail = err["log_tail"].get<std::string>();
    }
    throw BridgeError(std::string(endpoint) + ": " + message + (log_tail.empty() ? "" : "\nsidecar log tail:\n" + log_tail));
  }
  if (!response.contains("body") || !response["body"].is_object()) malformed("missing body", raw);
  response_body = response["body"].dump();
  return raw;
}

HealthReport BridgeClient::health() {
  std::string body;
  const std::string raw = roundtrip("health", "{}", body);
  const json b = json::parse(body);
  HealthReport report;
  if (!b.contains("sidecar_version") || !b["sidecar_version"].is_string()) malformed("missing sidecar_version", raw);
  report.sidecar_version = b["sidecar_version"].get<std::string>();
  if (!b.contains("models") || !b["models"].is_array()) malformed("missing models", raw);
  for (const json& m : b["models"]) {
    try {
      report.models.push_back({m.at("model_id").get<std::string>(), m.at("heads").get<int>(), m.at("layers").get<int>(),
                               m.at("vocab_size").get<int>()});
    } catch (const json::exception&) {
      malformed("bad roster entry", raw);
    }
  }
  std::lock_guard lock(mutex_);
  version_ = report.sidecar_version;
  return report;
}

std::string BridgeClient::sidecar_version() {
  {
    std::lock_guard lock(mutex_);
    if (version_) return *version_;
  }
  return health().sidecar_version;
}

void BridgeClient::load_cache() {
  if (!options_.cache_dir) return;
  std::filesystem::create_directories(*options_.cache_dir);
  std::ifstream in(*options_.cache_dir / "similarity-v1.jsonl");
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    try {
      const json entry = json::parse(line);
      const double v = entry.at("value").get<double>();
      if (std::isfinite(v) && v >= -1.0 && v <= 1.0) cache_[entry.at("key").get<std::string>()] = v;
    } catch (const json::exception&) {
      // A torn trailing line from an interrupted run; the entry is recomputed.
    }
  }
}

void BridgeClient::store_cache(const std::vector<std::pair<std::string, double>>& entries) {
  std::lock_guard lock(mutex_);
  for (const auto& [k, v] : entries) cache_[k] = v;
  if (!options_.cache_dir) return;
  std::ofstream out(*options_.cache_dir / "similarity-v1.jsonl", std::ios::app);
  for (const auto& [k, v] : entries) out << json{{"key", k}, {"value", v}}.dump() << '\n';
  out.flush();
  if (!out) throw BridgeError("cannot write similarity cache in " + options_.cache_dir->string());
}

std::vector<SimilarityScore> BridgeClient::similarity_batch(std::span<const PairRequest> pairs) {
  for (std::size_t i = 0; i < pairs.size(); ++i) check_pair(pairs[i], i);
  std::vector<SimilarityScore> out(pairs.size());
  if (pairs.empty()) return out;

  const std::string version = sidecar_version();
  std::vector<std::size_t> misses;  // first occurrence of each uncached key
  std::map<std::string, std::size_t> pending;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const auto& p = pairs[i];
    json key_doc = json::array({model_id_name(p.model), p.question_text, p.article_text, version});
    out[i].model = p.model;
    out[i].content_hash = sha256_hex(key_doc.dump());
    if (options_.cache_enabled) {
      std::lock_guard lock(mutex_);
      if (auto it = cache_.find(out[i].content_hash); it != cache_.end()) {
        out[i].value = it->second;
        ++cache_hits_;
        continue;
      }
    }
    if (pending.emplace(out[i].content_hash, i).second) misses.push_back(i);
  }

  // Chunks of at most max_batch pairs, dispatched in waves of max_in_flight.
  std::vector<std::pair<std::size_t, std::size_t>> chunks;
  for (std::size_t b = 0; b < misses.size(); b += options_.max_batch)
    chunks.emplace_back(b, std::min(misses.size(), b + options_.max_batch));

  std::vector<PairRequest> miss_pairs;
  miss_pairs.reserve(misses.size());
  for (std::size_t i : misses) miss_pairs.push_back(pairs[i]);
  std::vector<double> miss_values(misses.size());

  auto run_chunk = [&](std::size_t begin, std::size_t end) {
    json body = {{"pairs", pairs_json(miss_pairs, begin, end)}};
    std::string response_body;
    const std::string raw = roundtrip("similarity", body.dump(), response_body);
    const auto values = read_values(json::parse(response_body), "scores", end - begin, -1.0, 1.0, raw);
    std::copy(values.begin(), values.end(), miss_values.begin() + static_cast<std::ptrdiff_t>(begin));
  };

  for (std::size_t w = 0; w < chunks.size(); w += options_.max_in_flight) {
    const std::size_t wave_end = std::min(chunks.size(), w + options_.max_in_flight);
    std::vector<std::future<void>> inflight;
    for (std::size_t c = w + 1; c < wave_end; ++c)
      inflight.push_back(std::async(std::launch::async, run_chunk, chunks[c].first, chunks[c].second));
    std::exception_ptr failure;
    try {
      run_chunk(chunks[w].first, chunks[w].second);
    } catch (...) {
      failure = std::current_exception();
    }
    for (auto& f : inflight) {
      try {
        f.get();
      } catch (...) {
        if (!failure) failure = std::current_exception();
      }
    }
    if (failure) std::rethrow_exception(failure);
  }

  std::vector<std::pair<std::string, double>> fresh;
  fresh.reserve(misses.size());
  for (std::size_t m = 0; m < misses.size(); ++m) fresh.emplace_back(out[misses[m]].content_hash, miss_values[m]);
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    if (auto it = pending.find(out[i].content_hash); it != pending.end()) {
      const auto pos = std::find(misses.begin(), misses.end(), it->second) - misses.begin();
      out[i].value = miss_values[static_cast<std::size_t>(pos)];
    }
  }
  if (options_.cache_enabled) store_cache(fresh);
  return out;
}

FinetunedModelHandle BridgeClient::finetune(std::span<const LabeledPair> pairs, const FinetuneConfig& config,
                                            std::span<const std::string> forbidden_question_ids) {
  if (config.epochs != 1 && config.epochs != 2)
    throw Error("fine-tune epochs must be 1 or 2, got " + std::to_string(config.epochs));
  const std::set<std::string> forbidden(forbidden_question_ids.begin(), forbidden_question_ids.end());
  bool has0 = false, has1 = false;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const auto& p = pairs[i];
    if (forbidden.count(p.question_id))
      throw LeakageError("fine-tune slice contains a record of held-out question '" + p.question_id + "'");
    if (p.label != 0 && p.label != 1) throw Error("fine-tune pair " + std::to_string(i) + " has label outside {0,1}");
    if (p.question_text.empty() || p.article_text.empty())
      throw Error("fine-tune pair " + std::to_string(i) + " has empty text");
    (p.label ? has1 : has0) = true;
  }
  if (!has0 || !has1) throw Error("fine-tune slice must contain both labels");

  const std::string fingerprint = training_fingerprint(pairs, config);
  json body = finetune_config_json(config);
  body["pairs"] = training_pairs_json(pairs);
  body["fingerprint"] = fingerprint;

  std::string response_body;
  const std::string raw = roundtrip("finetune", body.dump(), response_body);
  const json b = json::parse(response_body);
  if (!b.contains("handle_id") || !b["handle_id"].is_string() || b["handle_id"].get<std::string>().empty())
    malformed("missing handle_id", raw);
  if (!b.contains("fingerprint") || !b["fingerprint"].is_string()) malformed("missing fingerprint", raw);
  if (b["fingerprint"].get<std::string>() != fingerprint)
    throw BridgeError("sidecar fingerprint " + b["fingerprint"].get<std::string>() + " differs from client fingerprint " +
                      fingerprint);
  return {b["handle_id"].get<std::string>(), config.epochs, config.base, fingerprint};
}

std::vector<double> BridgeClient::score_finetuned(const FinetunedModelHandle& handle, std::span<const PairRequest> pairs) {
  for (std::size_t i = 0; i < pairs.size(); ++i) check_pair(pairs[i], i);
  std::vector<double> out;
  if (pairs.empty()) return out;
  if (handle.handle_id.empty()) throw Error("empty fine-tuned model handle");
  out.reserve(pairs.size());
  for (std::size_t b = 0; b < pairs.size(); b += options_.max_batch) {
    const std::size_t e = std::min(pairs.size(), b + options_.max_batch);
    json body = {{"handle_id", handle.handle_id}, {"pairs", pairs_json(pairs, b, e)}};
    std::string response_body;
    const std::string raw = roundtrip("score", body.dump(), response_body);
    const auto values = read_values(json::parse(response_body), "probabilities", e - b, 0.0, 1.0, raw);
    out.insert(out.end(), values.begin(), values.end());
  }
  return out;
}

}  // namespace litscreen
