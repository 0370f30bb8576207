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

// Client side of the transformer sidecar protocol (see docs/protocol.md).
// The sidecar computes pair similarity scores from pre-trained biomedical
// checkpoints and fine-tunes / serves pair classifiers.

#include <array>
#include <atomic>
#include <chrono>
#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "litscreen/error.hpp"

namespace litscreen {

inline constexpr int kProtocolVersion = 1;

enum class TransformerModel { kBioBert, kBlueBert, kBlueBertLarge };

struct RosterEntry {
  TransformerModel model;
  std::string_view model_id;      // wire name
  std::string_view display_name;
  int heads;
  int layers;
  int vocab_size;
};

// BioBERT 12/12/28996, BlueBERT 12/12/30522, BlueBERTxL 16/24/30522.
const std::array<RosterEntry, 3>& transformer_roster();
const RosterEntry& roster_entry(TransformerModel model);
std::string_view model_id_name(TransformerModel model);
// Throws Error for names outside the roster.
TransformerModel parse_model_id(std::string_view name);

struct PairRequest {
  std::string question_text;
  std::string article_text;
  TransformerModel model = TransformerModel::kBioBert;
};

struct SimilarityScore {
  double value = 0.0;  // cosine, in [-1, 1]
  TransformerModel model = TransformerModel::kBioBert;
  std::string content_hash;  // also the cache key
};

struct LabeledPair {
  std::string question_id;
  std::string question_text;
  std::string article_text;
  int label = 0;
};

struct FinetuneConfig {
  TransformerModel base = TransformerModel::kBioBert;
  int epochs = 1;  // 1 or 2
  std::uint64_t seed = 0;
  // Overrides of learning_rate=2e-5, batch_size=16, max_seq_length=512,
  // warmup_fraction=0.1.
  std::map<std::string, double> hyperparameters;

  std::map<std::string, double> resolved_hyperparameters() const;
};

struct FinetunedModelHandle {
  std::string handle_id;
  int epochs = 1;
  TransformerModel base = TransformerModel::kBioBert;
  std::string fingerprint;
};

// SHA-256 over the canonical JSON of (base model, epochs, seed, resolved
// hyperparameters, ordered (question_text, article_text, label) triples).
std::string training_fingerprint(std::span<const LabeledPair> pairs, const FinetuneConfig& config);

// Connectivity failure; the client retries these.
class SidecarUnavailable : public BridgeError {
 public:
  using BridgeError::BridgeError;
};

// Moves one request envelope to the sidecar and returns the response
// envelope. Implementations must be safe to call from several threads.
class Transport {
 public:
  virtual ~Transport() = default;
  virtual std::string call(std::string_view endpoint, const std::string& request) = 0;
};

struct BridgeOptions {
  std::size_t max_batch = 64;      // pairs per request envelope
  std::size_t max_in_flight = 2;   // concurrent envelopes
  std::size_t max_retries = 3;     // after the first attempt
  std::chrono::milliseconds backoff{100};  // doubled per retry
  bool cache_enabled = true;
  std::optional<std::filesystem::path> cache_dir;  // nullopt: memory-only cache
};

struct HealthReport {
  std::string sidecar_version;
  struct Model {
    std::string model_id;
    int heads = 0;
    int layers = 0;
    int vocab_size = 0;
  };
  std::vector<Model> models;
};

class BridgeClient {
 public:
  explicit BridgeClient(std::shared_ptr<Transport> transport, BridgeOptions options = {});

  HealthReport health();

  // Scores in request order. Cached by content hash, so repeating a batch
  // costs no sidecar requests.
  std::vector<SimilarityScore> similarity_batch(std::span<const PairRequest> pairs);

  // Throws LeakageError, before contacting the sidecar, if a pair belongs to
  // one of `forbidden_question_ids`; Error if epochs is not 1 or 2 or a
  // class is missing.
  FinetunedModelHandle finetune(std::span<const LabeledPair> pairs, const FinetuneConfig& config,
                                std::span<const std::string> forbidden_question_ids = {});

  // Probabilities in [0, 1], in request order.
  std::vector<double> score_finetuned(const FinetunedModelHandle& handle, std::span<const PairRequest> pairs);

  // Sidecar version string, fetched once via health.
  std::string sidecar_version();

  std::size_t requests_sent() const noexcept { return requests_.load(); }
  std::size_t cache_hits() const noexcept { return cache_hits_.load(); }

 private:
  std::string roundtrip(std::string_view endpoint, const std::string& body_json, std::string& response_body);
  std::string next_id(std::string_view endpoint);
  void load_cache();
  void store_cache(const std::vector<std::pair<std::string, double>>& entries);

  std::shared_ptr<Transport> transport_;
  BridgeOptions options_;
  std::atomic<std::size_t> requests_{0};
  std::atomic<std::size_t> cache_hits_{0};
  std::atomic<std::uint64_t> envelope_counter_{0};
  std::mutex mutex_;
  std::optional<std::string> version_;
  std::unordered_map<std::string, double> cache_;
};

// ---- transports ------------------------------------------------------------

// POST http://host:port/v1/<endpoint> with the JSON envelope as body.
std::shared_ptr<Transport> make_http_transport(const std::string& base_url,
                                               std::chrono::milliseconds timeout = std::chrono::seconds(30));

// Spawns `argv` and exchanges one JSON envelope per line over its
// standard input and output.
std::shared_ptr<Transport> make_subprocess_transport(std::vector<std::string> argv);

class StubSidecar;
std::shared_ptr<Transport> make_in_process_transport(std::shared_ptr<StubSidecar> sidecar);

// "stub" -> in-process stub sidecar; "http://..." -> HTTP;
// "exec:<program> [args...]" -> subprocess.
std::shared_ptr<Transport> make_transport(const std::string& endpoint);

}  // namespace litscreen
