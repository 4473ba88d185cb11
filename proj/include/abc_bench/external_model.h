/*
 * Copyright 2026 The ABC Bench Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

// Client for a model served by a child process over line-delimited JSON on
// its standard input/output.
//
//   -> {"id": 1, "op": "handshake", "n": 3}
//   <- {"id": 1, "ok": true, "gradients": false}
//   -> {"id": 2, "op": "predict", "points": [[0.5, 1, 0], ...]}
//   <- {"id": 2, "values": [1.25, ...]}
//   -> {"id": 3, "op": "gradient", "points": [[...], ...]}
//   <- {"id": 3, "gradients": [[...], ...]}
//
// Requests are strictly sequential per handle. A response whose id does not
// match the outstanding request is a protocol error, after which the handle
// refuses further calls.

#ifndef ABC_BENCH_EXTERNAL_MODEL_H_
#define ABC_BENCH_EXTERNAL_MODEL_H_

#include <chrono>
#include <mutex>
#include <string>
#include <sys/types.h>

#include "abc_bench/model.h"
#include "absl/status/statusor.h"
#include "json.hpp"

namespace abc_bench {

struct ExternalModelOptions {
  int batch_size = 256;
  std::chrono::milliseconds timeout{30000};
  // Predicts three fixed points twice at connect time and requires identical
  // answers.
  bool probe_determinism = true;
};

class ExternalModel : public Model {
 public:
  ~ExternalModel() override;

  // Spawns `command` through /bin/sh, performs the handshake and, if
  // requested, the determinism probe.
  static absl::StatusOr<std::shared_ptr<ExternalModel>> Connect(
      const std::string& command, FeatureSpace space,
      ExternalModelOptions options = {});

  ModelKind kind() const override { return ModelKind::kExternal; }
  GradientCapability gradient_capability() const override {
    return server_gradients_ ? GradientCapability::kAnalytic
                             : GradientCapability::kFiniteDifference;
  }
  std::string Describe() const override;

 protected:
  absl::StatusOr<std::vector<double>> DoPredict(
      std::span<const Point> batch) const override;
  absl::StatusOr<GradientResult> DoGradient(
      std::span<const Point> batch) const override;

 private:
  ExternalModel(FeatureSpace space, std::string command,
                ExternalModelOptions options);

  absl::Status Spawn();
  absl::Status Handshake();
  absl::Status ProbeDeterminism() const;
  // Sends one request and returns the matching response. Caller holds mu_.
  absl::StatusOr<nlohmann::json> Call(nlohmann::json request) const;
  absl::Status WriteLine(const std::string& line) const;
  absl::StatusOr<std::string> ReadLine() const;
  absl::Status Fail(absl::Status status) const;
  void Shutdown();

  std::string command_;
  ExternalModelOptions options_;
  bool server_gradients_ = false;

  mutable std::mutex mu_;
  mutable int fd_ = -1;
  mutable pid_t pid_ = -1;
  mutable long next_id_ = 1;
  mutable std::string read_buffer_;
  mutable absl::Status broken_;
};

// Convenience wrapper returning a generic handle.
absl::StatusOr<ModelHandle> ConnectExternal(const std::string& command,
                                            FeatureSpace space,
                                            ExternalModelOptions options = {});

}  // namespace abc_bench

#endif  // ABC_BENCH_EXTERNAL_MODEL_H_
