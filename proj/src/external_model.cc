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

#include "abc_bench/external_model.h"

#include <poll.h>
#include <signal.h>
#include <sys/socket.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>

#include "absl/strings/str_cat.h"

namespace abc_bench {
namespace {

using nlohmann::json;

json PointsToJson(std::span<const Point> batch) {
  json points = json::array();
  for (const Point& p : batch) {
    points.push_back(std::vector<double>(p.values().begin(), p.values().end()));
  }
  return points;
}

absl::StatusOr<double> JsonToDouble(const json& value) {
  if (!value.is_number()) {
    return absl::DataLossError(
        absl::StrCat("expected a number, got ", value.dump()));
  }
  return value.get<double>();
}

}  // namespace

ExternalModel::ExternalModel(FeatureSpace space, std::string command,
                             ExternalModelOptions options)
    : Model(std::move(space)),
      command_(std::move(command)),
      options_(options) {}

ExternalModel::~ExternalModel() { Shutdown(); }

absl::StatusOr<std::shared_ptr<ExternalModel>> ExternalModel::Connect(
    const std::string& command, FeatureSpace space,
    ExternalModelOptions options) {
  if (options.batch_size < 1) {
    return absl::InvalidArgumentError("batch_size must be at least 1");
  }
  std::shared_ptr<ExternalModel> model(
      new ExternalModel(std::move(space), command, options));
  if (auto status = model->Spawn(); !status.ok()) return status;
  if (auto status = model->Handshake(); !status.ok()) return status;
  if (options.probe_determinism) {
    if (auto status = model->ProbeDeterminism(); !status.ok()) return status;
  }
  return model;
}

std::string ExternalModel::Describe() const {
  return absl::StrCat("external(", command_, ")");
}

absl::Status ExternalModel::Spawn() {
  int fds[2];
  if (socketpair(AF_UNIX, SOCK_STREAM | SOCK_CLOEXEC, 0, fds) != 0) {
    return absl::InternalError(
        absl::StrCat("socketpair failed: ", std::strerror(errno)));
  }
  const pid_t pid = fork();
  if (pid < 0) {
    close(fds[0]);
    close(fds[1]);
    return absl::InternalError(
        absl::StrCat("fork failed: ", std::strerror(errno)));
  }
  if (pid == 0) {
    // dup2 clears FD_CLOEXEC on the duplicates.
    dup2(fds[1], STDIN_FILENO);
    dup2(fds[1], STDOUT_FILENO);
    execl("/bin/sh", "sh", "-c", command_.c_str(), static_cast<char*>(nullptr));
    _exit(127);
  }
  close(fds[1]);
  fd_ = fds[0];
  pid_ = pid;
  return absl::OkStatus();
}

void ExternalModel::Shutdown() {
  if (fd_ >= 0) {
    close(fd_);
    fd_ = -1;
  }
  if (pid_ > 0) {
    kill(pid_, SIGTERM);
    int wstatus = 0;
    waitpid(pid_, &wstatus, 0);
    pid_ = -1;
  }
}

absl::Status ExternalModel::Fail(absl::Status status) const {
  broken_ = status;
  return status;
}

absl::Status ExternalModel::WriteLine(const std::string& line) const {
  std::string data = line + "\n";
  size_t written = 0;
  while (written < data.size()) {
    const ssize_t k = send(fd_, data.data() + written, data.size() - written,
                           MSG_NOSIGNAL);
    if (k < 0) {
      if (errno == EINTR) continue;
      return absl::UnavailableError(absl::StrCat(
          "model process ", command_, ": write failed: ", std::strerror(errno)));
    }
    written += static_cast<size_t>(k);
  }
  return absl::OkStatus();
}

absl::StatusOr<std::string> ExternalModel::ReadLine() const {
  const auto deadline = std::chrono::steady_clock::now() + options_.timeout;
  while (true) {
    const size_t newline = read_buffer_.find('\n');
    if (newline != std::string::npos) {
      std::string line = read_buffer_.substr(0, newline);
      read_buffer_.erase(0, newline + 1);
      return line;
    }
    const auto remaining = std::chrono::duration_cast<std::chrono::milliseconds>(
        deadline - std::chrono::steady_clock::now());
    if (remaining.count() <= 0) {
      return absl::DeadlineExceededError(
          absl::StrCat("model process ", command_, " timed out after ",
                       options_.timeout.count(), " ms"));
    }
    pollfd pfd{fd_, POLLIN, 0};
    const int ready = poll(&pfd, 1, static_cast<int>(remaining.count()));
    if (ready < 0) {
      if (errno == EINTR) continue;
      return absl::InternalError(
          absl::StrCat("poll failed: ", std::strerror(errno)));
    }
    if (ready == 0) continue;
    char chunk[65536];
    const ssize_t k = recv(fd_, chunk, sizeof(chunk), 0);
    if (k < 0) {
      if (errno == EINTR) continue;
      return absl::UnavailableError(absl::StrCat(
          "model process ", command_, ": read failed: ", std::strerror(errno)));
    }
    if (k == 0) {
      return absl::UnavailableError(absl::StrCat(
          "model process ", command_, " closed its output mid-request"));
    }
    read_buffer_.append(chunk, static_cast<size_t>(k));
  }
}

absl::StatusOr<json> ExternalModel::Call(json request) const {
  if (!broken_.ok()) return broken_;
  const long id = next_id_++;
  request["id"] = id;
  if (auto status = WriteLine(request.dump()); !status.ok()) {
    return Fail(status);
  }
  auto line = ReadLine();
  if (!line.ok()) return Fail(line.status());
  json response = json::parse(*line, nullptr, /*allow_exceptions=*/false);
  if (response.is_discarded() || !response.is_object()) {
    return Fail(absl::DataLossError(
        absl::StrCat("model process sent malformed response: ", *line)));
  }
  if (!response.contains("id") || !response["id"].is_number_integer() ||
      response["id"].get<long>() != id) {
    return Fail(absl::DataLossError(absl::StrCat(
        "model process answered with a non-matching id (expected ", id,
        "): ", *line)));
  }
  if (response.contains("error")) {
    return Fail(absl::InternalError(absl::StrCat(
        "model process reported an error: ", response["error"].dump())));
  }
  return response;
}

absl::Status ExternalModel::Handshake() {
  std::lock_guard<std::mutex> lock(mu_);
  auto response = Call({{"op", "handshake"}, {"n", num_features()}});
  if (!response.ok()) return response.status();
  if (!response->contains("ok") || !(*response)["ok"].is_boolean() ||
      !(*response)["ok"].get<bool>()) {
    return Fail(absl::FailedPreconditionError(absl::StrCat(
        "model process rejected the handshake: ", response->dump())));
  }
  if (response->contains("gradients")) {
    if (!(*response)["gradients"].is_boolean()) {
      return Fail(absl::DataLossError("handshake field 'gradients' must be "
                                      "a boolean"));
    }
    server_gradients_ = (*response)["gradients"].get<bool>();
  }
  return absl::OkStatus();
}

absl::Status ExternalModel::ProbeDeterminism() const {
  const int n = num_features();
  std::vector<Point> probe(3, Point(std::vector<double>(n, 0.0)));
  for (int j = 0; j < n; ++j) {
    probe[1][j] = 1.0;
    probe[2][j] = j % 2;
  }
  auto first = Predict(probe);
  if (!first.ok()) return first.status();
  auto second = Predict(probe);
  if (!second.ok()) return second.status();
  if (*first != *second) {
    std::lock_guard<std::mutex> lock(mu_);
    return Fail(absl::FailedPreconditionError(
        absl::StrCat("model process ", command_,
                     " is not deterministic: repeated predictions differ")));
  }
  return absl::OkStatus();
}

absl::StatusOr<std::vector<double>> ExternalModel::DoPredict(
    std::span<const Point> batch) const {
  std::lock_guard<std::mutex> lock(mu_);
  std::vector<double> out;
  out.reserve(batch.size());
  for (size_t start = 0; start < batch.size(); start += options_.batch_size) {
    const size_t count =
        std::min(batch.size() - start, static_cast<size_t>(options_.batch_size));
    auto response =
        Call({{"op", "predict"}, {"points", PointsToJson(batch.subspan(start, count))}});
    if (!response.ok()) return response.status();
    const json& values = (*response)["values"];
    if (!values.is_array() || values.size() != count) {
      return Fail(absl::DataLossError(
          absl::StrCat("predict response must carry ", count, " values")));
    }
    for (const json& v : values) {
      auto value = JsonToDouble(v);
      if (!value.ok()) return Fail(value.status());
      out.push_back(*value);
    }
  }
  return out;
}

absl::StatusOr<GradientResult> ExternalModel::DoGradient(
    std::span<const Point> batch) const {
  std::lock_guard<std::mutex> lock(mu_);
  const int n = num_features();
  GradientResult result{static_cast<int>(batch.size()), n, {}};
  result.values.reserve(batch.size() * n);
  for (size_t start = 0; start < batch.size(); start += options_.batch_size) {
    const size_t count =
        std::min(batch.size() - start, static_cast<size_t>(options_.batch_size));
    auto response = Call(
        {{"op", "gradient"}, {"points", PointsToJson(batch.subspan(start, count))}});
    if (!response.ok()) return response.status();
    const json& rows = (*response)["gradients"];
    if (!rows.is_array() || rows.size() != count) {
      return Fail(absl::DataLossError(
          absl::StrCat("gradient response must carry ", count, " rows")));
    }
    for (const json& row : rows) {
      if (!row.is_array() || static_cast<int>(row.size()) != n) {
        return Fail(absl::DataLossError(
            absl::StrCat("gradient rows must have ", n, " entries")));
      }
      for (const json& v : row) {
        auto value = JsonToDouble(v);
        if (!value.ok()) return Fail(value.status());
        result.values.push_back(*value);
      }
    }
  }
  return result;
}

absl::StatusOr<ModelHandle> ConnectExternal(const std::string& command,
                                            FeatureSpace space,
                                            ExternalModelOptions options) {
  auto model = ExternalModel::Connect(command, std::move(space), options);
  if (!model.ok()) return model.status();
  return ModelHandle(*std::move(model));
}

}  // namespace abc_bench
