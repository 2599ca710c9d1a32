// Copyright 2026 The TypoStrike Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// JSON-over-HTTP victim protocol.
//
//   POST /predict  {"texts": ["...", ...]}  ->  {"probs": [[p0, ..., pk], ...]}
//   GET  /health                            ->  {"classes": ["neg", "pos"]}
//
// Errors: 400 malformed body, 422 empty `texts`, 503 model unavailable.
// Any classifier can be served with PredictionServer and reached from
// another process with RemoteClassifier.

#ifndef TYPOSTRIKE_REMOTE_H_
#define TYPOSTRIKE_REMOTE_H_

#include <chrono>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "typostrike/classifier.h"

namespace httplib {
class Server;
}  // namespace httplib

namespace typostrike {

inline constexpr char kVictimUrlEnv[] = "TYPOSTRIKE_VICTIM_URL";

std::string EncodePredictRequest(std::span<const std::string> texts);
std::string EncodePredictResponse(const std::vector<ClassDistribution>& rows);
absl::StatusOr<std::vector<ClassDistribution>> DecodePredictResponse(
    std::string_view body, size_t expected_rows);
std::string EncodeHealthResponse(const std::vector<std::string>& classes);
absl::StatusOr<std::vector<std::string>> DecodeHealthResponse(
    std::string_view body);

struct HttpReply {
  int status = 200;
  std::string body;
};

struct RemoteOptions {
  // Retries after the first attempt, on transport errors only.
  int max_retries = 3;
  std::chrono::milliseconds initial_backoff{100};
  std::chrono::seconds connect_timeout{5};
  std::chrono::seconds read_timeout{60};
};

// A victim reached over HTTP. Each Predict() opens its own connection, so
// concurrent calls are safe.
class RemoteClassifier : public Classifier {
 public:
  // Accepts `http://host[:port][/base/path]`. Fetches the class names from
  // /health, so an unreachable victim fails here.
  static absl::StatusOr<std::unique_ptr<RemoteClassifier>> Connect(
      std::string_view url, RemoteOptions options = {});

  absl::StatusOr<std::vector<ClassDistribution>> Predict(
      std::span<const std::string> texts) const override;
  std::vector<std::string> class_names() const override {
    return class_names_;
  }

 private:
  RemoteClassifier(std::string host_port, std::string base_path,
                   RemoteOptions options)
      : host_port_(std::move(host_port)),
        base_path_(std::move(base_path)),
        options_(options) {}

  absl::StatusOr<HttpReply> Send(const std::string& method,
                                 const std::string& path,
                                 const std::string& body) const;

  std::string host_port_;
  std::string base_path_;
  RemoteOptions options_;
  std::vector<std::string> class_names_;
};

// Serves a classifier over the protocol above. The handlers run on the
// server's worker threads, so the classifier must tolerate concurrent calls.
class PredictionServer {
 public:
  explicit PredictionServer(const Classifier& model);
  ~PredictionServer();

  PredictionServer(const PredictionServer&) = delete;
  PredictionServer& operator=(const PredictionServer&) = delete;

  // Binds without accepting connections yet. Port 0 picks a free port.
  // Returns the bound port.
  absl::StatusOr<int> Bind(const std::string& host, int port);
  // Accepts connections until Stop(). Requires a successful Bind().
  absl::Status Listen();
  void Stop();
  void WaitUntilReady() const;

  // Request handling without sockets.
  HttpReply HandlePredict(std::string_view body) const;
  HttpReply HandleHealth() const;

 private:
  const Classifier& model_;
  std::unique_ptr<httplib::Server> server_;
  bool bound_ = false;
};

// Splits "host:port". Port is required.
absl::StatusOr<std::pair<std::string, int>> ParseBindAddress(
    std::string_view address);

}  // namespace typostrike

#endif  // TYPOSTRIKE_REMOTE_H_
