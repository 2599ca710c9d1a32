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

#include "typostrike/remote.h"

#include <cmath>
#include <regex>
#include <thread>

#include "absl/strings/numbers.h"
#include "absl/strings/str_cat.h"
#include "httplib.h"
#include "json.hpp"
#include "string_view_compat.h"

namespace typostrike {
namespace {

using json = nlohmann::json;

constexpr char kJsonType[] = "application/json";
// Remote models may compute in float32; anything further off than this is
// treated as a malformed row rather than silently renormalized.
constexpr double kProbabilitySumTolerance = 1e-3;

HttpReply JsonError(int status, std::string_view message) {
  return HttpReply{status, json{{"error", message}}.dump()};
}

}  // namespace

std::string EncodePredictRequest(std::span<const std::string> texts) {
  return json{{"texts", std::vector<std::string>(texts.begin(), texts.end())}}
      .dump();
}

std::string EncodePredictResponse(const std::vector<ClassDistribution>& rows) {
  json probs = json::array();
  for (const ClassDistribution& row : rows) probs.push_back(row.probs);
  return json{{"probs", std::move(probs)}}.dump();
}

absl::StatusOr<std::vector<ClassDistribution>> DecodePredictResponse(
    std::string_view body, size_t expected_rows) {
  const json doc = json::parse(body, nullptr, /*allow_exceptions=*/false);
  if (doc.is_discarded() || !doc.is_object() || !doc.contains("probs") ||
      !doc["probs"].is_array()) {
    return absl::DataLossError("malformed predict response");
  }
  const json& rows = doc["probs"];
  if (rows.size() != expected_rows) {
    return absl::DataLossError(absl::StrCat("expected ", expected_rows,
                                            " rows, got ", rows.size()));
  }
  std::vector<ClassDistribution> out;
  out.reserve(rows.size());
  for (const json& row : rows) {
    if (!row.is_array() || row.empty()) {
      return absl::DataLossError("malformed probability row");
    }
    std::vector<double> probs;
    for (const json& p : row) {
      if (!p.is_number()) return absl::DataLossError("non-numeric probability");
      probs.push_back(p.get<double>());
    }
    double sum = 0.0;
    for (const double p : probs) sum += p;
    if (!(std::abs(sum - 1.0) <= kProbabilitySumTolerance)) {
      return absl::DataLossError(
          absl::StrCat("probabilities sum to ", sum, ", not 1"));
    }
    absl::StatusOr<ClassDistribution> dist =
        ClassDistribution::FromProbabilities(std::move(probs));
    if (!dist.ok()) return absl::DataLossError(dist.status().message());
    out.push_back(*std::move(dist));
  }
  return out;
}

std::string EncodeHealthResponse(const std::vector<std::string>& classes) {
  return json{{"classes", classes}}.dump();
}

absl::StatusOr<std::vector<std::string>> DecodeHealthResponse(
    std::string_view body) {
  const json doc = json::parse(body, nullptr, /*allow_exceptions=*/false);
  if (doc.is_discarded() || !doc.is_object() || !doc.contains("classes")) {
    return absl::DataLossError("malformed health response");
  }
  try {
    return doc["classes"].get<std::vector<std::string>>();
  } catch (const json::exception&) {
    return absl::DataLossError("`classes` must be an array of strings");
  }
}

absl::StatusOr<std::unique_ptr<RemoteClassifier>> RemoteClassifier::Connect(
    std::string_view url, RemoteOptions options) {
  static const std::regex kUrl(R"(^http://([^/:]+)(:\d+)?(/.*)?$)");
  std::smatch m;
  const std::string url_string(url);
  if (!std::regex_match(url_string, m, kUrl)) {
    return absl::InvalidArgumentError(
        absl::StrCat("victim URL must look like http://host:port, got '", Absl(url),
                     "'"));
  }
  std::string base = m[3].str();
  while (!base.empty() && base.back() == '/') base.pop_back();
  std::unique_ptr<RemoteClassifier> client(new RemoteClassifier(
      absl::StrCat("http://", m[1].str(), m[2].str()), base, options));
  absl::StatusOr<HttpReply> reply = client->Send("GET", "/health", "");
  if (!reply.ok()) return reply.status();
  if (reply->status != 200) {
    return absl::UnavailableError(
        absl::StrCat("victim health check returned HTTP ", reply->status));
  }
  absl::StatusOr<std::vector<std::string>> classes =
      DecodeHealthResponse(reply->body);
  if (!classes.ok()) return classes.status();
  if (classes->size() < 2) {
    return absl::DataLossError("victim reports fewer than two classes");
  }
  client->class_names_ = *std::move(classes);
  return client;
}

absl::StatusOr<HttpReply> RemoteClassifier::Send(
    const std::string& method, const std::string& path,
    const std::string& body) const {
  httplib::Client http(host_port_);
  http.set_connection_timeout(options_.connect_timeout);
  http.set_read_timeout(options_.read_timeout);
  const std::string full_path = base_path_ + path;
  std::chrono::milliseconds backoff = options_.initial_backoff;
  httplib::Error last_error = httplib::Error::Success;
  for (int attempt = 0; attempt <= options_.max_retries; ++attempt) {
    if (attempt > 0) {
      std::this_thread::sleep_for(backoff);
      backoff *= 2;
    }
    httplib::Result result = method == "GET"
                                 ? http.Get(full_path)
                                 : http.Post(full_path, body, kJsonType);
    if (result) return HttpReply{result->status, result->body};
    last_error = result.error();
  }
  return absl::UnavailableError(absl::StrCat("cannot reach victim at ",
                                             host_port_, full_path, ": ",
                                             httplib::to_string(last_error)));
}

absl::StatusOr<std::vector<ClassDistribution>> RemoteClassifier::Predict(
    std::span<const std::string> texts) const {
  if (texts.empty()) return absl::InvalidArgumentError("no texts to predict");
  absl::StatusOr<HttpReply> reply =
      Send("POST", "/predict", EncodePredictRequest(texts));
  if (!reply.ok()) return reply.status();
  if (reply->status != 200) {
    return absl::UnavailableError(absl::StrCat(
        "victim returned HTTP ", reply->status, ": ", reply->body));
  }
  absl::StatusOr<std::vector<ClassDistribution>> rows =
      DecodePredictResponse(reply->body, texts.size());
  if (!rows.ok()) return rows.status();
  for (const ClassDistribution& row : *rows) {
    if (row.probs.size() != class_names_.size()) {
      return absl::DataLossError("row width does not match the class count");
    }
  }
  return rows;
}

namespace {

// httplib only closes its listening socket when the accept loop is running,
// which leaks a bound socket that never listened and loses a stop request
// that arrives before listen. Closing it unconditionally covers both; the
// accept loop exits as soon as it sees the socket gone.
class ClosableServer : public httplib::Server {
 public:
  void Close() {
    const socket_t sock = svr_sock_.exchange(INVALID_SOCKET);
    if (sock != INVALID_SOCKET) {
      httplib::detail::shutdown_socket(sock);
      httplib::detail::close_socket(sock);
    }
  }
};

}  // namespace

PredictionServer::PredictionServer(const Classifier& model)
    : model_(model), server_(std::make_unique<ClosableServer>()) {
  server_->Post("/predict", [this](const httplib::Request& req,
                                   httplib::Response& res) {
    const HttpReply reply = HandlePredict(req.body);
    res.status = reply.status;
    res.set_content(reply.body, kJsonType);
  });
  server_->Get("/health",
               [this](const httplib::Request&, httplib::Response& res) {
                 const HttpReply reply = HandleHealth();
                 res.status = reply.status;
                 res.set_content(reply.body, kJsonType);
               });
}

PredictionServer::~PredictionServer() { Stop(); }

absl::StatusOr<int> PredictionServer::Bind(const std::string& host, int port) {
  if (port == 0) {
    const int bound = server_->bind_to_any_port(host);
    if (bound < 0) {
      return absl::UnavailableError(absl::StrCat("cannot bind ", host));
    }
    bound_ = true;
    return bound;
  }
  if (!server_->bind_to_port(host, port)) {
    return absl::UnavailableError(
        absl::StrCat("cannot bind ", host, ":", port));
  }
  bound_ = true;
  return port;
}

absl::Status PredictionServer::Listen() {
  if (!bound_) return absl::FailedPreconditionError("server is not bound");
  if (!server_->listen_after_bind()) {
    return absl::InternalError("server stopped with an error");
  }
  return absl::OkStatus();
}

void PredictionServer::Stop() {
  if (server_ != nullptr) static_cast<ClosableServer&>(*server_).Close();
}

void PredictionServer::WaitUntilReady() const { server_->wait_until_ready(); }

HttpReply PredictionServer::HandlePredict(std::string_view body) const {
  const json doc = json::parse(body, nullptr, /*allow_exceptions=*/false);
  if (doc.is_discarded() || !doc.is_object()) {
    return JsonError(400, "body is not a JSON object");
  }
  const auto texts_it = doc.find("texts");
  if (texts_it == doc.end() || !texts_it->is_array()) {
    return JsonError(400, "`texts` must be an array of strings");
  }
  std::vector<std::string> texts;
  for (const json& t : *texts_it) {
    if (!t.is_string()) {
      return JsonError(400, "`texts` must be an array of strings");
    }
    texts.push_back(t.get<std::string>());
  }
  if (texts.empty()) return JsonError(422, "`texts` is empty");
  absl::StatusOr<std::vector<ClassDistribution>> rows = model_.Predict(texts);
  if (!rows.ok()) return JsonError(503, Std(rows.status().message()));
  return HttpReply{200, EncodePredictResponse(*rows)};
}

HttpReply PredictionServer::HandleHealth() const {
  const std::vector<std::string> classes = model_.class_names();
  if (classes.empty()) return JsonError(503, "model is not loaded");
  return HttpReply{200, EncodeHealthResponse(classes)};
}

absl::StatusOr<std::pair<std::string, int>> ParseBindAddress(
    std::string_view address) {
  const size_t colon = address.rfind(':');
  int port = 0;
  if (colon == std::string_view::npos || colon == 0 ||
      !absl::SimpleAtoi(Absl(address.substr(colon + 1)), &port) || port < 0 ||
      port > 65535) {
    return absl::InvalidArgumentError(absl::StrCat(
        "bind address must be host:port, got '", Absl(address), "'"));
  }
  return std::make_pair(std::string(address.substr(0, colon)), port);
}

}  // namespace typostrike
