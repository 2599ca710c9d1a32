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

#include <random>
#include <thread>

#include "gmock/gmock.h"
#include "gtest/gtest.h"
#include "testing/oracles.h"
#include "typostrike/naive_bayes.h"

namespace typostrike {
namespace {

using ::testing::ElementsAre;

// Runs a PredictionServer on a free local port for the fixture's lifetime.
class ServedModel {
 public:
  explicit ServedModel(const Classifier& model) : server_(model) {
    absl::StatusOr<int> port = server_.Bind("127.0.0.1", 0);
    EXPECT_TRUE(port.ok()) << port.status();
    port_ = port.value_or(0);
    thread_ = std::thread([this] { EXPECT_TRUE(server_.Listen().ok()); });
    server_.WaitUntilReady();
  }
  ~ServedModel() {
    server_.Stop();
    thread_.join();
  }

  std::string url() const {
    return "http://127.0.0.1:" + std::to_string(port_);
  }

 private:
  PredictionServer server_;
  int port_ = 0;
  std::thread thread_;
};

NaiveBayesModel Model() {
  absl::StatusOr<NaiveBayesModel> nb =
      NaiveBayesModel::Train(testing::SyntheticReviews(200, 21));
  EXPECT_TRUE(nb.ok());
  return *std::move(nb);
}

TEST(WireTest, PredictResponseRoundTrip) {
  const std::vector<ClassDistribution> rows = {
      *ClassDistribution::FromProbabilities({0.25, 0.75}),
      *ClassDistribution::FromProbabilities({0.6, 0.4})};
  absl::StatusOr<std::vector<ClassDistribution>> back =
      DecodePredictResponse(EncodePredictResponse(rows), 2);
  ASSERT_TRUE(back.ok()) << back.status();
  EXPECT_EQ((*back)[0].probs, rows[0].probs);
  EXPECT_EQ((*back)[1].predicted, 0);
}

TEST(WireTest, ExactFormat) {
  const std::vector<std::string> texts = {"a", "b"};
  EXPECT_EQ(EncodePredictRequest(texts), "{\"texts\":[\"a\",\"b\"]}");
  EXPECT_EQ(EncodeHealthResponse({"neg", "pos"}),
            "{\"classes\":[\"neg\",\"pos\"]}");
  EXPECT_EQ(EncodePredictResponse(
                {*ClassDistribution::FromProbabilities({0.5, 0.5})}),
            "{\"probs\":[[0.5,0.5]]}");
}

TEST(WireTest, RejectsMalformedResponses) {
  EXPECT_FALSE(DecodePredictResponse("nope", 1).ok());
  EXPECT_FALSE(DecodePredictResponse("{\"probs\": [[0.5, 0.5]]}", 2).ok());
  EXPECT_FALSE(DecodePredictResponse("{\"probs\": [[0.5, 0.6]]}", 1).ok());
  EXPECT_FALSE(DecodePredictResponse("{\"probs\": [[\"x\", 1]]}", 1).ok());
  EXPECT_FALSE(DecodePredictResponse("{\"probs\": [[-0.5, 1.5]]}", 1).ok());
  EXPECT_FALSE(DecodeHealthResponse("{\"classes\": 3}").ok());
  EXPECT_THAT(*DecodeHealthResponse("{\"classes\": [\"x\", \"y\"]}"),
              ElementsAre("x", "y"));
}

TEST(PredictionServerTest, HandlerStatusCodes) {
  const NaiveBayesModel nb = Model();
  PredictionServer server(nb);
  EXPECT_EQ(server.HandlePredict("{\"texts\": [\"superb\"]}").status, 200);
  EXPECT_EQ(server.HandlePredict("{not json").status, 400);
  EXPECT_EQ(server.HandlePredict("{\"texts\": \"superb\"}").status, 400);
  EXPECT_EQ(server.HandlePredict("{\"texts\": [1, 2]}").status, 400);
  EXPECT_EQ(server.HandlePredict("{}").status, 400);
  EXPECT_EQ(server.HandlePredict("{\"texts\": []}").status, 422);
  EXPECT_EQ(server.HandleHealth().status, 200);
  EXPECT_EQ(server.HandleHealth().body, EncodeHealthResponse(nb.class_names()));

  const NaiveBayesModel untrained;
  PredictionServer unavailable(untrained);
  EXPECT_EQ(unavailable.HandlePredict("{\"texts\": [\"x\"]}").status, 503);
  EXPECT_EQ(unavailable.HandleHealth().status, 503);
}

TEST(RemoteClassifierTest, MatchesLocalPredictions) {
  const NaiveBayesModel nb = Model();
  ServedModel served(nb);
  absl::StatusOr<std::unique_ptr<RemoteClassifier>> remote =
      RemoteClassifier::Connect(served.url());
  ASSERT_TRUE(remote.ok()) << remote.status();
  EXPECT_EQ((*remote)->class_names(), nb.class_names());

  const LabeledCorpus texts = testing::SyntheticReviews(50, 22);
  std::vector<std::string> batch;
  for (const Sample& s : texts.samples()) batch.push_back(s.text);
  absl::StatusOr<std::vector<ClassDistribution>> got = (*remote)->Predict(batch);
  absl::StatusOr<std::vector<ClassDistribution>> want = nb.Predict(batch);
  ASSERT_TRUE(got.ok()) << got.status();
  ASSERT_EQ(got->size(), want->size());
  for (size_t i = 0; i < batch.size(); ++i) {
    EXPECT_EQ((*got)[i].predicted, (*want)[i].predicted);
    for (size_t c = 0; c < 2; ++c) {
      EXPECT_NEAR((*got)[i].probs[c], (*want)[i].probs[c], 1e-6);
    }
  }
}

TEST(RemoteClassifierTest, ServerErrorsSurface) {
  const NaiveBayesModel nb = Model();
  ServedModel served(nb);
  absl::StatusOr<std::unique_ptr<RemoteClassifier>> remote =
      RemoteClassifier::Connect(served.url() + "/");
  ASSERT_TRUE(remote.ok()) << remote.status();
  EXPECT_TRUE(absl::IsInvalidArgument((*remote)->Predict({}).status()));
}

TEST(RemoteClassifierTest, CountedThroughLedger) {
  const NaiveBayesModel nb = Model();
  ServedModel served(nb);
  absl::StatusOr<std::unique_ptr<RemoteClassifier>> remote =
      RemoteClassifier::Connect(served.url());
  ASSERT_TRUE(remote.ok());
  QueryLedger ledger;
  CountingClassifier counted(**remote, ledger);
  const std::vector<std::string> batch = {"a", "b", "c"};
  ASSERT_TRUE(counted.Predict(batch).ok());
  EXPECT_EQ(ledger.total(), 3);
}

TEST(RemoteClassifierTest, UnreachableVictim) {
  // Find a port nobody listens on by binding and releasing it.
  int port = 0;
  {
    const NaiveBayesModel nb = Model();
    PredictionServer probe(nb);
    port = *probe.Bind("127.0.0.1", 0);
  }
  RemoteOptions options;
  options.max_retries = 2;
  options.initial_backoff = std::chrono::milliseconds(1);
  options.connect_timeout = std::chrono::seconds(1);
  absl::StatusOr<std::unique_ptr<RemoteClassifier>> remote =
      RemoteClassifier::Connect("http://127.0.0.1:" + std::to_string(port),
                                options);
  EXPECT_TRUE(absl::IsUnavailable(remote.status())) << remote.status();
}

TEST(RemoteClassifierTest, RejectsBadUrls) {
  for (const char* url : {"ftp://x:1", "127.0.0.1:80", "http://", ""}) {
    EXPECT_TRUE(
        absl::IsInvalidArgument(RemoteClassifier::Connect(url).status()))
        << url;
  }
}

TEST(ParseBindAddressTest, Parses) {
  EXPECT_EQ(*ParseBindAddress("127.0.0.1:8080"),
            std::make_pair(std::string("127.0.0.1"), 8080));
  EXPECT_EQ(ParseBindAddress("localhost:0")->second, 0);
  EXPECT_FALSE(ParseBindAddress("localhost").ok());
  EXPECT_FALSE(ParseBindAddress(":80").ok());
  EXPECT_FALSE(ParseBindAddress("h:70000").ok());
  EXPECT_FALSE(ParseBindAddress("h:x").ok());
}

TEST(PredictionServerTest, StopBeforeListenIsNotLost) {
  const NaiveBayesModel nb = Model();
  PredictionServer server(nb);
  ASSERT_TRUE(server.Bind("127.0.0.1", 0).ok());
  server.Stop();
  // Returns at once instead of serving forever.
  EXPECT_TRUE(server.Listen().ok());
}

TEST(PredictionServerTest, BindFailure) {
  const NaiveBayesModel nb = Model();
  PredictionServer server(nb);
  EXPECT_FALSE(server.Bind("256.0.0.1", 0).ok());
  EXPECT_FALSE(server.Listen().ok());
}

}  // namespace
}  // namespace typostrike
