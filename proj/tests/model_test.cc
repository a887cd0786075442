// Copyright 2026 The subtok Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "subtok/model.h"

#include <cmath>
#include <random>
#include <sstream>

#include "gmock/gmock.h"
#include "gradient_check.h"
#include "gtest/gtest.h"
#include "subtok/tokenize.h"
#include "test_util.h"

namespace subtok {
namespace {

using ::testing::DoubleNear;
using ::testing::ElementsAre;
using ::testing::HasSubstr;

FeatureSpace SmallSpace(std::vector<std::string> words) {
  FeatureConfig config;
  config.buckets = 0;
  std::vector<int64_t> counts(words.size(), 1);
  return FeatureSpace(std::move(words), std::move(counts), config);
}

ClassifierModel SmallModel(int dim = 4, uint64_t seed = 1) {
  return ClassifierModel::Init(SmallSpace({"you", "idiot", "nice"}), dim, {"none", "attack"},
                               seed);
}

std::string Serialize(const ClassifierModel& model) {
  std::ostringstream out;
  model.Save(out);
  return out.str();
}

TEST(InitTest, BoundedByInverseDim) {
  ClassifierModel model = ClassifierModel::Init(SmallSpace({"a", "b", "c", "d"}), 100,
                                                {"x", "y"}, 7);
  for (int64_t r = 0; r < model.input_rows(); ++r) {
    for (float w : model.input_row(r)) EXPECT_LE(std::abs(w), 0.01f);
  }
  for (int c = 0; c < 2; ++c) {
    for (float w : model.output_row(c)) EXPECT_EQ(w, 0.0f);
  }
}

TEST(InitTest, DeterministicPerSeed) {
  EXPECT_EQ(Serialize(SmallModel(8, 3)), Serialize(SmallModel(8, 3)));
  EXPECT_NE(Serialize(SmallModel(8, 3)), Serialize(SmallModel(8, 4)));
}

TEST(InitTest, Errors) {
  EXPECT_THROW(ClassifierModel::Init(SmallSpace({"a"}), 0, {"x", "y"}, 0),
               std::invalid_argument);
  EXPECT_THROW(ClassifierModel::Init(SmallSpace({"a"}), 4, {"x"}, 0), std::invalid_argument);
}

TEST(ForwardTest, ZeroOutputIsUniform) {
  ClassifierModel model = ClassifierModel::Init(SmallSpace({"a", "b"}), 5, {"x", "y", "z"}, 0);
  for (const FeatureVector& fv : {FeatureVector{0}, FeatureVector{0, 1, 1}, FeatureVector{}}) {
    EXPECT_THAT(model.Forward(fv),
                ElementsAre(DoubleNear(1.0 / 3, 1e-15), DoubleNear(1.0 / 3, 1e-15),
                            DoubleNear(1.0 / 3, 1e-15)));
  }
}

TEST(ForwardTest, EmptyDocumentIsUniformEvenWithWeights) {
  ClassifierModel model = SmallModel();
  model.output_row(0)[0] = 5.0f;
  EXPECT_THAT(model.Forward(FeatureVector{}), ElementsAre(0.5, 0.5));
}

TEST(SoftmaxTest, LnThree) {
  const std::vector<double> z = {std::log(3.0), 0.0};
  EXPECT_THAT(Softmax(z), ElementsAre(DoubleNear(0.75, 1e-12), DoubleNear(0.25, 1e-12)));
}

TEST(SoftmaxTest, ShiftInvariantAndStable) {
  const std::vector<double> z = {1000.0, 999.0};
  const std::vector<double> shifted = {1.0, 0.0};
  const std::vector<double> a = Softmax(z);
  const std::vector<double> b = Softmax(shifted);
  EXPECT_NEAR(a[0], b[0], 1e-12);
  EXPECT_NEAR(a[1], b[1], 1e-12);
}

TEST(PredictTest, TieGoesToLowestId) {
  ClassifierModel model = SmallModel();
  const Prediction p = model.Predict(FeatureVector{0});
  EXPECT_EQ(p.label, 0);
  EXPECT_DOUBLE_EQ(p.probability, 0.5);
}

TEST(PredictTest, Argmax) {
  // One feature, one dimension: h = 1, logits (ln 3, 0).
  ClassifierModel model = ClassifierModel::Init(SmallSpace({"a"}), 1, {"x", "y"}, 0);
  model.input_row(0)[0] = 1.0f;
  model.output_row(0)[0] = static_cast<float>(std::log(3.0));
  const Prediction p = model.Predict(FeatureVector{0});
  EXPECT_EQ(p.label, 0);
  EXPECT_NEAR(p.probability, 0.75, 1e-6);
  model.output_row(1)[0] = 2.0f;
  EXPECT_EQ(model.Predict(FeatureVector{0}).label, 1);
}

TEST(SgdStepTest, SingleUpdateFormula) {
  ClassifierModel model = ClassifierModel::Init(SmallSpace({"a", "b"}), 3, {"x", "y"}, 9);
  model.output_row(0)[1] = 0.5f;
  model.output_row(1)[2] = -0.25f;
  const ClassifierModel before = model;
  const double lr = 0.1;
  const int label = 1;

  // By hand: h = E[0]; z = W h; p = softmax(z); g = p - onehot.
  std::vector<double> h(before.input_row(0).begin(), before.input_row(0).end());
  std::vector<double> z(2, 0.0);
  for (int c = 0; c < 2; ++c) {
    for (int j = 0; j < 3; ++j) z[c] += before.output_row(c)[j] * h[j];
  }
  const double p1 = 1.0 / (1.0 + std::exp(z[0] - z[1]));
  const std::vector<double> g = {1.0 - p1, p1 - 1.0};

  const double loss = SgdStep(model, FeatureVector{0}, label, lr);
  EXPECT_NEAR(loss, -std::log(p1), 1e-12);
  for (int c = 0; c < 2; ++c) {
    for (int j = 0; j < 3; ++j) {
      EXPECT_NEAR(model.output_row(c)[j], before.output_row(c)[j] - lr * g[c] * h[j], 1e-7);
    }
  }
  for (int j = 0; j < 3; ++j) {
    const double dh = g[0] * before.output_row(0)[j] + g[1] * before.output_row(1)[j];
    EXPECT_NEAR(model.input_row(0)[j], before.input_row(0)[j] - lr * dh, 1e-7);
    EXPECT_EQ(model.input_row(1)[j], before.input_row(1)[j]);
  }
}

TEST(SgdStepTest, RepeatedIdsUpdateRepeatedly) {
  ClassifierModel once = SmallModel(3, 2);
  once.output_row(0)[0] = 0.3f;
  ClassifierModel twice = once;
  const ExampleGradient g = ComputeExampleGradient(once, FeatureVector{1, 1}, 0);
  SgdStep(twice, FeatureVector{1, 1}, 0, 0.2);
  for (int j = 0; j < 3; ++j) {
    // Two occurrences, each moving by lr * dh / 2.
    EXPECT_NEAR(twice.input_row(1)[j], once.input_row(1)[j] - 0.2 * g.hidden_grad[j], 1e-7);
  }
}

TEST(SgdStepTest, EmptyIsNoOp) {
  ClassifierModel model = SmallModel();
  const std::string before = Serialize(model);
  EXPECT_TRUE(std::isnan(SgdStep(model, {}, 0, 0.5)));
  EXPECT_EQ(Serialize(model), before);
}

TEST(GradientTest, MatchesFiniteDifferences) {
  for (uint64_t seed = 0; seed < 20; ++seed) {
    EXPECT_LT(testing::MaxGradientError(testing::RandomGradientCase(seed)), 1e-4)
        << "seed " << seed;
  }
}

struct ToyData {
  ClassifierModel model;
  std::vector<FeatureVector> features;
  std::vector<int> labels;
};

ToyData MakeToy(int dim, uint64_t seed) {
  const std::vector<testing::LabeledText> rows = testing::SeparableToy(100, seed);
  std::vector<TokenStream> docs;
  ToyData toy;
  for (const auto& r : rows) {
    docs.push_back(WordTokenize(r.text));
    toy.labels.push_back(r.label == "none" ? 0 : 1);
  }
  FeatureConfig config;
  FeatureSpace space = FeatureSpace::Build(docs, config);
  for (const auto& d : docs) toy.features.push_back(space.Featurize(d));
  toy.model = ClassifierModel::Init(std::move(space), dim, {"none", "attack"}, seed);
  return toy;
}

TEST(TrainTest, SeparableToyFits) {
  ToyData toy = MakeToy(100, 0);
  TrainConfig config;
  const TrainStats stats = Train(toy.model, toy.features, toy.labels, config);
  int correct = 0;
  for (size_t i = 0; i < toy.features.size(); ++i) {
    correct += toy.model.Predict(toy.features[i]).label == toy.labels[i];
  }
  EXPECT_GE(correct, 99);
  ASSERT_EQ(stats.epoch_loss.size(), 5u);
  EXPECT_LT(stats.epoch_loss.back(), stats.epoch_loss.front());
}

TEST(TrainTest, DeterministicPerSeed) {
  ToyData a = MakeToy(10, 4);
  ToyData b = MakeToy(10, 4);
  TrainConfig config;
  config.seed = 4;
  Train(a.model, a.features, a.labels, config);
  Train(b.model, b.features, b.labels, config);
  EXPECT_EQ(Serialize(a.model), Serialize(b.model));
}

TEST(TrainTest, EmptyDocumentsAreSkipped) {
  ToyData toy = MakeToy(10, 1);
  toy.features[3].clear();
  toy.features[8].clear();
  TrainConfig config;
  config.epochs = 2;
  EXPECT_EQ(Train(toy.model, toy.features, toy.labels, config).skipped, 4);
}

TEST(TrainTest, NonFiniteLossNamesDocument) {
  ToyData toy = MakeToy(10, 1);
  toy.model.input_row(toy.features[0][0])[0] = std::numeric_limits<float>::infinity();
  std::vector<int64_t> ids(toy.features.size());
  for (size_t i = 0; i < ids.size(); ++i) ids[i] = 1000 + static_cast<int64_t>(i);
  TrainConfig config;
  try {
    Train(toy.model, toy.features, toy.labels, config, ids);
    FAIL() << "expected an error";
  } catch (const std::runtime_error& e) {
    EXPECT_THAT(e.what(), HasSubstr("document 10"));
  }
}

TEST(TrainTest, Errors) {
  ToyData toy = MakeToy(10, 1);
  TrainConfig config;
  EXPECT_THROW(Train(toy.model, {}, {}, config), std::invalid_argument);
  std::vector<int> bad = toy.labels;
  bad[0] = 7;
  EXPECT_THROW(Train(toy.model, toy.features, bad, config), std::invalid_argument);
  config.lr = 0.0;
  EXPECT_THROW(Train(toy.model, toy.features, toy.labels, config), std::invalid_argument);
}

TEST(PretrainedTest, OverwritesKnownRows) {
  ClassifierModel model = SmallModel(3);
  std::istringstream in("2 3\nyou 0.5 -1 2\nstranger 1 1 1\n");
  EXPECT_EQ(model.LoadPretrainedEmbeddings(in), 1);
  const int32_t id = model.space().WordId("you");
  const std::span<const float> row = model.input_row(id);
  EXPECT_THAT(std::vector<float>(row.begin(), row.end()), ElementsAre(0.5f, -1.0f, 2.0f));
}

TEST(PretrainedTest, NoKnownWordsLeavesModelUnchanged) {
  ClassifierModel model = SmallModel(3);
  const std::string before = Serialize(model);
  std::istringstream in("1 3\nstranger 1 1 1\n");
  EXPECT_EQ(model.LoadPretrainedEmbeddings(in), 0);
  EXPECT_EQ(Serialize(model), before);
}

TEST(PretrainedTest, DimensionMismatch) {
  ClassifierModel model = SmallModel(100);
  std::istringstream in("2 50\n");
  try {
    model.LoadPretrainedEmbeddings(in);
    FAIL() << "expected an error";
  } catch (const std::runtime_error& e) {
    EXPECT_THAT(e.what(), HasSubstr("dimension"));
  }
}

TEST(PretrainedTest, MalformedLineNamesLine) {
  ClassifierModel model = SmallModel(3);
  std::istringstream short_row("2 3\nyou 1 2 3\nidiot 1 2\n");
  try {
    model.LoadPretrainedEmbeddings(short_row);
    FAIL() << "expected an error";
  } catch (const std::runtime_error& e) {
    EXPECT_THAT(e.what(), HasSubstr("line 3"));
  }
  std::istringstream bad_number("1 3\nyou 1 x 3\n");
  EXPECT_THROW(model.LoadPretrainedEmbeddings(bad_number), std::runtime_error);
}

TEST(SerializationTest, RoundTripIsExact) {
  ToyData toy = MakeToy(16, 2);
  TrainConfig config;
  config.epochs = 1;
  Train(toy.model, toy.features, toy.labels, config);
  toy.model.set_annotations({{"note", "x"}});
  std::stringstream buffer;
  toy.model.Save(buffer);
  const ClassifierModel loaded = ClassifierModel::Load(buffer);
  EXPECT_EQ(loaded.annotations(), toy.model.annotations());
  EXPECT_EQ(loaded.labels(), toy.model.labels());
  for (const FeatureVector& fv : toy.features) {
    EXPECT_EQ(loaded.Forward(fv), toy.model.Forward(fv));
  }
  EXPECT_EQ(Serialize(loaded), Serialize(toy.model));
}

TEST(SerializationTest, SavesAreByteIdentical) {
  ClassifierModel model = SmallModel();
  EXPECT_EQ(Serialize(model), Serialize(model));
}

TEST(SerializationTest, CorruptMagic) {
  std::string bytes = Serialize(SmallModel());
  bytes[0] = 'X';
  std::istringstream in(bytes);
  EXPECT_THROW(ClassifierModel::Load(in), std::runtime_error);
}

TEST(SerializationTest, WrongVersion) {
  std::string bytes = Serialize(SmallModel());
  bytes[4] = 2;
  std::istringstream in(bytes);
  EXPECT_THROW(ClassifierModel::Load(in), std::runtime_error);
}

TEST(SerializationTest, Truncated) {
  const std::string bytes = Serialize(SmallModel());
  for (size_t keep : {size_t{3}, size_t{7}, size_t{20}, bytes.size() - 1}) {
    std::istringstream in(bytes.substr(0, keep));
    EXPECT_THROW(ClassifierModel::Load(in), std::runtime_error) << keep;
  }
}

TEST(SerializationTest, TrailingBytes) {
  std::istringstream in(Serialize(SmallModel()) + "x");
  EXPECT_THROW(ClassifierModel::Load(in), std::runtime_error);
}

TEST(SerializationTest, FileRoundTrip) {
  testing::TempDir dir;
  ClassifierModel model = SmallModel();
  model.Save(dir / "m.bin");
  EXPECT_EQ(Serialize(ClassifierModel::Load(dir / "m.bin")), Serialize(model));
  EXPECT_THROW(ClassifierModel::Load(dir / "none.bin"), std::runtime_error);
}

}  // namespace
}  // namespace subtok
