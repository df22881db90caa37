// Copyright 2026 The mbgen Authors.
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

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>

#include "gtest/gtest.h"
#include "mbgen/nn/adamw.h"
#include "mbgen/nn/checkpoint.h"
#include "mbgen/nn/gradcheck.h"
#include "mbgen/nn/losses.h"
#include "mbgen/nn/mlp.h"

namespace mbgen {
namespace nn {
namespace {

Architecture QNetArch(int input, int actions) { return {input, {200, 200, 200}, {actions}}; }

TEST(MlpInitTest, DeterministicGivenSeed) {
  std::mt19937_64 a(0), b(0);
  EXPECT_EQ(InitMlp<float>(QNetArch(64, 5), a), InitMlp<float>(QNetArch(64, 5), b));
}

TEST(MlpInitTest, ProcMazeQNetShapes) {
  std::mt19937_64 rng(0);
  auto p = InitMlp<float>(QNetArch(64, 5), rng);
  EXPECT_EQ(p.W(0).rows(), 64);
  EXPECT_EQ(p.W(0).cols(), 200);
  EXPECT_EQ(p.W(1).rows(), 200);
  EXPECT_EQ(p.W(2).cols(), 200);
  EXPECT_EQ(p.W(3).rows(), 200);
  EXPECT_EQ(p.W(3).cols(), 5);
  EXPECT_TRUE(p.B(2).isZero());
  EXPECT_EQ(p.size(), 64u * 200 + 200 + 2 * (200 * 200 + 200) + 200 * 5 + 5);
}

TEST(MlpInitTest, OutputScaleIsModerate) {
  std::mt19937_64 rng(1);
  auto p = InitMlp<float>(QNetArch(64, 5), rng);
  std::bernoulli_distribution bit(0.5);
  Matrix<float> x(256, 64);
  for (Eigen::Index i = 0; i < x.size(); ++i) x.data()[i] = bit(rng) ? 1.0f : 0.0f;
  Matrix<float> y = Forward(p, x);
  const double mean = y.cast<double>().mean();
  const double sd = std::sqrt((y.cast<double>().array() - mean).square().mean());
  EXPECT_GT(sd, 0.1);
  EXPECT_LT(sd, 10.0);
}

TEST(MlpForwardTest, ZeroWeightsGiveBiases) {
  MlpParams<double> p({3, {4}, {2, 1}});
  p.B(1) << 0.5, -1.5, 2.0;
  Matrix<double> x = Matrix<double>::Random(5, 3);
  Matrix<double> y = Forward(p, x);
  for (int r = 0; r < 5; ++r) {
    EXPECT_DOUBLE_EQ(y(r, 0), 0.5);
    EXPECT_DOUBLE_EQ(y(r, 1), -1.5);
    EXPECT_DOUBLE_EQ(y(r, 2), 2.0);
  }
}

TEST(MlpForwardTest, EluDefinition) {
  EXPECT_DOUBLE_EQ(Elu(0.0), 0.0);
  EXPECT_DOUBLE_EQ(Elu(2.5), 2.5);
  EXPECT_DOUBLE_EQ(Elu(-1e6), -1.0);
  EXPECT_NEAR(Elu(-1.0), std::exp(-1.0) - 1.0, 1e-15);
}

TEST(MlpForwardTest, HandComputedTwoTwoOne) {
  MlpParams<double> p({2, {2}, {1}});
  p.W(0) << 0.5, -1.0, 0.25, 0.5;
  p.B(0) << 0.1, -0.2;
  p.W(1) << 2.0, -1.0;
  p.B(1) << 0.3;
  Matrix<double> x(1, 2);
  x << 1.0, -2.0;
  // Pre-activations (0.1, -2.2); ELU gives (0.1, e^-2.2 - 1).
  EXPECT_NEAR(Forward(p, x)(0, 0), 1.389196841637666, 1e-14);
}

TEST(MlpForwardTest, PureAndRejectsNonFinite) {
  std::mt19937_64 rng(2);
  auto p = InitMlp<float>(QNetArch(10, 3), rng);
  Matrix<float> x = Matrix<float>::Random(7, 10);
  Matrix<float> a = Forward(p, x), b = Forward(p, x);
  EXPECT_EQ(0, std::memcmp(a.data(), b.data(), sizeof(float) * a.size()));
  x(3, 3) = std::nanf("");
  EXPECT_THROW(Forward(p, x), std::invalid_argument);
  EXPECT_THROW(Forward(p, Matrix<float>::Zero(1, 9)), std::invalid_argument);
}

TEST(MlpBackwardTest, FiniteDifferencesOnRandomNets) {
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<int> width(1, 6);
  for (int trial = 0; trial < 60; ++trial) {
    Architecture arch{8, {4, 4}, {2, width(rng), 1}};
    if (trial % 3 == 1) arch = {width(rng), {width(rng), width(rng), width(rng)}, {width(rng), 3, 1}};
    const double err = RandomNetworkGradientError(arch, 1 + trial % 5, rng);
    EXPECT_LT(err, 1e-4) << "trial " << trial;
  }
}

TEST(MlpBackwardTest, UnrelatedHeadGetsZeroGradient) {
  std::mt19937_64 rng(4);
  Architecture arch{5, {6, 6}, {2, 3}};
  auto p = InitMlp<double>(arch, rng);
  ForwardCache<double> cache;
  Forward(p, Matrix<double>::Random(4, 5), cache);
  auto lg = HeadLoss(LossKind::kMse, cache.output, arch, 0, Matrix<double>::Ones(4, 2));
  auto g = p.ZerosLike();
  Backward(p, cache, lg.grad, &g);
  EXPECT_TRUE(g.W(2).rightCols(3).isZero());
  EXPECT_TRUE(g.B(2).tail(3).isZero());
  EXPECT_FALSE(g.W(2).leftCols(2).isZero());
}

TEST(MlpBackwardTest, GradientIsLinearInTheLoss) {
  std::mt19937_64 rng(5);
  Architecture arch{4, {5, 5}, {2, 2}};
  auto p = InitMlp<double>(arch, rng);
  ForwardCache<double> cache;
  Forward(p, Matrix<double>::Random(3, 4), cache);
  Matrix<double> t = Matrix<double>::Zero(3, 2);
  auto l1 = HeadLoss(LossKind::kMse, cache.output, arch, 0, t);
  auto l2 = HeadLoss(LossKind::kBernoulliObs, cache.output, arch, 1, t);
  auto g1 = p.ZerosLike(), g2 = p.ZerosLike(), g12 = p.ZerosLike();
  Backward(p, cache, l1.grad, &g1);
  Backward(p, cache, l2.grad, &g2);
  Backward(p, cache, Matrix<double>(l1.grad + l2.grad), &g12);
  for (std::size_t i = 0; i < g1.size(); ++i) {
    EXPECT_NEAR(g12.data()[i], g1.data()[i] + g2.data()[i], 1e-12);
  }
}

TEST(MlpBackwardTest, ShapeMismatchRejected) {
  std::mt19937_64 rng(6);
  auto p = InitMlp<double>({3, {4}, {2}}, rng);
  ForwardCache<double> cache;
  Forward(p, Matrix<double>::Random(2, 3), cache);
  auto g = p.ZerosLike();
  EXPECT_THROW(Backward(p, cache, Matrix<double>(Matrix<double>::Zero(2, 3)), &g), std::invalid_argument);
}

TEST(LossTest, BernoulliValues) {
  Matrix<double> z(1, 1), t(1, 1);
  z << 0.0;
  t << 1.0;
  EXPECT_NEAR(BernoulliLogitsLoss(z, t).value, std::log(2.0), 1e-15);
  z << -100.0;
  auto lg = BernoulliLogitsLoss(z, t);
  EXPECT_NEAR(lg.value, 100.0, 1e-12);
  EXPECT_NEAR(lg.grad(0, 0), -1.0, 1e-12);
  Matrix<float> zf(1, 1), tf(1, 1);
  zf << 200.0f;
  tf << 0.0f;
  EXPECT_TRUE(std::isfinite(BernoulliLogitsLoss(zf, tf).value));
}

TEST(LossTest, BernoulliGradientMatchesFiniteDifference) {
  std::mt19937_64 rng(7);
  std::normal_distribution<double> n(0, 3);
  Matrix<double> z(4, 3), t(4, 3);
  for (Eigen::Index i = 0; i < z.size(); ++i) {
    z.data()[i] = n(rng);
    t.data()[i] = i % 2;
  }
  auto lg = BernoulliLogitsLoss(z, t);
  for (Eigen::Index i = 0; i < z.size(); ++i) {
    Matrix<double> up = z, down = z;
    up.data()[i] += 1e-6;
    down.data()[i] -= 1e-6;
    double fd = (BernoulliLogitsLoss(up, t).value - BernoulliLogitsLoss(down, t).value) / 2e-6;
    EXPECT_NEAR(lg.grad.data()[i], fd, 1e-7);
    EXPECT_NEAR(lg.grad.data()[i], (Sigmoid(z.data()[i]) - t.data()[i]) / 4, 1e-15);
  }
}

TEST(LossTest, MseAtTargetIsZero) {
  Matrix<double> p = Matrix<double>::Random(3, 2);
  auto lg = MseLoss(p, p);
  EXPECT_EQ(lg.value, 0.0);
  EXPECT_TRUE(lg.grad.isZero());
}

TEST(AdamWTest, ZeroGradientZeroDecayIsIdentity) {
  std::mt19937_64 rng(8);
  auto p = InitMlp<float>({3, {4}, {2}}, rng);
  auto before = p;
  AdamW<float> opt(p.size(), {.step_size = 1e-3, .weight_decay = 0.0});
  for (int i = 0; i < 5; ++i) opt.Step(p, p.ZerosLike());
  EXPECT_EQ(p, before);
}

TEST(AdamWTest, FirstStepMovesByStepSizeTimesSign) {
  std::mt19937_64 rng(9);
  auto p = InitMlp<double>({3, {4}, {2}}, rng);
  auto before = p;
  auto g = p.ZerosLike();
  std::normal_distribution<double> n(0, 1);
  for (std::size_t i = 0; i < g.size(); ++i) g.data()[i] = n(rng);
  AdamW<double> opt(p.size(), {.step_size = 1e-3, .weight_decay = 0.0});
  opt.Step(p, g);
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double gi = g.data()[i];
    // Bias-corrected moments give exactly lr * g / (|g| + eps).
    EXPECT_NEAR(p.data()[i] - before.data()[i], -1e-3 * gi / (std::abs(gi) + 1e-5), 1e-15);
    if (std::abs(gi) > 0.01) {
      EXPECT_NEAR(p.data()[i] - before.data()[i], -1e-3 * (gi > 0 ? 1 : -1), 1e-6);
    }
  }
}

TEST(AdamWTest, DecoupledDecayShrinksGeometrically) {
  MlpParams<double> p({1, {1}, {1}});
  std::fill(p.values().begin(), p.values().end(), 2.0);
  AdamW<double> opt(p.size(), {.step_size = 0.5, .weight_decay = 1e-6});
  for (int i = 0; i < 10; ++i) opt.Step(p, p.ZerosLike());
  EXPECT_NEAR(p.data()[0], 2.0 * std::pow(1 - 0.5e-6, 10), 1e-15);
}

TEST(AdamWTest, NonFiniteGradientRejected) {
  MlpParams<float> p({1, {1}, {1}});
  auto g = p.ZerosLike();
  g.data()[2] = std::numeric_limits<float>::infinity();
  AdamW<float> opt(p.size(), {});
  EXPECT_THROW(opt.Step(p, g), std::domain_error);
  EXPECT_EQ(opt.step_count(), 0);
}

TEST(TrainingTest, LearnsXor) {
  std::mt19937_64 rng(10);
  Architecture arch{2, {16}, {1}};
  auto p = InitMlp<float>(arch, rng);
  AdamW<float> opt(p.size(), {.step_size = 1e-2, .weight_decay = 0.0});
  Matrix<float> x(4, 2), y(4, 1);
  x << 0, 0, 0, 1, 1, 0, 1, 1;
  y << 0, 1, 1, 0;
  double loss = 1.0;
  int steps = 0;
  for (; steps < 5000 && loss >= 0.01; ++steps) {
    ForwardCache<float> cache;
    Forward(p, x, cache);
    auto lg = BernoulliLogitsLoss(cache.output, y);
    loss = lg.value;
    auto g = p.ZerosLike();
    Backward(p, cache, lg.grad, &g);
    opt.Step(p, g);
  }
  EXPECT_LT(loss, 0.01) << "after " << steps << " steps";
}

TEST(CheckpointTest, RoundTripIsBitExact) {
  std::mt19937_64 rng(11);
  auto p = InitMlp<float>({7, {5, 5}, {7, 1, 1}}, rng);
  const auto dir = std::filesystem::temp_directory_path() / "mbgen_ckpt_test";
  std::filesystem::create_directories(dir);
  const std::string stem = (dir / "model").string();
  SaveCheckpoint(stem, p, {{"kind", "model"}, {"step", 42}});
  EXPECT_EQ(std::filesystem::file_size(stem + ".bin"), 4 * p.size());
  // Little-endian: the first four bytes decode to the first weight.
  std::ifstream bin(stem + ".bin", std::ios::binary);
  unsigned char b[4];
  bin.read(reinterpret_cast<char*>(b), 4);
  std::uint32_t bits = b[0] | (b[1] << 8) | (b[2] << 16) | (std::uint32_t{b[3]} << 24);
  EXPECT_EQ(std::bit_cast<float>(bits), p.data()[0]);
  Checkpoint loaded = LoadCheckpoint(stem + ".json");
  EXPECT_EQ(loaded.params, p);
  EXPECT_EQ(loaded.metadata["step"], 42);
  std::filesystem::resize_file(stem + ".bin", 8);
  EXPECT_THROW(LoadCheckpoint(stem), std::runtime_error);
  std::filesystem::remove_all(dir);
}

}  // namespace
}  // namespace nn
}  // namespace mbgen
