// Copyright 2026 The SSC Authors. All Rights Reserved.
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

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "ssc/adam.h"
#include "ssc/filter_net.h"
#include "ssc/nn_ops.h"
#include "ssc/status.h"
#include "test_util.h"

namespace ssc {
namespace {

using testing::Dot;
using testing::GradCheck;
using testing::RandomTensor;

constexpr double kTol = 1e-3;

TEST(Conv2dTest, PointwiseIdentity) {
  std::mt19937_64 rng(1);
  const Tensor x = RandomTensor({2, 3, 4, 5}, rng);
  Tensor w({3, 3, 1, 1});
  for (int c = 0; c < 3; ++c) w.at(c, c, 0, 0) = 1.0;
  EXPECT_EQ(Conv2d(x, w, Tensor({3}), 1), x);
}

TEST(Conv2dTest, OnesKernelSumsWindow) {
  const Tensor x({1, 1, 5, 5}, 0.7);
  const Tensor w({1, 1, 3, 3}, 1.0);
  const Tensor y = Conv2d(x, w, Tensor({1}), 1);
  EXPECT_NEAR(y.at(0, 0, 2, 2), 9 * 0.7, 1e-12);
  EXPECT_NEAR(y.at(0, 0, 0, 0), 4 * 0.7, 1e-12);  // zero padding at the corner
}

TEST(Conv2dTest, StrideTwoShape) {
  const Tensor y = Conv2d(Tensor({1, 3, 7, 6}), Tensor({5, 3, 3, 3}), Tensor({5}), 2);
  EXPECT_EQ(y.shape(), (std::vector<int>{1, 5, 4, 3}));
}

TEST(Conv2dTest, ShapeMismatchThrows) {
  EXPECT_THROW(Conv2d(Tensor({1, 2, 4, 4}), Tensor({4, 3, 3, 3}), Tensor({4}), 1), Error);
}

void CheckConvGrads(int stride, bool depthwise) {
  std::mt19937_64 rng(stride * 10 + depthwise);
  Tensor x = RandomTensor({2, 3, 5, 5}, rng);
  Tensor w = depthwise ? RandomTensor({3, 1, 3, 3}, rng) : RandomTensor({4, 3, 3, 3}, rng);
  Tensor b = RandomTensor({depthwise ? 3 : 4}, rng);
  auto fwd = [&] {
    return depthwise ? DepthwiseConv2d(x, w, b, stride) : Conv2d(x, w, b, stride);
  };
  const Tensor r = RandomTensor(fwd().shape(), rng);
  const ConvGrads g = depthwise ? DepthwiseConv2dBackward(x, w, r, stride)
                                : Conv2dBackward(x, w, r, stride);
  auto f = [&] { return Dot(fwd(), r); };
  EXPECT_LT(GradCheck(&x, g.dx, f), kTol);
  EXPECT_LT(GradCheck(&w, g.dw, f), kTol);
  EXPECT_LT(GradCheck(&b, g.db, f), kTol);
}

TEST(Conv2dTest, GradientsMatchFiniteDifferences) {
  CheckConvGrads(1, false);
  CheckConvGrads(2, false);
}

TEST(DepthwiseTest, UnitKernelIsIdentity) {
  std::mt19937_64 rng(2);
  const Tensor x = RandomTensor({1, 4, 3, 3}, rng);
  EXPECT_EQ(DepthwiseConv2d(x, Tensor({4, 1, 1, 1}, 1.0), Tensor({4})), x);
}

TEST(DepthwiseTest, OnesKernelSumsWindow) {
  const Tensor y =
      DepthwiseConv2d(Tensor({1, 2, 4, 4}, 0.5), Tensor({2, 1, 3, 3}, 1.0), Tensor({2}));
  EXPECT_NEAR(y.at(0, 1, 1, 2), 4.5, 1e-12);
}

TEST(DepthwiseTest, GradientsMatchFiniteDifferences) {
  CheckConvGrads(1, true);
  CheckConvGrads(2, true);
}

TEST(PixelShuffleTest, Examples) {
  std::mt19937_64 rng(3);
  const Tensor x = RandomTensor({2, 8, 3, 2}, rng);
  EXPECT_EQ(PixelShuffle(x, 1), x);
  EXPECT_EQ(PixelUnshuffle(PixelShuffle(x, 2), 2), x);
  Tensor abcd({1, 4, 1, 1});
  for (int c = 0; c < 4; ++c) abcd.at(0, c, 0, 0) = c + 1.0;
  const Tensor s = PixelShuffle(abcd, 2);
  ASSERT_EQ(s.shape(), (std::vector<int>{1, 1, 2, 2}));
  EXPECT_EQ(s.at(0, 0, 0, 0), 1.0);
  EXPECT_EQ(s.at(0, 0, 0, 1), 2.0);
  EXPECT_EQ(s.at(0, 0, 1, 0), 3.0);
  EXPECT_EQ(s.at(0, 0, 1, 1), 4.0);
  EXPECT_THROW(PixelShuffle(Tensor({1, 6, 2, 2}), 2), Error);
}

TEST(PixelShuffleTest, IndexFormula) {
  std::mt19937_64 rng(4);
  const int r = 3;
  const Tensor x = RandomTensor({1, 2 * r * r, 2, 3}, rng);
  const Tensor s = PixelShuffle(x, r);
  for (int c = 0; c < 2; ++c)
    for (int y = 0; y < 2; ++y)
      for (int xx = 0; xx < 3; ++xx)
        for (int dy = 0; dy < r; ++dy)
          for (int dx = 0; dx < r; ++dx)
            EXPECT_EQ(s.at(0, c, y * r + dy, xx * r + dx),
                      x.at(0, c * r * r + dy * r + dx, y, xx));
}

TEST(SiluTest, GradientMatchesFiniteDifferences) {
  std::mt19937_64 rng(5);
  Tensor x = RandomTensor({1, 2, 3, 3}, rng, 3.0);
  const Tensor r = RandomTensor(x.shape(), rng);
  EXPECT_LT(GradCheck(&x, SiluBackward(x, r), [&] { return Dot(Silu(x), r); }), kTol);
}

TEST(ReflectPadTest, OddSizesAndGradient) {
  std::mt19937_64 rng(6);
  Tensor x = RandomTensor({1, 2, 5, 3}, rng);
  const Tensor p = ReflectPadToEven(x);
  EXPECT_EQ(p.shape(), (std::vector<int>{1, 2, 6, 4}));
  EXPECT_EQ(CropTopLeft(p, 5, 3), x);
  const Tensor r = RandomTensor(p.shape(), rng);
  EXPECT_LT(GradCheck(&x, ReflectPadToEvenBackward(r, 5, 3),
                      [&] { return Dot(ReflectPadToEven(x), r); }),
            kTol);
  const Tensor even = RandomTensor({1, 1, 4, 4}, rng);
  EXPECT_EQ(ReflectPadToEven(even), even);
}

std::vector<Tensor*> BlockParams(MbConvParams& p) {
  std::vector<Tensor*> v = {&p.expand.w, &p.expand.b, &p.depthwise.w, &p.depthwise.b};
  if (!p.unsqueezed) {
    v.push_back(&p.project.w);
    v.push_back(&p.project.b);
  }
  return v;
}

TEST(MbConvTest, ZeroWeightsGiveSkip) {
  std::mt19937_64 rng(7);
  const Tensor x = RandomTensor({1, 8, 6, 6}, rng);
  EXPECT_EQ(MbConvForward(x, MakeMbConv(8, false), nullptr), x);
  const Tensor u = MbConvForward(x, MakeMbConv(8, true), nullptr);
  EXPECT_EQ(u.shape(), (std::vector<int>{1, 32, 6, 6}));
}

void CheckMbConv(bool unsqueezed) {
  std::mt19937_64 rng(8 + unsqueezed);
  MbConvParams p = MakeMbConv(8, unsqueezed);
  for (Tensor* t : BlockParams(p)) *t = RandomTensor(t->shape(), rng, 0.3);
  Tensor x = RandomTensor({1, 8, 6, 6}, rng);
  MbConvCache cache;
  const Tensor y = MbConvForward(x, p, &cache);
  const Tensor r = RandomTensor(y.shape(), rng);
  MbConvParams g = MakeMbConv(8, unsqueezed);
  const Tensor dx = MbConvBackward(cache, p, r, &g);
  auto f = [&] { return Dot(MbConvForward(x, p, nullptr), r); };
  EXPECT_LT(GradCheck(&x, dx, f), kTol);
  const std::vector<Tensor*> params = BlockParams(p), grads = BlockParams(g);
  for (size_t i = 0; i < params.size(); ++i) {
    EXPECT_LT(GradCheck(params[i], *grads[i], f), kTol) << "param " << i;
  }
}

TEST(MbConvTest, GradientsMatchFiniteDifferences) {
  CheckMbConv(false);
  CheckMbConv(true);
}

TEST(FilterNetTest, ZeroNetIsIdentity) {
  std::mt19937_64 rng(9);
  const Tensor x = RandomTensor({1, 3, 10, 12}, rng);
  FilterNet net(2, 4);
  EXPECT_TRUE(net.IsIdentity());
  EXPECT_EQ(net.Forward(x), x);
  net.Initialize(3);
  EXPECT_FALSE(net.IsIdentity());
  net.ZeroBody();
  EXPECT_EQ(net.Forward(x), x);
}

TEST(FilterNetTest, OutputShapeMatchesInput) {
  std::mt19937_64 rng(10);
  for (int s : {64, 96}) {
    FilterNet net(2, 4);
    net.Initialize(s);
    const Tensor x = RandomTensor({1, 3, s, s}, rng);
    EXPECT_EQ(net.Forward(x).shape(), x.shape());
  }
  FilterNet net(1, 4);
  net.Initialize(1);
  EXPECT_EQ(net.Forward(RandomTensor({2, 3, 7, 9}, rng)).shape(),
            (std::vector<int>{2, 3, 7, 9}));
}

TEST(FilterNetTest, ParameterGradientsMatchFiniteDifferences) {
  std::mt19937_64 rng(11);
  FilterNet net(1, 4);
  net.Initialize(5);
  // Larger head so the residual branch is not negligible.
  for (Tensor* t : net.Parameters())
    for (double& v : t->values()) v += 0.05 * std::uniform_real_distribution<double>(-1, 1)(rng);
  Tensor x = RandomTensor({1, 3, 8, 8}, rng);
  const Tensor target = RandomTensor(x.shape(), rng);
  auto loss = [&] {
    const Tensor y = net.Forward(x);
    double s = 0.0;
    for (size_t i = 0; i < y.size(); ++i) s += (y[i] - target[i]) * (y[i] - target[i]);
    return s / static_cast<double>(y.size());
  };
  FilterNet::Cache cache;
  const Tensor y = net.Forward(x, &cache);
  Tensor dy = Tensor::Like(y);
  for (size_t i = 0; i < y.size(); ++i) dy[i] = 2.0 * (y[i] - target[i]) / y.size();
  std::vector<Tensor> grads = net.ZeroGrads();
  const Tensor dx = net.Backward(cache, dy, &grads);
  EXPECT_LT(GradCheck(&x, dx, loss), kTol);
  const std::vector<Tensor*> params = net.Parameters();
  const std::vector<std::string> names = net.ParameterNames();
  for (size_t i = 0; i < params.size(); ++i) {
    EXPECT_LT(GradCheck(params[i], grads[i], loss), kTol) << names[i];
  }
}

TEST(FilterNetTest, OddInputGradient) {
  std::mt19937_64 rng(12);
  FilterNet net(1, 4);
  net.Initialize(6);
  Tensor x = RandomTensor({1, 3, 5, 7}, rng);
  const Tensor r = RandomTensor(x.shape(), rng);
  FilterNet::Cache cache;
  net.Forward(x, &cache);
  std::vector<Tensor> grads = net.ZeroGrads();
  const Tensor dx = net.Backward(cache, r, &grads);
  EXPECT_LT(GradCheck(&x, dx, [&] { return Dot(net.Forward(x), r); }), kTol);
}

TEST(FilterNetTest, InitializationIsDeterministic) {
  FilterNet a(2, 8), b(2, 8), c(2, 8);
  a.Initialize(42);
  b.Initialize(42);
  c.Initialize(43);
  EXPECT_EQ(a, b);
  EXPECT_FALSE(a == c);
}

TEST(CountTest, HandCountedTinyNet) {
  // stem 3*1*9+1, expand 1*4+4, depthwise 4*9+4, head 4*12*9+12.
  const int64_t expected = 28 + 8 + 40 + 444;
  EXPECT_EQ(CountFilterParams(1, 1), expected);
  int64_t enumerated = 0;
  const FilterNet net(1, 1);
  for (const Tensor* t : net.Parameters()) enumerated += static_cast<int64_t>(t->size());
  EXPECT_EQ(enumerated, expected);
  EXPECT_EQ(net.CountParams(), expected);
}

TEST(CountTest, ClosedFormMatchesNetwork) {
  for (auto [l, c] : {std::pair{1, 4}, {2, 8}, {8, 32}, {5, 64}}) {
    const FilterNet net(l, c);
    EXPECT_EQ(net.CountParams(), CountFilterParams(l, c));
    EXPECT_EQ(net.CountMacsPerPixel(), CountFilterMacsPerPixel(l, c));
  }
}

TEST(CountTest, PairCountsNearReferenceFigures) {
  EXPECT_NEAR(2.0 * CountFilterParams(8, 32), 0.20e6, 0.15 * 0.20e6);
  const struct {
    int l, c;
    double macs;
  } rows[] = {{8, 32, 42e3}, {10, 32, 51e3}, {3, 64, 65e3}, {5, 64, 102e3}};
  for (const auto& r : rows) {
    EXPECT_NEAR(2.0 * CountFilterMacsPerPixel(r.l, r.c), r.macs, 0.15 * r.macs)
        << r.l << "x" << r.c;
  }
}

TEST(CountTest, Scaling) {
  const double ratio =
      static_cast<double>(CountFilterParams(8, 64)) / CountFilterParams(8, 32);
  EXPECT_GE(ratio, 3.0);
  EXPECT_LE(ratio, 4.5);
  // Each extra block adds the same MAC count at fixed width.
  const int64_t d1 = CountFilterMacsPerPixel(9, 32) - CountFilterMacsPerPixel(8, 32);
  const int64_t d2 = CountFilterMacsPerPixel(10, 32) - CountFilterMacsPerPixel(9, 32);
  EXPECT_EQ(d1, d2);
}

TEST(AdamTest, ZeroGradientLeavesParameters) {
  std::mt19937_64 rng(13);
  Tensor w = RandomTensor({5}, rng);
  const Tensor keep = w;
  std::vector<Tensor*> params = {&w};
  AdamState st = MakeAdamState(params);
  const std::vector<Tensor> g = {Tensor({5})};
  for (int i = 0; i < 3; ++i) AdamStep(params, g, &st);
  EXPECT_EQ(w, keep);
}

TEST(AdamTest, FirstStepMagnitudeIsLearningRate) {
  for (double g0 : {1e-3, -0.5, 20.0}) {
    Tensor w({1}, 1.0);
    std::vector<Tensor*> params = {&w};
    AdamState st = MakeAdamState(params, AdamHyper{});
    Tensor g({1}, g0);
    AdamStep(params, std::vector<Tensor>{g}, &st);
    EXPECT_NEAR(w[0] - 1.0, -1e-4 * (g0 > 0 ? 1 : -1), 1e-8);
  }
}

TEST(AdamTest, DescendsQuadratic) {
  Tensor w({1}, 1.0);
  std::vector<Tensor*> params = {&w};
  AdamState st = MakeAdamState(params, AdamHyper{.learning_rate = 1e-2});
  double prev = w[0] * w[0];
  for (int i = 0; i < 100; ++i) {
    AdamStep(params, std::vector<Tensor>{Tensor({1}, 2.0 * w[0])}, &st);
    const double f = w[0] * w[0];
    EXPECT_LT(f, prev);
    prev = f;
  }
}

TEST(CheckpointTest, RoundTripIsExact) {
  FilterNet cr(2, 8), rs(2, 8);
  cr.Initialize(1);
  rs.Initialize(2);
  const std::string dir = testing::TempDir("ckpt");
  const std::string path = dir + "/pair.snn";
  const FilterNet* nets[] = {&cr, &rs};
  SaveCheckpoint(path, nets);
  const std::vector<FilterNet> back = LoadCheckpoint(path);
  ASSERT_EQ(back.size(), 2u);
  EXPECT_EQ(back[0], cr);
  EXPECT_EQ(back[1], rs);
}

TEST(CheckpointTest, RejectsCorruptData) {
  FilterNet net(1, 4);
  net.Initialize(1);
  const FilterNet* nets[] = {&net};
  std::vector<uint8_t> bytes = SerializeNets(nets);
  std::vector<uint8_t> bad = bytes;
  bad[0] = 'X';
  EXPECT_THROW(DeserializeNets(bad), Error);
  bytes.resize(bytes.size() - 3);
  EXPECT_THROW(DeserializeNets(bytes), Error);
  EXPECT_THROW(LoadCheckpoint("/nonexistent/dir/x.snn"), Error);
}

}  // namespace
}  // namespace ssc
