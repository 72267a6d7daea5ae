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

#include <algorithm>
#include <chrono>
#include <cmath>
#include <random>

#include "ssc/datagen.h"
#include "ssc/external_codec.h"
#include "ssc/lintrans.h"
#include "ssc/profiles.h"
#include "ssc/proxy_codec.h"
#include "ssc/status.h"
#include "test_util.h"

namespace ssc {
namespace {

std::vector<ImageRGB> Corpus(int n = 6, int size = 32) {
  std::vector<ImageRGB> out;
  for (int i = 0; i < n; ++i) {
    ScSpec s;
    s.seed = 100 + i;
    s.size = size;
    out.push_back(GenScreenImage(s));
  }
  return out;
}

TEST(ProfileTest, TableValues) {
  EXPECT_DOUBLE_EQ(MakeProfile(2).lambda, 0.0035);
  for (int q = 1; q < 8; ++q) {
    EXPECT_DOUBLE_EQ(DefaultQuantStep(q) / DefaultQuantStep(q + 1), 2.0);
  }
  const std::vector<int> qs = {2, 3, 4, 5};
  const auto table = ProfileTable(qs);
  ASSERT_EQ(table.size(), 4u);
  for (size_t i = 1; i < table.size(); ++i) {
    EXPECT_GT(table[i].lambda, table[i - 1].lambda);
    EXPECT_LT(table[i].quant_step, table[i - 1].quant_step);
  }
  EXPECT_THROW(MakeProfile(0), Error);
  EXPECT_THROW(MakeProfile(9), Error);
  const std::vector<double> flat(8, 0.01);
  EXPECT_THROW(MakeProfile(3, flat), Error);
}

TEST(ProxyCodecTest, DctIsOrthonormal) {
  const ProxyCodec codec;
  const auto& d = codec.dct_matrix();
  for (int i = 0; i < kBlock; ++i)
    for (int j = 0; j < kBlock; ++j) {
      double s = 0.0;
      for (int k = 0; k < kBlock; ++k) s += d[i * kBlock + k] * d[j * kBlock + k];
      EXPECT_NEAR(s, i == j ? 1.0 : 0.0, 1e-14);
    }
}

// Constant image: each block holds one DC coefficient 8 * v per channel of
// the BT.601 full-range YCbCr transform, rounded to the step.
ImageRGB ConstantOracle(const Vec3& rgb, int h, int w, const CodecProfile& p) {
  const Mat3 m = {{{0.299, 0.587, 0.114},
                   {-0.168736, -0.331264, 0.5},
                   {0.5, -0.418688, -0.081312}}};
  const double step = p.quant_step * kFlatQuantWeight;
  Vec3 ycc = Multiply(m, Vec3{255 * rgb[0], 255 * rgb[1], 255 * rgb[2]});
  for (double& v : ycc) v = std::round(8.0 * v / step) * step / 8.0;
  const Vec3 back = Multiply(Pinv3(m), ycc);
  ImageRGB out(h, w);
  for (int c = 0; c < 3; ++c)
    for (double& v : out.plane(c)) v = std::clamp(back[c] / 255.0, 0.0, 1.0);
  return out;
}

TEST(ProxyCodecTest, ConstantImageMatchesDcOracle) {
  for (const Vec3& rgb : {Vec3{0.41, 0.41, 0.41}, Vec3{0.1, 0.5, 0.9}, Vec3{0.77, 0.2, 0.3}}) {
    ImageRGB img(16, 24);
    for (int c = 0; c < 3; ++c)
      for (double& v : img.plane(c)) v = rgb[c];
    for (int q = 1; q <= 8; ++q) {
      const CodecProfile p = MakeProfile(q);
      const CodecResult r = ProxyCode(img, p, CodecMode::kEval);
      const ImageRGB oracle = ConstantOracle(rgb, 16, 24, p);
      for (size_t i = 0; i < img.num_samples(); ++i) {
        EXPECT_NEAR(r.reconstruction.samples()[i], oracle.samples()[i], 1e-9);
        // Half a DC step spread over 8x8 pixels, through the inverse colour matrix.
        EXPECT_LE(255.0 * std::abs(r.reconstruction.samples()[i] - img.samples()[i]),
                  2.773 * p.quant_step * kFlatQuantWeight / 16.0);
      }
      // The bound above guarantees 40 dB once the step is fine enough.
      if (q >= 5) {
        EXPECT_GT(Psnr(img, r.reconstruction), 40.0) << q;
      }
      EXPECT_EQ(r.bits, 0.0);  // every band carries a single symbol
    }
  }
}

TEST(ProxyCodecTest, BitsPositiveOnTexture) {
  std::mt19937_64 rng(1);
  const ImageRGB img = testing::RandomImage(16, 16, rng);
  const CodecResult r = ProxyCode(img, MakeProfile(4), CodecMode::kEval);
  EXPECT_GT(r.bits, 0.0);
  EXPECT_DOUBLE_EQ(r.bpp, r.bits / 256.0);
  EXPECT_TRUE(std::isfinite(r.bpp));
}

TEST(ProxyCodecTest, OddDimensionsKeepShape) {
  std::mt19937_64 rng(2);
  const ImageRGB img = testing::RandomImage(13, 21, rng);
  const CodecResult r = ProxyCode(img, MakeProfile(3), CodecMode::kEval);
  EXPECT_TRUE(r.reconstruction.SameDims(img));
  for (double v : r.reconstruction.samples()) {
    EXPECT_GE(v, 0.0);
    EXPECT_LE(v, 1.0);
  }
}

TEST(ProxyCodecTest, RejectsNonPositiveStep) {
  CodecProfile p = MakeProfile(3);
  p.quant_step = 0.0;
  EXPECT_THROW(ProxyCode(ImageRGB(8, 8), p, CodecMode::kEval), Error);
}

TEST(ProxyCodecTest, RateAndQualityMonotoneInQuality) {
  const auto corpus = Corpus();
  for (int q = 1; q < 8; ++q) {
    double bpp_lo = 0, bpp_hi = 0, psnr_lo = 0, psnr_hi = 0;
    for (const ImageRGB& img : corpus) {
      const CodecResult a = ProxyCode(img, MakeProfile(q), CodecMode::kEval);
      const CodecResult b = ProxyCode(img, MakeProfile(q + 1), CodecMode::kEval);
      EXPECT_LE(a.bpp, b.bpp);
      bpp_lo += a.bpp;
      bpp_hi += b.bpp;
      psnr_lo += Psnr(img, a.reconstruction);
      psnr_hi += Psnr(img, b.reconstruction);
    }
    EXPECT_LE(bpp_lo, bpp_hi);
    EXPECT_LE(psnr_lo, psnr_hi) << q;
  }
}

TEST(ProxyCodecTest, RecodingIsNearlyIdempotent) {
  for (const ImageRGB& img : Corpus()) {
    for (int q : {2, 4, 6}) {
      const CodecProfile p = MakeProfile(q);
      const ImageRGB once = ProxyCode(img, p, CodecMode::kEval).reconstruction;
      const ImageRGB twice = ProxyCode(once, p, CodecMode::kEval).reconstruction;
      EXPECT_GE(Psnr(img, twice), Psnr(img, once) - 0.5);
    }
  }
}

TEST(ProxyCodecTest, TrainModeMatchesEvalReconstruction) {
  std::mt19937_64 rng(3);
  const ImageRGB img = testing::RandomImage(16, 16, rng, 0.2, 0.8);
  const CodecProfile p = MakeProfile(4);
  const CodecResult e = ProxyCode(img, p, CodecMode::kEval);
  const CodecResult t = ProxyCode(img, p, CodecMode::kTrain, 7);
  for (size_t i = 0; i < img.num_samples(); ++i) {
    EXPECT_NEAR(e.reconstruction.samples()[i], t.reconstruction.samples()[i], 1e-12);
  }
  EXPECT_GT(t.bits, 0.0);
  // Same seed, same estimate.
  EXPECT_EQ(ProxyCode(img, p, CodecMode::kTrain, 7).bits, t.bits);
}

TEST(ProxyCodecTest, RateGradientMatchesFiniteDifferences) {
  std::mt19937_64 rng(4);
  const ProxyCodec codec;
  const CodecProfile p = MakeProfile(4);
  Tensor x = ImageToTensor(testing::RandomImage(16, 16, rng, 0.1, 0.9));
  ProxyCodec::TrainCache cache;
  codec.TrainForward(x, p, 11, &cache);
  const Tensor analytic = codec.TrainBackward(cache, Tensor::Like(x), 1.0);
  auto rate = [&] { return codec.TrainForward(x, p, 11, nullptr).rate_bits; };
  EXPECT_LT(testing::GradCheck(&x, analytic, rate, 1e-5, 1e-2), 5e-2);
}

TEST(ProxyCodecTest, DistortionGradientIsStraightThrough) {
  // With frozen rounding offsets the reconstruction is linear in the input,
  // and that linear map is what the backward pass applies.
  std::mt19937_64 rng(5);
  const ProxyCodec codec;
  const CodecProfile p = MakeProfile(3);
  Tensor x = ImageToTensor(testing::RandomImage(16, 16, rng, 0.3, 0.7));
  ProxyCodec::TrainCache cache;
  codec.TrainForward(x, p, 1, &cache);
  const std::vector<double> offsets = cache.round_offsets;
  const Tensor r = testing::RandomTensor(x.shape(), rng);
  const Tensor analytic = codec.TrainBackward(cache, r, 0.0);
  auto f = [&] {
    return testing::Dot(codec.TrainForward(x, p, 1, nullptr, &offsets).reconstruction, r);
  };
  EXPECT_LT(testing::GradCheck(&x, analytic, f), 1e-3);
}

TEST(ProxyCodecTest, ChecksumIsStable) {
  const ProxyCodec a, b;
  EXPECT_EQ(a.StateChecksum(), b.StateChecksum());
  std::mt19937_64 rng(6);
  ProxyCodec::TrainCache cache;
  a.TrainForward(ImageToTensor(testing::RandomImage(8, 8, rng)), MakeProfile(2), 1, &cache);
  EXPECT_EQ(a.StateChecksum(), b.StateChecksum());
}

TEST(ReflectPadToTest, AdjointIdentity) {
  std::mt19937_64 rng(7);
  const Tensor x = testing::RandomTensor({1, 3, 5, 11}, rng);
  const Tensor p = ReflectPadTo(x, 8, 16);
  EXPECT_EQ(p.shape(), (std::vector<int>{1, 3, 8, 16}));
  const Tensor r = testing::RandomTensor(p.shape(), rng);
  EXPECT_NEAR(testing::Dot(p, r), testing::Dot(x, ReflectPadToBackward(r, 5, 11)), 1e-12);
}

std::string Fake(const std::string& mode) { return std::string(SSC_FAKE_CODEC) + " " + mode; }

ImageRGB ByteImage(int h, int w, uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> b(0, 255);
  ImageRGB img(h, w);
  for (double& v : img.samples()) v = b(rng) / 255.0;
  return img;
}

TEST(ExternalCodecTest, SplitCommand) {
  EXPECT_EQ(SplitCommand("  a  b\tc "), (std::vector<std::string>{"a", "b", "c"}));
  EXPECT_TRUE(SplitCommand("   ").empty());
}

TEST(ExternalCodecTest, IdentityAdapter) {
  const ImageRGB img = ByteImage(6, 10, 1);
  const CodecResult r = ExternalCode(img, Fake("identity"), 3);
  EXPECT_EQ(r.reconstruction, img);
  EXPECT_DOUBLE_EQ(r.bpp, 24.0);
}

TEST(ExternalCodecTest, LosslessAdapter) {
  const ImageRGB img = ByteImage(8, 8, 2);
  const CodecResult r = ExternalCode(img, Fake("lossless"), 5);
  EXPECT_EQ(Psnr(img, r.reconstruction), kInfinitePsnr);
  EXPECT_GT(r.bpp, 0.0);
}

void ExpectProtocolError(const std::string& mode, const std::string& needle,
                         ExternalCodecOptions opts = {}) {
  try {
    ExternalCode(ByteImage(8, 8, 3), Fake(mode), 2, opts);
    ADD_FAILURE() << mode << " did not fail";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kProtocol) << mode;
    if (!needle.empty()) {
      EXPECT_NE(std::string(e.what()).find(needle), std::string::npos) << e.what();
    }
  }
}

TEST(ExternalCodecTest, FailuresAreReported) {
  ExpectProtocolError("corrupt", "");
  ExpectProtocolError("fail", "fake codec failure");
  ExpectProtocolError("resize", "");
}

TEST(ExternalCodecTest, MissingExecutable) {
  try {
    ExternalCode(ByteImage(4, 4, 4), "/nonexistent/codec", 2);
    ADD_FAILURE();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kProtocol);
  }
}

TEST(ExternalCodecTest, Timeout) {
  ExternalCodecOptions opts;
  opts.timeout_seconds = 0.5;
  const auto t0 = std::chrono::steady_clock::now();
  ExpectProtocolError("sleep", "", opts);
  const double s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  EXPECT_LT(s, 10.0);
}

}  // namespace
}  // namespace ssc
