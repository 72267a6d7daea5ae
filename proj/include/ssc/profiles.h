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

#ifndef SSC_PROFILES_H_
#define SSC_PROFILES_H_

#include <array>
#include <span>
#include <vector>

namespace ssc {

inline constexpr int kMinQuality = 1;
inline constexpr int kMaxQuality = 8;

// Rate-distortion weights of the usual MSE-optimised learned codecs, indexed
// by quality - 1. Loss = bpp + lambda * MSE(0..255 scale).
inline constexpr std::array<double, 8> kDefaultLambdas = {
    0.0018, 0.0035, 0.0067, 0.0130, 0.0250, 0.0483, 0.0932, 0.1800};

struct CodecProfile {
  int quality = 3;
  double quant_step = 1.0;
  double lambda = 0.0067;
};

// 2^(6 - q) * 0.25: halves with every quality step.
double DefaultQuantStep(int quality);

// Throws kInvalidArgument for quality outside 1..8 or a non-increasing
// lambda table.
CodecProfile MakeProfile(int quality,
                         std::span<const double> lambdas = kDefaultLambdas);
std::vector<CodecProfile> ProfileTable(
    std::span<const int> qualities,
    std::span<const double> lambdas = kDefaultLambdas);

}  // namespace ssc

#endif  // SSC_PROFILES_H_
