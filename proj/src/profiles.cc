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

#include "ssc/profiles.h"

#include <cmath>
#include <string>

#include "ssc/status.h"

namespace ssc {

double DefaultQuantStep(int quality) {
  return std::ldexp(0.25, 6 - quality);
}

CodecProfile MakeProfile(int quality, std::span<const double> lambdas) {
  if (quality < kMinQuality || quality > kMaxQuality) {
    Fail(ErrorCode::kInvalidArgument,
         "quality must be in 1..8, got " + std::to_string(quality));
  }
  if (lambdas.size() != static_cast<size_t>(kMaxQuality)) {
    Fail(ErrorCode::kInvalidArgument, "lambda table needs 8 entries");
  }
  for (size_t i = 0; i < lambdas.size(); ++i) {
    if (!(lambdas[i] > 0.0) || (i > 0 && !(lambdas[i] > lambdas[i - 1]))) {
      Fail(ErrorCode::kInvalidArgument,
           "lambda table must be positive and strictly increasing");
    }
  }
  return {quality, DefaultQuantStep(quality),
          lambdas[static_cast<size_t>(quality - 1)]};
}

std::vector<CodecProfile> ProfileTable(std::span<const int> qualities,
                                       std::span<const double> lambdas) {
  std::vector<CodecProfile> out;
  for (int q : qualities) out.push_back(MakeProfile(q, lambdas));
  return out;
}

}  // namespace ssc
