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

// Synthetic screen content and dataset loading.

#ifndef SSC_DATAGEN_H_
#define SSC_DATAGEN_H_

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "ssc/image.h"

namespace ssc {

enum ScElement { kGlyphRows = 0, kFlatRects, kGradients, kGridLines, kNoisePatch };
inline constexpr int kNumScElements = 5;

struct ScSpec {
  uint64_t seed = 1;
  int size = 64;
  int palette_size = 8;  // 2..32
  // Relative frequency of each element kind, indexed by ScElement.
  std::array<double, kNumScElements> mix = {3.0, 3.0, 1.0, 1.0, 0.5};

  void Validate() const;
};

// Deterministic in |spec|. Outside the noise patch only palette colours
// appear.
ImageRGB GenScreenImage(const ScSpec& spec);

enum class Split { kTrain, kVal };

struct Dataset {
  std::vector<ImageRGB> items;
  std::vector<std::string> names;
  Split split = Split::kTrain;

  size_t size() const { return items.size(); }
};

// PNG/PPM files of |dir| in lexicographic order, center-cropped to |crop|.
// Images smaller than |crop| are skipped with a warning on stderr. Throws
// kEmpty when nothing is left.
Dataset LoadDirectory(const std::string& dir, int crop, Split split = Split::kTrain);

// |count| generated images; image i uses seed base.seed + i.
Dataset GenerateDataset(const ScSpec& base, int count, int crop,
                        Split split = Split::kTrain);

}  // namespace ssc

#endif  // SSC_DATAGEN_H_
