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

// Flat key=value configuration. '#' starts a comment; lists are
// comma-separated. Unknown keys are rejected.

#ifndef SSC_CONFIG_H_
#define SSC_CONFIG_H_

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "ssc/datagen.h"
#include "ssc/trainer.h"

namespace ssc {

inline constexpr char kSscVersion[] = "0.1.0";

struct GlobalConfig {
  // Dataset: a directory when data_dir is set, else the generator.
  std::string data_dir;
  std::string val_dir;
  int gen_count = 64;
  int val_count = 16;
  int gen_size = 64;
  int gen_palette = 8;
  int crop = 64;

  std::vector<int> qualities = {2, 3, 4, 5};
  std::vector<double> lambdas{kDefaultLambdas.begin(), kDefaultLambdas.end()};

  TransformSpec transform = TransformSpec::Desaturate(0.8);
  bool use_cr = true;
  bool use_rs = true;
  ModuleOrder order = ModuleOrder::kTransformThenCr;
  std::string external_codec;

  int depth = 8;
  int width = 32;
  int epochs = 5;
  int batch_size = 4;
  AdamHyper adam;

  uint64_t seed = 1;
  std::string out_dir = "out";
  int jobs = 1;

  // Throws kInvalidArgument for unknown keys or bad values.
  void Set(const std::string& key, const std::string& value);
  void Validate() const;
  // Canonical key=value listing (sorted), used for the manifest hash.
  std::map<std::string, std::string> Values() const;

  ScSpec GeneratorSpec() const;
  SandwichConfig Pipeline() const;
  TrainConfig Training() const;
  std::vector<CodecProfile> Profiles() const;
};

void ParseConfigText(const std::string& text, GlobalConfig* cfg);
void LoadConfigFile(const std::string& path, GlobalConfig* cfg);

// Training set and validation set as configured. The generated validation
// set uses seeds after the training seeds.
Dataset LoadTrainSet(const GlobalConfig& cfg);
Dataset LoadValSet(const GlobalConfig& cfg);

}  // namespace ssc

#endif  // SSC_CONFIG_H_
