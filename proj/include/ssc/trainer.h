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

// End-to-end training of the CR/RS pair around the frozen proxy codec, one
// pair per quality point.

#ifndef SSC_TRAINER_H_
#define SSC_TRAINER_H_

#include <cstdint>
#include <string>
#include <vector>

#include "ssc/adam.h"
#include "ssc/bd_rate.h"
#include "ssc/datagen.h"
#include "ssc/filter_net.h"
#include "ssc/profiles.h"
#include "ssc/sandwich.h"

namespace ssc {

struct TrainConfig {
  int epochs = 5;
  int batch_size = 4;
  int depth = 8;
  int width = 32;
  SandwichConfig pipeline;  // use_cr / use_rs select the trained modules
  std::vector<int> qualities = {2, 3, 4, 5};
  std::vector<double> lambdas{kDefaultLambdas.begin(), kDefaultLambdas.end()};
  AdamHyper adam;
  uint64_t seed = 1;
  // Checkpoints go here when non-empty.
  std::string out_dir;

  void Validate() const;
};

struct StepRecord {
  int64_t step = 0;
  double loss = 0.0;
  double bpp = 0.0;
  double mse = 0.0;
};

struct EpochRecord {
  int epoch = 0;
  double val_loss = 0.0;  // RD loss at the fixed validation noise seed
  double val_bpp = 0.0;
  double val_psnr = 0.0;
  double seconds = 0.0;
  std::string checkpoint;  // empty when no out_dir
};

struct TrainLog {
  int quality = 0;
  std::vector<StepRecord> steps;
  std::vector<EpochRecord> epochs;
  // Whole training set, fixed noise seed, before and after training.
  double initial_train_loss = 0.0;
  double final_train_loss = 0.0;
};

struct TrainedPair {
  FilterNet cr;
  FilterNet rs;
  TrainLog log;
};

// Noise seed used for every loss that is compared across runs.
inline constexpr uint64_t kEvalNoiseSeed = 0x5eed;

// Mean RD loss over |data| in batches at a fixed noise seed.
double DatasetLoss(const Dataset& data, const TrainConfig& cfg,
                   const FilterNet* cr, const FilterNet* rs,
                   const CodecProfile& profile);

// Trains one pair per cfg.qualities entry. Throws kDivergence with the step
// index when the loss stops being finite.
std::vector<TrainedPair> Train(const TrainConfig& cfg, const Dataset& train,
                               const Dataset* val = nullptr);

// Mean bpp (header bits included) and mean PSNR over |data| through the
// evaluation codec. |jobs| images are coded concurrently.
RdPoint EvaluateCheckpoint(const Dataset& data, const SandwichConfig& cfg,
                           const FilterNet* cr, const FilterNet* rs,
                           const CodecProfile& profile, int jobs = 1);

std::string CheckpointName(int quality, int depth, int width, int epoch);

// step, loss, bpp, mse
void WriteTrainLogCsv(const TrainLog& log, const std::string& path);

}  // namespace ssc

#endif  // SSC_TRAINER_H_
