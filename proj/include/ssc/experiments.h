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

// Measurement suite: compressibility, desaturation sweep, RD curves and the
// module ablation.

#ifndef SSC_EXPERIMENTS_H_
#define SSC_EXPERIMENTS_H_

#include <optional>
#include <string>
#include <vector>

#include "ssc/bd_rate.h"
#include "ssc/csv.h"
#include "ssc/datagen.h"
#include "ssc/profiles.h"
#include "ssc/sandwich.h"

namespace ssc {

struct DeltaBppRow {
  int quality = 0;
  double mean_delta_bpp = 0.0;
  size_t n = 0;
};

// Mean over images of bpp(codec(T(x))) - bpp(codec(x)) per profile. Only
// codec bits are compared; no decoding quality is involved.
std::vector<DeltaBppRow> DeltaBpp(const Dataset& data, const TransformSpec& spec,
                                  const std::vector<CodecProfile>& profiles,
                                  const std::string& external_codec = "", int jobs = 1);
// profile, quality, mean_delta_bpp, n
CsvTable DeltaBppTable(const std::vector<DeltaBppRow>& rows);

// RD curve of one pipeline configuration over |profiles|.
RdCurve PipelineCurve(const Dataset& data, const SandwichConfig& cfg,
                      const std::vector<const FilterNet*>& cr,
                      const std::vector<const FilterNet*>& rs,
                      const std::vector<CodecProfile>& profiles, int jobs = 1);

// One curve per alpha, modules CR and RS off.
std::vector<RdCurve> DesatSweep(const Dataset& data, const std::vector<double>& alphas,
                                const std::vector<CodecProfile>& profiles,
                                const std::string& external_codec = "", int jobs = 1);

struct AblationSpec {
  std::string name;
  double alpha = 1.0;  // 1 means desaturation off
  bool use_cr = false;
  bool use_rs = false;
  int depth = 0;
  int width = 0;
  // Holds {quality}_{L}x{C}_{epoch}.snn; the highest epoch is used.
  std::string checkpoint_dir;
};

struct AblationRow {
  AblationSpec spec;
  int64_t delta_macs_per_pixel = 0;
  std::optional<double> bd_rate_pct;  // empty when a checkpoint is missing
  std::string note;
};

// Path of the newest checkpoint for (quality, L, C) in |dir|, or empty.
std::string FindCheckpoint(const std::string& dir, int quality, int depth, int width);

std::vector<AblationRow> AblationRun(const Dataset& data,
                                     const std::vector<AblationSpec>& specs,
                                     const std::vector<CodecProfile>& profiles,
                                     int jobs = 1);
// name, alpha, cr, rs, L, C, delta_mac_px, bd_rate_pct
CsvTable AblationTable(const std::vector<AblationRow>& rows);

}  // namespace ssc

#endif  // SSC_EXPERIMENTS_H_
