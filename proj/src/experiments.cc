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

#include "ssc/experiments.h"

#include <filesystem>
#include <iostream>
#include <regex>

#include "ssc/parallel.h"
#include "ssc/status.h"
#include "ssc/trainer.h"

namespace ssc {

std::vector<DeltaBppRow> DeltaBpp(const Dataset& data, const TransformSpec& spec,
                                  const std::vector<CodecProfile>& profiles,
                                  const std::string& external_codec, int jobs) {
  if (data.items.empty()) Fail(ErrorCode::kEmpty, "empty dataset");
  spec.Validate();
  SandwichConfig cfg;
  cfg.external_codec = external_codec;
  std::vector<ImageRGB> transformed(data.size());
  ParallelFor(data.size(), jobs, [&](size_t i) {
    transformed[i] = ApplyForward(spec, data.items[i]).image;
  });
  std::vector<DeltaBppRow> rows;
  for (const CodecProfile& p : profiles) {
    std::vector<double> delta(data.size());
    ParallelFor(data.size(), jobs, [&](size_t i) {
      delta[i] = RunCodec(transformed[i], cfg, p).bpp - RunCodec(data.items[i], cfg, p).bpp;
    });
    DeltaBppRow row{p.quality, 0.0, data.size()};
    for (double d : delta) row.mean_delta_bpp += d;
    row.mean_delta_bpp /= static_cast<double>(data.size());
    rows.push_back(row);
  }
  return rows;
}

CsvTable DeltaBppTable(const std::vector<DeltaBppRow>& rows) {
  CsvTable t{{"profile", "quality", "mean_delta_bpp", "n"}, {}};
  for (const DeltaBppRow& r : rows) {
    t.AddRow({"q" + std::to_string(r.quality), std::to_string(r.quality),
              FormatDouble(r.mean_delta_bpp), std::to_string(r.n)});
  }
  return t;
}

RdCurve PipelineCurve(const Dataset& data, const SandwichConfig& cfg,
                      const std::vector<const FilterNet*>& cr,
                      const std::vector<const FilterNet*>& rs,
                      const std::vector<CodecProfile>& profiles, int jobs) {
  RdCurve c;
  for (size_t i = 0; i < profiles.size(); ++i) {
    const FilterNet* n_cr = i < cr.size() ? cr[i] : nullptr;
    const FilterNet* n_rs = i < rs.size() ? rs[i] : nullptr;
    c.points.push_back(EvaluateCheckpoint(data, cfg, n_cr, n_rs, profiles[i], jobs));
  }
  return c;
}

std::vector<RdCurve> DesatSweep(const Dataset& data, const std::vector<double>& alphas,
                                const std::vector<CodecProfile>& profiles,
                                const std::string& external_codec, int jobs) {
  std::vector<RdCurve> out;
  for (double a : alphas) {
    SandwichConfig cfg;
    cfg.transform = TransformSpec::Desaturate(a);
    cfg.external_codec = external_codec;
    RdCurve c = PipelineCurve(data, cfg, {}, {}, profiles, jobs);
    c.name = "alpha=" + FormatDouble(a);
    out.push_back(std::move(c));
  }
  return out;
}

std::string FindCheckpoint(const std::string& dir, int quality, int depth, int width) {
  namespace fs = std::filesystem;
  std::error_code ec;
  if (dir.empty() || !fs::is_directory(dir, ec)) return "";
  const std::regex re(std::to_string(quality) + "_" + std::to_string(depth) + "x" +
                      std::to_string(width) + "_([0-9]+)\\.snn");
  std::string best;
  long best_epoch = -1;
  for (const auto& e : fs::directory_iterator(dir)) {
    std::smatch m;
    const std::string name = e.path().filename().string();
    if (std::regex_match(name, m, re)) {
      const long epoch = std::stol(m[1]);
      if (epoch > best_epoch) {
        best_epoch = epoch;
        best = e.path().string();
      }
    }
  }
  return best;
}

std::vector<AblationRow> AblationRun(const Dataset& data,
                                     const std::vector<AblationSpec>& specs,
                                     const std::vector<CodecProfile>& profiles,
                                     int jobs) {
  const RdCurve baseline = PipelineCurve(data, SandwichConfig{}, {}, {}, profiles, jobs);
  std::vector<AblationRow> rows;
  for (const AblationSpec& s : specs) {
    AblationRow row{s, 0, std::nullopt, ""};
    const int64_t per_net = s.use_cr || s.use_rs ? CountFilterMacsPerPixel(s.depth, s.width) : 0;
    row.delta_macs_per_pixel = (s.use_cr ? per_net : 0) + (s.use_rs ? per_net : 0);
    SandwichConfig cfg;
    if (s.alpha != 1.0) cfg.transform = TransformSpec::Desaturate(s.alpha);
    cfg.use_cr = s.use_cr;
    cfg.use_rs = s.use_rs;
    try {
      std::vector<FilterNet> nets;  // two per profile
      if (s.use_cr || s.use_rs) {
        for (const CodecProfile& p : profiles) {
          const std::string path = FindCheckpoint(s.checkpoint_dir, p.quality, s.depth, s.width);
          if (path.empty()) {
            Fail(ErrorCode::kIo, "no checkpoint for quality " + std::to_string(p.quality));
          }
          std::vector<FilterNet> loaded = LoadCheckpoint(path);
          if (loaded.size() != 2) Fail(ErrorCode::kFormat, path + ": expected CR and RS");
          for (auto& n : loaded) nets.push_back(std::move(n));
        }
      }
      std::vector<const FilterNet*> cr, rs;
      for (size_t i = 0; i < profiles.size() && !nets.empty(); ++i) {
        cr.push_back(s.use_cr ? &nets[2 * i] : nullptr);
        rs.push_back(s.use_rs ? &nets[2 * i + 1] : nullptr);
      }
      const RdCurve curve = PipelineCurve(data, cfg, cr, rs, profiles, jobs);
      row.bd_rate_pct = cfg.IsBaseline() ? 0.0 : BdRate(baseline, curve);
    } catch (const Error& e) {
      row.note = e.what();
      std::cerr << "warning: ablation row '" << s.name << "' absent: " << e.what() << "\n";
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

CsvTable AblationTable(const std::vector<AblationRow>& rows) {
  CsvTable t{{"name", "alpha", "cr", "rs", "L", "C", "delta_mac_px", "bd_rate_pct"}, {}};
  for (const AblationRow& r : rows) {
    const AblationSpec& s = r.spec;
    t.AddRow({s.name, s.alpha == 1.0 ? "off" : FormatDouble(s.alpha), s.use_cr ? "1" : "0",
              s.use_rs ? "1" : "0", s.use_cr || s.use_rs ? std::to_string(s.depth) : "",
              s.use_cr || s.use_rs ? std::to_string(s.width) : "",
              std::to_string(r.delta_macs_per_pixel),
              r.bd_rate_pct ? FormatDouble(*r.bd_rate_pct) : "absent"});
  }
  return t;
}

}  // namespace ssc
