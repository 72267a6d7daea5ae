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

#include "ssc/trainer.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <numeric>
#include <random>

#include "ssc/csv.h"
#include "ssc/parallel.h"
#include "ssc/status.h"

namespace ssc {
namespace {

Tensor GatherBatch(const Dataset& data, std::span<const size_t> idx) {
  std::vector<ImageRGB> imgs;
  imgs.reserve(idx.size());
  for (size_t i : idx) imgs.push_back(data.items[i]);
  return ImagesToTensor(imgs);
}

// SplitMix64 finaliser; decorrelates per-step noise seeds.
uint64_t Mix(uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

void CheckFinite(double loss, int64_t step) {
  if (!std::isfinite(loss)) {
    Fail(ErrorCode::kDivergence,
         "training diverged: non-finite loss at step " + std::to_string(step));
  }
}

}  // namespace

void TrainConfig::Validate() const {
  if (epochs < 0) Fail(ErrorCode::kInvalidArgument, "epochs must be >= 0");
  if (batch_size < 1) Fail(ErrorCode::kInvalidArgument, "batch size must be >= 1");
  if (depth < 1 || width < 1) Fail(ErrorCode::kInvalidArgument, "L and C must be >= 1");
  if (qualities.empty()) Fail(ErrorCode::kInvalidArgument, "no quality points");
  if (!pipeline.external_codec.empty()) {
    Fail(ErrorCode::kUnsupported, "training requires the proxy codec");
  }
  if (!(adam.learning_rate >= 0.0)) {
    Fail(ErrorCode::kInvalidArgument, "learning rate must be >= 0");
  }
  pipeline.transform.Validate();
  for (int q : qualities) MakeProfile(q, lambdas);
}

std::string CheckpointName(int quality, int depth, int width, int epoch) {
  return std::to_string(quality) + "_" + std::to_string(depth) + "x" +
         std::to_string(width) + "_" + std::to_string(epoch) + ".snn";
}

double DatasetLoss(const Dataset& data, const TrainConfig& cfg, const FilterNet* cr,
                   const FilterNet* rs, const CodecProfile& profile) {
  if (data.items.empty()) Fail(ErrorCode::kEmpty, "empty dataset");
  const ProxyCodec codec;
  std::vector<size_t> idx(data.size());
  std::iota(idx.begin(), idx.end(), 0);
  double total = 0.0;
  const size_t bs = static_cast<size_t>(cfg.batch_size);
  for (size_t s = 0; s < idx.size(); s += bs) {
    const size_t e = std::min(idx.size(), s + bs);
    const Tensor batch = GatherBatch(data, std::span<const size_t>(idx).subspan(s, e - s));
    const TrainPassResult r = E2eTrainPass(batch, cfg.pipeline, cr, rs, codec, profile,
                                           Mix(kEvalNoiseSeed + s), nullptr);
    total += r.loss * static_cast<double>(e - s);
  }
  return total / static_cast<double>(idx.size());
}

std::vector<TrainedPair> Train(const TrainConfig& cfg, const Dataset& train,
                               const Dataset* val) {
  cfg.Validate();
  if (train.items.empty()) Fail(ErrorCode::kEmpty, "empty training set");
  const ProxyCodec codec;
  const uint64_t codec_checksum = codec.StateChecksum();
  const bool use_cr = cfg.pipeline.use_cr, use_rs = cfg.pipeline.use_rs;

  std::vector<TrainedPair> out;
  for (int quality : cfg.qualities) {
    const CodecProfile profile = MakeProfile(quality, cfg.lambdas);
    TrainedPair pair{FilterNet(cfg.depth, cfg.width), FilterNet(cfg.depth, cfg.width), {}};
    pair.log.quality = quality;
    pair.cr.Initialize(Mix(cfg.seed * 2 + 0));
    pair.rs.Initialize(Mix(cfg.seed * 2 + 1));
    const FilterNet* cr = use_cr ? &pair.cr : nullptr;
    const FilterNet* rs = use_rs ? &pair.rs : nullptr;

    std::vector<Tensor*> params;
    if (use_cr) for (Tensor* t : pair.cr.Parameters()) params.push_back(t);
    if (use_rs) for (Tensor* t : pair.rs.Parameters()) params.push_back(t);
    AdamState adam = MakeAdamState(params, cfg.adam);

    pair.log.initial_train_loss = DatasetLoss(train, cfg, cr, rs, profile);
    CheckFinite(pair.log.initial_train_loss, 0);

    std::mt19937_64 rng(Mix(cfg.seed ^ (static_cast<uint64_t>(quality) << 32)));
    std::vector<size_t> order(train.size());
    std::iota(order.begin(), order.end(), 0);
    int64_t step = 0;
    for (int epoch = 1; epoch <= cfg.epochs; ++epoch) {
      const auto t0 = std::chrono::steady_clock::now();
      std::shuffle(order.begin(), order.end(), rng);
      const size_t bs = static_cast<size_t>(cfg.batch_size);
      for (size_t s = 0; s < order.size(); s += bs) {
        const size_t e = std::min(order.size(), s + bs);
        const Tensor batch =
            GatherBatch(train, std::span<const size_t>(order).subspan(s, e - s));
        PassGradients grads;
        const TrainPassResult r =
            E2eTrainPass(batch, cfg.pipeline, cr, rs, codec, profile,
                         Mix(cfg.seed + 0x1000 * static_cast<uint64_t>(step)), &grads);
        CheckFinite(r.loss, step);
        pair.log.steps.push_back({step, r.loss, r.rate_bpp, r.mse});
        std::vector<Tensor> flat;
        for (auto& g : grads.cr) flat.push_back(std::move(g));
        for (auto& g : grads.rs) flat.push_back(std::move(g));
        AdamStep(params, flat, &adam);
        for (const Tensor* p : params) {
          if (!p->AllFinite()) {
            Fail(ErrorCode::kDivergence, "training diverged: non-finite weights after step " +
                                             std::to_string(step));
          }
        }
        ++step;
      }

      EpochRecord rec;
      rec.epoch = epoch;
      // Validation uses the weights exactly as stored in the checkpoint.
      std::vector<const FilterNet*> nets{&pair.cr, &pair.rs};
      std::vector<FilterNet> stored = DeserializeNets(SerializeNets(nets));
      if (!cfg.out_dir.empty()) {
        std::filesystem::create_directories(cfg.out_dir);
        rec.checkpoint = (std::filesystem::path(cfg.out_dir) /
                          CheckpointName(quality, cfg.depth, cfg.width, epoch))
                             .string();
        SaveCheckpoint(rec.checkpoint, nets);
      }
      if (val && !val->items.empty()) {
        const FilterNet* vcr = use_cr ? &stored[0] : nullptr;
        const FilterNet* vrs = use_rs ? &stored[1] : nullptr;
        rec.val_loss = DatasetLoss(*val, cfg, vcr, vrs, profile);
        const RdPoint p = EvaluateCheckpoint(*val, cfg.pipeline, vcr, vrs, profile);
        rec.val_bpp = p.bpp;
        rec.val_psnr = p.psnr_db;
      }
      rec.seconds =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      pair.log.epochs.push_back(rec);
    }
    // Hand back the float32 weights a checkpoint would hold.
    {
      const std::vector<const FilterNet*> nets{&pair.cr, &pair.rs};
      std::vector<FilterNet> stored = DeserializeNets(SerializeNets(nets));
      pair.cr = std::move(stored[0]);
      pair.rs = std::move(stored[1]);
    }
    pair.log.final_train_loss = DatasetLoss(train, cfg, cr, rs, profile);
    CheckFinite(pair.log.final_train_loss, step);
    if (codec.StateChecksum() != codec_checksum) {
      Fail(ErrorCode::kProtocol, "codec state changed during training");
    }
    out.push_back(std::move(pair));
  }
  return out;
}

RdPoint EvaluateCheckpoint(const Dataset& data, const SandwichConfig& cfg,
                           const FilterNet* cr, const FilterNet* rs,
                           const CodecProfile& profile, int jobs) {
  if (data.items.empty()) Fail(ErrorCode::kEmpty, "empty dataset");
  if (cr && rs && (cr->depth() != rs->depth() || cr->width() != rs->width())) {
    Fail(ErrorCode::kDimension, "CR and RS shapes differ");
  }
  std::vector<double> bpp(data.size()), psnr(data.size());
  ParallelFor(data.size(), jobs, [&](size_t i) {
    const PipelineResult r = RunPipeline(data.items[i], cfg, cr, rs, profile);
    bpp[i] = r.bpp;
    psnr[i] = Psnr(data.items[i], r.reconstruction);
  });
  RdPoint p;
  for (size_t i = 0; i < data.size(); ++i) {
    p.bpp += bpp[i];
    p.psnr_db += psnr[i];
  }
  p.bpp /= static_cast<double>(data.size());
  p.psnr_db /= static_cast<double>(data.size());
  return p;
}

void WriteTrainLogCsv(const TrainLog& log, const std::string& path) {
  CsvTable t{{"step", "loss", "bpp", "mse"}, {}};
  for (const StepRecord& s : log.steps) {
    t.AddRow({std::to_string(s.step), FormatDouble(s.loss), FormatDouble(s.bpp),
              FormatDouble(s.mse)});
  }
  WriteCsv(t, path);
}

}  // namespace ssc
