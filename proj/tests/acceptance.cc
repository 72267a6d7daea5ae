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

// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// nonzero when any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>

#include "bd_oracle.h"
#include "ssc/bd_rate.h"
#include "ssc/datagen.h"
#include "ssc/experiments.h"
#include "ssc/filter_net.h"
#include "ssc/lintrans.h"
#include "ssc/nn_ops.h"
#include "ssc/sandwich.h"
#include "ssc/trainer.h"
#include "test_util.h"

namespace ssc {
namespace {

using testing::Dot;
using testing::GradCheck;
using testing::RandomTensor;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::vector<CodecProfile> DeskProfiles() {
  const std::vector<int> q = {2, 3, 4, 5};
  return ProfileTable(q);
}

Dataset DeskCorpus(int count, uint64_t seed) {
  ScSpec s;
  s.seed = seed;
  s.size = 64;
  return GenerateDataset(s, count, 64);
}

std::string Fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), f, v);
  return buf;
}

Outcome Complexity() {
  Outcome o{true, ""};
  const double params = 2.0 * CountFilterParams(8, 32);
  o.pass &= std::abs(params - 0.20e6) <= 0.15 * 0.20e6;
  o.detail = "pair params " + std::to_string(static_cast<int64_t>(params)) + " vs 0.20M;";
  const struct {
    int l, c;
    double k;
  } rows[] = {{8, 32, 42e3}, {10, 32, 51e3}, {3, 64, 65e3}, {5, 64, 102e3}};
  for (const auto& r : rows) {
    const double macs = 2.0 * CountFilterMacsPerPixel(r.l, r.c);
    // The instantiated nets must agree with the closed form.
    o.pass &= FilterNet(r.l, r.c).CountMacsPerPixel() * 2.0 == macs;
    o.pass &= std::abs(macs - r.k) <= 0.15 * r.k;
    o.detail += " L" + std::to_string(r.l) + "C" + std::to_string(r.c) + " " +
                std::to_string(static_cast<int64_t>(macs)) + " MAC/px vs " +
                std::to_string(static_cast<int64_t>(r.k)) + ";";
  }
  return o;
}

Outcome ExactInverse() {
  std::mt19937_64 rng(2024);
  double desat = 0.0, pca = 0.0, penrose = 0.0;
  for (double a : {0.5, 0.8, 0.9, 0.95}) {
    for (int i = 0; i < 100; ++i) {
      const ImageRGB x = testing::RandomImage(16, 16, rng, 0.01, 0.99);
      const ImageRGB y = Resaturate(Desaturate(x, a), a);
      for (size_t k = 0; k < x.num_samples(); ++k)
        desat = std::max(desat, std::abs(y.samples()[k] - x.samples()[k]));
    }
  }
  for (int i = 0; i < 100; ++i) {
    const ImageRGB x = testing::RandomImage(16, 16, rng);
    const PcaBasis b = PcaFit(x);
    const ImageRGB y = PcaInverse(b, PcaForward(b, x));
    for (size_t k = 0; k < x.num_samples(); ++k)
      pca = std::max(pca, std::abs(y.samples()[k] - x.samples()[k]));
  }
  std::uniform_real_distribution<double> u(-1, 1);
  for (int t = 0; t < 300; ++t) {
    Mat3 a;
    for (auto& row : a)
      for (double& v : row) v = u(rng);
    if (t % 3 == 1) a[2] = a[1];
    if (t % 3 == 2) a[1] = a[2] = a[0];
    const Mat3 p = Pinv3(a);
    const Mat3 ap = Multiply(a, p), pa = Multiply(p, a);
    const Mat3 apa = Multiply(ap, a), pap = Multiply(pa, p);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        penrose = std::max({penrose, std::abs(apa[i][j] - a[i][j]), std::abs(pap[i][j] - p[i][j]),
                            std::abs(ap[i][j] - ap[j][i]), std::abs(pa[i][j] - pa[j][i])});
      }
  }
  return {desat <= 1e-5 && pca <= 1e-5 && penrose <= 1e-8,
          "desat " + Fmt("%.2e", desat) + ", pca " + Fmt("%.2e", pca) + ", penrose " +
              Fmt("%.2e", penrose)};
}

Outcome Gradients() {
  std::mt19937_64 rng(7);
  double worst = 0.0;
  std::string detail;
  auto note = [&](const std::string& name, double err, double tol) {
    worst = std::max(worst, err / tol);
    detail += " " + name + " " + Fmt("%.1e", err) + ";";
  };
  {  // conv and depthwise
    Tensor x = RandomTensor({2, 3, 5, 5}, rng), w = RandomTensor({4, 3, 3, 3}, rng),
           b = RandomTensor({4}, rng);
    const Tensor r = RandomTensor({2, 4, 5, 5}, rng);
    const ConvGrads g = Conv2dBackward(x, w, r, 1);
    auto f = [&] { return Dot(Conv2d(x, w, b, 1), r); };
    note("conv", std::max({GradCheck(&x, g.dx, f), GradCheck(&w, g.dw, f), GradCheck(&b, g.db, f)}),
         1e-3);
    Tensor dw = RandomTensor({3, 1, 3, 3}, rng), db = RandomTensor({3}, rng);
    const Tensor rd = RandomTensor({2, 3, 5, 5}, rng);
    const ConvGrads gd = DepthwiseConv2dBackward(x, dw, rd);
    auto fd = [&] { return Dot(DepthwiseConv2d(x, dw, db), rd); };
    note("depthwise",
         std::max({GradCheck(&x, gd.dx, fd), GradCheck(&dw, gd.dw, fd), GradCheck(&db, gd.db, fd)}),
         1e-3);
  }
  {  // MBConv
    MbConvParams p = MakeMbConv(8, false);
    for (Tensor* t : {&p.expand.w, &p.expand.b, &p.depthwise.w, &p.depthwise.b, &p.project.w,
                      &p.project.b})
      *t = RandomTensor(t->shape(), rng, 0.3);
    Tensor x = RandomTensor({1, 8, 6, 6}, rng);
    MbConvCache cache;
    const Tensor r = RandomTensor(MbConvForward(x, p, &cache).shape(), rng);
    MbConvParams g = MakeMbConv(8, false);
    const Tensor dx = MbConvBackward(cache, p, r, &g);
    auto f = [&] { return Dot(MbConvForward(x, p, nullptr), r); };
    double e = GradCheck(&x, dx, f);
    e = std::max(e, GradCheck(&p.expand.w, g.expand.w, f));
    e = std::max(e, GradCheck(&p.depthwise.w, g.depthwise.w, f));
    e = std::max(e, GradCheck(&p.project.w, g.project.w, f));
    note("mbconv", e, 1e-3);
  }
  {  // full filter
    FilterNet net(1, 4);
    net.Initialize(5);
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
    net.Backward(cache, dy, &grads);
    double e = 0.0;
    const std::vector<Tensor*> params = net.Parameters();
    for (size_t i = 0; i < params.size(); ++i) e = std::max(e, GradCheck(params[i], grads[i], loss));
    note("filter", e, 1e-3);
  }
  {  // end-to-end pass with the rounding offsets frozen
    const Tensor x = ImageToTensor(testing::RandomImage(16, 16, rng, 0.3, 0.7));
    FilterNet cr(1, 4), rs(1, 4);
    cr.Initialize(3);
    rs.Initialize(4);
    SandwichConfig cfg;
    cfg.transform = TransformSpec::Desaturate(0.8);
    cfg.use_cr = cfg.use_rs = true;
    const ProxyCodec codec;
    const CodecProfile p = MakeProfile(4);
    PassGradients g;
    const TrainPassResult base = E2eTrainPass(x, cfg, &cr, &rs, codec, p, 21, &g);
    const std::vector<double> offsets = base.round_offsets;
    auto loss = [&] {
      return E2eTrainPass(x, cfg, &cr, &rs, codec, p, 21, nullptr, &offsets).loss;
    };
    double e = 0.0;
    const std::vector<Tensor*> cp = cr.Parameters(), rp = rs.Parameters();
    for (size_t i = 0; i < cp.size(); ++i) {
      e = std::max(e, GradCheck(cp[i], g.cr[i], loss, 1e-4, 1e-2, 12));
      e = std::max(e, GradCheck(rp[i], g.rs[i], loss, 1e-4, 1e-2, 12));
    }
    note("e2e", e, 5e-2);
  }
  return {worst < 1.0, detail.substr(1)};
}

Outcome BdOracle() {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst = 0.0;
  for (int t = 0; t < 50; ++t) {
    RdCurve a, b;
    double bpp = 0.05 + 0.2 * u(rng), psnr = 25 + 5 * u(rng);
    for (int i = 0; i < 4; ++i) {
      a.points.push_back({bpp, psnr});
      b.points.push_back({bpp * (0.85 + 0.3 * u(rng)), psnr + u(rng) - 0.5});
      bpp *= 1.3 + u(rng);
      psnr += 1.0 + 3.0 * u(rng);
    }
    b.Normalize();
    worst = std::max(worst, std::abs(BdRate(a, b) - testing::BdRateOracle(a, b)));
  }
  RdCurve a{"a", {{0.2, 30}, {0.4, 33}, {0.7, 36}, {1.1, 39}}}, s = a;
  for (RdPoint& p : s.points) p.bpp *= 0.9;
  const double shift = BdRate(a, s);
  return {worst <= 0.05 && std::abs(shift + 10.0) <= 1e-6,
          "max |bd - oracle| " + Fmt("%.2e", worst) + " pp, x0.9 shift " + Fmt("%.9f", shift) + "%"};
}

Outcome Compressibility() {
  const Dataset data = DeskCorpus(64, 1);
  const auto ident = DeltaBpp(data, TransformSpec::Identity(), DeskProfiles());
  const auto half = DeltaBpp(data, TransformSpec::Desaturate(0.5), DeskProfiles());
  Outcome o{true, ""};
  for (size_t i = 0; i < half.size(); ++i) {
    o.pass &= half[i].mean_delta_bpp < 0.0 && ident[i].mean_delta_bpp == 0.0;
    o.detail += "q" + std::to_string(half[i].quality) + " " + Fmt("%.4f", half[i].mean_delta_bpp) +
                (ident[i].mean_delta_bpp == 0.0 ? "" : " (identity nonzero)") + "; ";
  }
  o.detail += "identity 0";
  return o;
}

Outcome DesatDirection() {
  const Dataset data = DeskCorpus(64, 1);
  const auto curves = DesatSweep(data, {1.0, 0.9, 0.8, 0.5}, DeskProfiles());
  Outcome o{true, ""};
  for (size_t q = 0; q < 4; ++q) {
    o.detail += "q" + std::to_string(q + 2) + ":";
    for (size_t c = 0; c < curves.size(); ++c) {
      if (c > 0) o.pass &= curves[c].points[q].psnr_db <= curves[c - 1].points[q].psnr_db;
      o.detail += " " + Fmt("%.2f", curves[c].points[q].psnr_db);
    }
    o.detail += "; ";
  }
  return o;
}

Outcome Training(uint64_t* checksum_before, uint64_t* checksum_after) {
  const Dataset train = DeskCorpus(64, 1), val = DeskCorpus(16, 1 + 64);
  TrainConfig cfg;
  cfg.depth = 2;
  cfg.width = 8;
  cfg.epochs = 5;
  cfg.qualities = {2, 3, 4, 5};
  cfg.pipeline.transform = TransformSpec::Desaturate(0.8);
  cfg.pipeline.use_cr = cfg.pipeline.use_rs = true;
  // Desk-scale learning rate; the optimiser defaults are kept otherwise.
  cfg.adam.learning_rate = 1e-3;
  const ProxyCodec codec;
  *checksum_before = codec.StateChecksum();
  const std::vector<TrainedPair> pairs = Train(cfg, train, &val);
  *checksum_after = codec.StateChecksum();
  // A codec built after the run must hold the same tables.
  if (ProxyCodec().StateChecksum() != *checksum_before) *checksum_after = 0;

  Outcome o{true, ""};
  std::vector<const FilterNet*> cr, rs;
  for (const TrainedPair& p : pairs) {
    o.pass &= p.log.final_train_loss <= p.log.initial_train_loss;
    o.detail += "q" + std::to_string(p.log.quality) + " loss " +
                Fmt("%.4f", p.log.initial_train_loss) + "->" + Fmt("%.4f", p.log.final_train_loss) +
                "; ";
    cr.push_back(&p.cr);
    rs.push_back(&p.rs);
  }
  const RdCurve base = PipelineCurve(val, SandwichConfig{}, {}, {}, DeskProfiles());
  const RdCurve full = PipelineCurve(val, cfg.pipeline, cr, rs, DeskProfiles());
  const double bd = BdRate(base, full);
  o.pass &= bd <= 0.0;
  o.detail += "BD-rate " + Fmt("%.3f", bd) + "%";
  return o;
}

Outcome BackwardsCompatible() {
  const Dataset data = DeskCorpus(20, 500);
  const auto profiles = DeskProfiles();
  int identical = 0;
  for (size_t i = 0; i < data.size(); ++i) {
    const CodecProfile& p = profiles[i % profiles.size()];
    const CodecResult bare = ProxyCode(data.items[i], p, CodecMode::kEval);
    const PipelineResult r = RunPipeline(data.items[i], SandwichConfig{}, nullptr, nullptr, p);
    identical += r.reconstruction == bare.reconstruction && r.bpp == bare.bpp &&
                 r.header.flags == 0;
  }
  return {identical == 20, std::to_string(identical) + "/20 bit-identical"};
}

struct Criterion {
  int id;
  const char* name;
  double limit_s;  // 0: no hard limit
  std::function<Outcome()> run;
};

int Main() {
  uint64_t before = 0, after = 1;
  bool trained = false;
  const std::vector<Criterion> all = {
      {1, "complexity accounting", 1, Complexity},
      {2, "exact-inverse transforms", 10, ExactInverse},
      {3, "gradient correctness", 120, Gradients},
      {4, "BD-rate oracle", 30, BdOracle},
      {5, "compressibility direction", 120, Compressibility},
      {6, "desaturation sweep direction", 120, DesatDirection},
      {7, "end-to-end training", 0,
       [&] {
         trained = true;
         return Training(&before, &after);
       }},
      {8, "backwards compatibility", 30, BackwardsCompatible},
      {9, "frozen codec", 0,
       [&] {
         if (!trained) return Outcome{false, "training did not run"};
         return Outcome{before == after, "checksum " +
                                             std::to_string(before) + " -> " + std::to_string(after)};
       }},
  };
  int failures = 0;
  for (const Criterion& c : all) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (c.limit_s > 0 && s > c.limit_s) {
      o.pass = false;
      o.detail += " (over the " + Fmt("%.0f", c.limit_s) + " s limit)";
    }
    failures += !o.pass;
    std::printf("criterion %d %s: %s [%.1f s] %s\n", c.id, o.pass ? "PASS" : "FAIL", c.name, s,
                o.detail.c_str());
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}

}  // namespace
}  // namespace ssc

int main() { return ssc::Main(); }
