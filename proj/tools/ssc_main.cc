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

// ssc: command-line front end.
//
// Exit status: 0 success, 1 runtime failure, 2 usage error.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "ssc/bd_rate.h"
#include "ssc/config.h"
#include "ssc/csv.h"
#include "ssc/datagen.h"
#include "ssc/experiments.h"
#include "ssc/external_codec.h"
#include "ssc/header.h"
#include "ssc/lintrans.h"
#include "ssc/sandwich.h"
#include "ssc/status.h"
#include "ssc/trainer.h"

namespace fs = std::filesystem;

namespace ssc {
namespace {

constexpr int kExitOk = 0;
constexpr int kExitRuntime = 1;
constexpr int kExitUsage = 2;

// Options shared by the experiment commands.
struct CommonOptions {
  std::string config_path;
  std::vector<std::string> overrides;  // key=value
  std::string seed;
  int jobs = 0;
  std::string out_dir;

  void Register(CLI::App* app) {
    app->add_option("--config", config_path, "key=value configuration file");
    app->add_option("--set", overrides, "override one config key (key=value)");
    app->add_option("--seed", seed, "random seed (falls back to SSC_SEED)");
    app->add_option("--jobs", jobs, "worker threads / concurrent codec processes");
    app->add_option("--out-dir", out_dir, "output directory");
  }

  // Defaults < SSC_SEED < config file < flags.
  GlobalConfig Resolve() const {
    GlobalConfig cfg;
    if (const char* env = std::getenv("SSC_SEED"); env && *env) cfg.Set("seed", env);
    if (!config_path.empty()) LoadConfigFile(config_path, &cfg);
    for (const std::string& kv : overrides) {
      const size_t eq = kv.find('=');
      if (eq == std::string::npos) {
        Fail(ErrorCode::kInvalidArgument, "--set expects key=value, got '" + kv + "'");
      }
      cfg.Set(kv.substr(0, eq), kv.substr(eq + 1));
    }
    if (!seed.empty()) cfg.Set("seed", seed);
    if (jobs > 0) cfg.jobs = jobs;
    if (!out_dir.empty()) cfg.out_dir = out_dir;
    cfg.Validate();
    SetExternalCodecConcurrency(cfg.jobs);
    return cfg;
  }
};

uint64_t HashText(const std::string& s) {
  uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

void WriteManifest(const GlobalConfig& cfg, const std::string& command,
                   const nlohmann::json& extra = {}) {
  fs::create_directories(cfg.out_dir);
  nlohmann::json j;
  j["command"] = command;
  j["version"] = kSscVersion;
  std::string canonical;
  nlohmann::json values;
  for (const auto& [k, v] : cfg.Values()) {
    canonical += k + "=" + v + "\n";
    values[k] = v;
  }
  char hash[32];
  std::snprintf(hash, sizeof(hash), "%016llx",
                static_cast<unsigned long long>(HashText(canonical)));
  j["config_hash"] = hash;
  j["config"] = values;
  j["seed"] = cfg.seed;
  j["header_version"] = kHeaderVersion;
  if (!extra.is_null()) j["results"] = extra;
  std::ofstream out(fs::path(cfg.out_dir) / "manifest.json");
  out << j.dump(2) << "\n";
  if (!out) Fail(ErrorCode::kIo, "cannot write manifest in " + cfg.out_dir);
}

std::string CurveFile(const GlobalConfig& cfg, const std::string& name) {
  return (fs::path(cfg.out_dir) / name).string();
}

// --- transform ---

struct TransformArgs {
  std::string kind = "desaturate";
  double alpha = 0.8;
  double d1 = 1.0, d2 = 1.0;
  int q1 = 8, q2 = 8;
  bool inverse = false;
  std::string side_info;
  std::string input, output;
};

int RunTransform(const TransformArgs& a) {
  const std::string side = a.side_info.empty() ? a.output + ".side" : a.side_info;
  if (a.inverse) {
    const std::string side_in = a.side_info.empty() ? a.input + ".side" : a.side_info;
    const std::vector<unsigned char> bytes = ReadFileBytes(side_in);
    const SandwichHeader h = ParseHeader(bytes);
    const ImageRGB img = ReadImage(a.input);
    WriteImage(h.transform_on() ? ApplyInverse(h.side_info, img) : img, a.output);
    return kExitOk;
  }
  TransformSpec spec;
  spec.kind = ParseTransformKind(a.kind);
  spec.alpha = a.alpha;
  spec.d_sc1 = a.d1;
  spec.d_sc2 = a.d2;
  spec.q_sc1 = a.q1;
  spec.q_sc2 = a.q2;
  spec.Validate();
  const ImageRGB img = ReadImage(a.input);
  const ForwardResult f = ApplyForward(spec, img);
  SandwichHeader h;
  h.flags = spec.kind == TransformKind::kIdentity ? 0 : kFlagTransform;
  h.side_info = f.info;
  WriteImage(f.image, a.output);
  WriteFileBytes(side, SerializeHeader(h));
  return kExitOk;
}

// --- gen ---

struct GenArgs {
  int count = 8;
  int size = 64;
  int palette = 8;
  std::string seed;
  std::string out_dir = "gen";
};

int RunGen(const GenArgs& a) {
  ScSpec spec;
  spec.size = a.size;
  spec.palette_size = a.palette;
  GlobalConfig seed_cfg;
  if (const char* env = std::getenv("SSC_SEED"); env && *env) seed_cfg.Set("seed", env);
  if (!a.seed.empty()) seed_cfg.Set("seed", a.seed);
  spec.seed = seed_cfg.seed;
  spec.Validate();
  if (a.count < 1) Fail(ErrorCode::kInvalidArgument, "--count must be >= 1");
  fs::create_directories(a.out_dir);
  for (int i = 0; i < a.count; ++i) {
    ScSpec s = spec;
    s.seed = spec.seed + static_cast<uint64_t>(i);
    char name[64];
    std::snprintf(name, sizeof(name), "sc_%05d.png", i);
    WritePng(GenScreenImage(s), (fs::path(a.out_dir) / name).string());
  }
  return kExitOk;
}

// --- compress ---

struct CompressArgs {
  CommonOptions common;
  int quality = 3;
  std::string checkpoint;
  std::string input, output, recon;
};

int RunCompress(const CompressArgs& a) {
  GlobalConfig cfg = a.common.Resolve();
  SandwichConfig pipe = cfg.Pipeline();
  const CodecProfile profile = MakeProfile(a.quality, cfg.lambdas);
  std::vector<FilterNet> nets;
  if (pipe.use_cr || pipe.use_rs) {
    if (a.checkpoint.empty()) {
      Fail(ErrorCode::kInvalidArgument,
           "CR/RS enabled: pass --checkpoint or --set use_cr=0 --set use_rs=0");
    }
    nets = LoadCheckpoint(a.checkpoint);
    if (nets.size() != 2) Fail(ErrorCode::kFormat, "checkpoint must hold CR and RS");
  }
  const ImageRGB img = ReadImage(a.input);
  const PipelineResult r = RunPipeline(img, pipe, pipe.use_cr ? &nets[0] : nullptr,
                                       pipe.use_rs ? &nets[1] : nullptr, profile);
  PayloadDescriptor payload;
  payload.codec = pipe.external_codec.empty() ? 0 : 1;
  payload.quality = static_cast<uint8_t>(a.quality);
  payload.codec_bits = static_cast<uint64_t>(std::llround(r.codec_bits));
  payload.height = static_cast<uint32_t>(img.height());
  payload.width = static_cast<uint32_t>(img.width());
  WriteFileBytes(a.output, WriteContainer(r.header, payload));
  if (!a.recon.empty()) WriteImage(r.reconstruction, a.recon);
  std::printf("bpp %.6f psnr %.4f header_bits %.0f\n", r.bpp,
              Psnr(img, r.reconstruction), r.header_bits);
  return kExitOk;
}

// --- train ---

int RunTrain(const CommonOptions& common) {
  GlobalConfig cfg = common.Resolve();
  const Dataset train = LoadTrainSet(cfg);
  const Dataset val = LoadValSet(cfg);
  TrainConfig tc = cfg.Training();
  tc.out_dir = cfg.out_dir;
  const std::vector<TrainedPair> pairs = Train(tc, train, &val);
  nlohmann::json results = nlohmann::json::array();
  for (const TrainedPair& p : pairs) {
    WriteTrainLogCsv(p.log, CurveFile(cfg, "train_log_q" + std::to_string(p.log.quality) + ".csv"));
    nlohmann::json r;
    r["quality"] = p.log.quality;
    r["initial_train_loss"] = p.log.initial_train_loss;
    r["final_train_loss"] = p.log.final_train_loss;
    if (!p.log.epochs.empty()) {
      r["val_loss"] = p.log.epochs.back().val_loss;
      r["val_bpp"] = p.log.epochs.back().val_bpp;
      r["val_psnr"] = p.log.epochs.back().val_psnr;
      r["checkpoint"] = p.log.epochs.back().checkpoint;
    }
    results.push_back(r);
    std::printf("quality %d: train loss %.6f -> %.6f\n", p.log.quality,
                p.log.initial_train_loss, p.log.final_train_loss);
  }
  WriteManifest(cfg, "train", results);
  return kExitOk;
}

// --- eval ---

struct EvalArgs {
  CommonOptions common;
  std::string checkpoint_dir;
  int flags = -1;  // -1: use the config as is
  std::string output;
};

int RunEval(const EvalArgs& a) {
  GlobalConfig cfg = a.common.Resolve();
  SandwichConfig pipe = cfg.Pipeline();
  if (a.flags >= 0) {
    if (a.flags > 7) Fail(ErrorCode::kInvalidArgument, "--flags must be in 0..7");
    if (!(a.flags & kFlagTransform)) pipe.transform = TransformSpec::Identity();
    pipe.use_cr = pipe.use_cr && (a.flags & kFlagCr);
    pipe.use_rs = pipe.use_rs && (a.flags & kFlagRs);
  }
  const Dataset val = LoadValSet(cfg);
  const std::vector<CodecProfile> profiles = cfg.Profiles();
  std::vector<FilterNet> nets;
  std::vector<const FilterNet*> cr, rs;
  if (pipe.use_cr || pipe.use_rs) {
    for (const CodecProfile& p : profiles) {
      const std::string path = FindCheckpoint(
          a.checkpoint_dir.empty() ? cfg.out_dir : a.checkpoint_dir, p.quality, cfg.depth,
          cfg.width);
      if (path.empty()) {
        Fail(ErrorCode::kIo, "no checkpoint for quality " + std::to_string(p.quality));
      }
      for (FilterNet& n : LoadCheckpoint(path)) nets.push_back(std::move(n));
    }
    for (size_t i = 0; i < profiles.size(); ++i) {
      cr.push_back(pipe.use_cr ? &nets[2 * i] : nullptr);
      rs.push_back(pipe.use_rs ? &nets[2 * i + 1] : nullptr);
    }
  }
  RdCurve curve = PipelineCurve(val, pipe, cr, rs, profiles, cfg.jobs);
  CsvTable t{{"quality", "bpp", "psnr"}, {}};
  for (size_t i = 0; i < profiles.size(); ++i) {
    t.AddRow({std::to_string(profiles[i].quality), FormatDouble(curve.points[i].bpp),
              FormatDouble(curve.points[i].psnr_db)});
    std::printf("quality %d: bpp %.17g psnr %.17g\n", profiles[i].quality,
                curve.points[i].bpp, curve.points[i].psnr_db);
  }
  fs::create_directories(cfg.out_dir);
  WriteCsv(t, a.output.empty() ? CurveFile(cfg, "rd.csv") : a.output);
  WriteManifest(cfg, "eval");
  return kExitOk;
}

// --- bdrate ---

int RunBdRate(const std::string& anchor, const std::string& test) {
  const double bd = BdRate(ReadRdCurve(anchor), ReadRdCurve(test));
  std::printf("%.6f\n", bd == 0.0 ? 0.0 : bd);
  return kExitOk;
}

// --- compressibility ---

struct CompressibilityArgs {
  CommonOptions common;
  std::vector<double> alphas = {0.5, 0.8, 0.9, 0.95};
};

int RunCompressibility(const CompressibilityArgs& a) {
  GlobalConfig cfg = a.common.Resolve();
  const Dataset data = LoadTrainSet(cfg);
  const std::vector<CodecProfile> profiles = cfg.Profiles();
  fs::create_directories(cfg.out_dir);
  CsvTable all{{"alpha", "profile", "quality", "mean_delta_bpp", "n"}, {}};
  for (double alpha : a.alphas) {
    const auto rows =
        DeltaBpp(data, TransformSpec::Desaturate(alpha), profiles, cfg.external_codec, cfg.jobs);
    const CsvTable t = DeltaBppTable(rows);
    for (const auto& r : t.rows) {
      std::vector<std::string> row{FormatDouble(alpha)};
      row.insert(row.end(), r.begin(), r.end());
      all.AddRow(row);
    }
    for (const DeltaBppRow& r : rows) {
      std::printf("alpha %.3g quality %d: mean delta bpp %.6f\n", alpha, r.quality,
                  r.mean_delta_bpp);
    }
  }
  WriteCsv(all, CurveFile(cfg, "delta_bpp.csv"));
  std::vector<double> sweep_alphas{1.0};
  sweep_alphas.insert(sweep_alphas.end(), a.alphas.begin(), a.alphas.end());
  WriteRdPlotData(DesatSweep(data, sweep_alphas, profiles, cfg.external_codec, cfg.jobs),
                  CurveFile(cfg, "desat_sweep.csv"));
  WriteManifest(cfg, "compressibility");
  return kExitOk;
}

// --- ablate ---

struct AblateArgs {
  CommonOptions common;
  // name,alpha,cr,rs,L,C,checkpoint_dir
  std::vector<std::string> rows;
};

AblationSpec ParseAblationRow(const std::string& text) {
  std::vector<std::string> f;
  std::stringstream ss(text);
  for (std::string item; std::getline(ss, item, ',');) f.push_back(item);
  if (f.size() < 4 || f.size() > 7) {
    Fail(ErrorCode::kInvalidArgument,
         "--row expects name,alpha,cr,rs[,L,C,checkpoint_dir], got '" + text + "'");
  }
  AblationSpec s;
  s.name = f[0];
  s.alpha = ParseDouble(f[1]);
  s.use_cr = f[2] == "1";
  s.use_rs = f[3] == "1";
  if (f.size() > 5) {
    s.depth = std::stoi(f[4]);
    s.width = std::stoi(f[5]);
  }
  if (f.size() > 6) s.checkpoint_dir = f[6];
  if ((s.use_cr || s.use_rs) && (s.depth < 1 || s.width < 1)) {
    Fail(ErrorCode::kInvalidArgument, "row '" + s.name + "' enables a network without L,C");
  }
  return s;
}

int RunAblate(const AblateArgs& a) {
  GlobalConfig cfg = a.common.Resolve();
  std::vector<AblationSpec> specs;
  if (a.rows.empty()) {
    specs.push_back({"baseline", 1.0, false, false, 0, 0, ""});
    specs.push_back({"alpha", cfg.transform.alpha, false, false, 0, 0, ""});
    specs.push_back({"full", cfg.transform.alpha, true, true, cfg.depth, cfg.width, cfg.out_dir});
  } else {
    for (const std::string& r : a.rows) specs.push_back(ParseAblationRow(r));
  }
  const Dataset val = LoadValSet(cfg);
  const auto rows = AblationRun(val, specs, cfg.Profiles(), cfg.jobs);
  fs::create_directories(cfg.out_dir);
  const CsvTable t = AblationTable(rows);
  WriteCsv(t, CurveFile(cfg, "ablation.csv"));
  std::cout << FormatCsv(t);
  WriteManifest(cfg, "ablate");
  return kExitOk;
}

int Main(int argc, char** argv) {
  CLI::App app{"Screen-content sandwich around a frozen image codec"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kSscVersion);

  TransformArgs ta;
  CLI::App* tr = app.add_subcommand("transform", "apply or invert a linear colour transform");
  tr->add_option("--kind", ta.kind, "identity|desaturate|pca_downscale|pca_quantize");
  tr->add_option("--alpha", ta.alpha, "saturation level in (0,1]");
  tr->add_option("--d1", ta.d1, "side channel 1 divisor");
  tr->add_option("--d2", ta.d2, "side channel 2 divisor");
  tr->add_option("--q1", ta.q1, "side channel 1 bits");
  tr->add_option("--q2", ta.q2, "side channel 2 bits");
  tr->add_flag("--inverse", ta.inverse, "invert using the side-info file");
  tr->add_option("--side-info", ta.side_info, "side-info file (default <output>.side; <input>.side with --inverse)");
  tr->add_option("input", ta.input, "input image (.png/.ppm)")->required();
  tr->add_option("output", ta.output, "output image (.png/.ppm)")->required();

  GenArgs ga;
  CLI::App* gen = app.add_subcommand("gen", "generate synthetic screen-content images");
  gen->add_option("--count", ga.count, "number of images");
  gen->add_option("--size", ga.size, "image side in pixels");
  gen->add_option("--palette", ga.palette, "palette size (2..32)");
  gen->add_option("--seed", ga.seed, "first seed (falls back to SSC_SEED)");
  gen->add_option("--out-dir", ga.out_dir, "output directory");

  CompressArgs ca;
  CLI::App* comp = app.add_subcommand("compress", "code one image through the pipeline");
  ca.common.Register(comp);
  comp->add_option("--quality", ca.quality, "quality point 1..8");
  comp->add_option("--checkpoint", ca.checkpoint, "CR/RS checkpoint (.snn)");
  comp->add_option("--recon", ca.recon, "write the decoded image here");
  comp->add_option("input", ca.input, "input image")->required();
  comp->add_option("output", ca.output, "output .ssc container")->required();

  CommonOptions train_opts;
  CLI::App* train = app.add_subcommand("train", "train CR/RS per quality point");
  train_opts.Register(train);

  EvalArgs ea;
  CLI::App* ev = app.add_subcommand("eval", "RD points on the validation set");
  ea.common.Register(ev);
  ev->add_option("--checkpoint-dir", ea.checkpoint_dir, "directory with .snn checkpoints");
  ev->add_option("--flags", ea.flags, "header flags mask: 1 transform, 2 CR, 4 RS");
  ev->add_option("--output", ea.output, "RD CSV path (default <out-dir>/rd.csv)");

  std::string anchor, test;
  CLI::App* bd = app.add_subcommand("bdrate", "BD-rate of test against anchor (percent)");
  bd->add_option("anchor", anchor, "anchor curve CSV (bpp, psnr columns)")->required();
  bd->add_option("test", test, "test curve CSV")->required();

  CompressibilityArgs cpa;
  CLI::App* cmpr = app.add_subcommand("compressibility",
                                      "bitrate change from desaturation alone");
  cpa.common.Register(cmpr);
  cmpr->add_option("--alpha", cpa.alphas, "saturation levels");

  AblateArgs aa;
  CLI::App* abl = app.add_subcommand("ablate", "BD-rate table over module toggles");
  aa.common.Register(abl);
  abl->add_option("--row", aa.rows, "name,alpha,cr,rs[,L,C,checkpoint_dir]");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*tr) return RunTransform(ta);
    if (*gen) return RunGen(ga);
    if (*comp) return RunCompress(ca);
    if (*train) return RunTrain(train_opts);
    if (*ev) return RunEval(ea);
    if (*bd) return RunBdRate(anchor, test);
    if (*cmpr) return RunCompressibility(cpa);
    if (*abl) return RunAblate(aa);
  } catch (const Error& e) {
    std::cerr << "ssc: " << ErrorCodeName(e.code()) << ": " << e.what() << "\n";
    return e.code() == ErrorCode::kInvalidArgument ? kExitUsage : kExitRuntime;
  } catch (const std::exception& e) {
    std::cerr << "ssc: " << e.what() << "\n";
    return kExitRuntime;
  }
  return kExitUsage;
}

}  // namespace
}  // namespace ssc

int main(int argc, char** argv) { return ssc::Main(argc, argv); }
