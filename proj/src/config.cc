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

#include "ssc/config.h"

#include <fstream>
#include <sstream>

#include "ssc/csv.h"
#include "ssc/status.h"

namespace ssc {
namespace {

std::string Trim(const std::string& s) {
  const size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  return s.substr(b, s.find_last_not_of(" \t\r") - b + 1);
}

std::vector<std::string> SplitList(const std::string& v) {
  std::vector<std::string> out;
  std::stringstream ss(v);
  for (std::string item; std::getline(ss, item, ',');) {
    item = Trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

double ToDouble(const std::string& key, const std::string& v) {
  try {
    return ParseDouble(v);
  } catch (const Error&) {
    Fail(ErrorCode::kInvalidArgument, key + ": not a number: '" + v + "'");
  }
}

int64_t ToInt(const std::string& key, const std::string& v) {
  size_t pos = 0;
  int64_t r = 0;
  try {
    r = std::stoll(v, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos != v.size() || v.empty()) {
    Fail(ErrorCode::kInvalidArgument, key + ": not an integer: '" + v + "'");
  }
  return r;
}

bool ToBool(const std::string& key, const std::string& v) {
  if (v == "1" || v == "true" || v == "on" || v == "yes") return true;
  if (v == "0" || v == "false" || v == "off" || v == "no") return false;
  Fail(ErrorCode::kInvalidArgument, key + ": not a boolean: '" + v + "'");
}

std::string Join(const auto& xs) {
  std::string s;
  for (const auto& x : xs) {
    if (!s.empty()) s += ',';
    if constexpr (std::is_floating_point_v<std::decay_t<decltype(x)>>) {
      s += FormatDouble(x);
    } else {
      s += std::to_string(x);
    }
  }
  return s;
}

}  // namespace

void GlobalConfig::Set(const std::string& key, const std::string& value) {
  const std::string v = Trim(value);
  if (key == "data_dir") data_dir = v;
  else if (key == "val_dir") val_dir = v;
  else if (key == "gen_count") gen_count = static_cast<int>(ToInt(key, v));
  else if (key == "val_count") val_count = static_cast<int>(ToInt(key, v));
  else if (key == "gen_size") gen_size = static_cast<int>(ToInt(key, v));
  else if (key == "gen_palette") gen_palette = static_cast<int>(ToInt(key, v));
  else if (key == "crop") crop = static_cast<int>(ToInt(key, v));
  else if (key == "qualities") {
    qualities.clear();
    for (const auto& q : SplitList(v)) qualities.push_back(static_cast<int>(ToInt(key, q)));
  } else if (key == "lambdas") {
    lambdas.clear();
    for (const auto& l : SplitList(v)) lambdas.push_back(ToDouble(key, l));
  } else if (key == "transform") transform.kind = ParseTransformKind(v);
  else if (key == "alpha") transform.alpha = ToDouble(key, v);
  else if (key == "d_sc1") transform.d_sc1 = ToDouble(key, v);
  else if (key == "d_sc2") transform.d_sc2 = ToDouble(key, v);
  else if (key == "q_sc1") transform.q_sc1 = static_cast<int>(ToInt(key, v));
  else if (key == "q_sc2") transform.q_sc2 = static_cast<int>(ToInt(key, v));
  else if (key == "use_cr") use_cr = ToBool(key, v);
  else if (key == "use_rs") use_rs = ToBool(key, v);
  else if (key == "order") {
    if (v == "t_then_cr") order = ModuleOrder::kTransformThenCr;
    else if (v == "cr_then_t") order = ModuleOrder::kCrThenTransform;
    else Fail(ErrorCode::kInvalidArgument, "order must be t_then_cr or cr_then_t");
  } else if (key == "external_codec") external_codec = v;
  else if (key == "depth") depth = static_cast<int>(ToInt(key, v));
  else if (key == "width") width = static_cast<int>(ToInt(key, v));
  else if (key == "epochs") epochs = static_cast<int>(ToInt(key, v));
  else if (key == "batch_size") batch_size = static_cast<int>(ToInt(key, v));
  else if (key == "learning_rate") adam.learning_rate = ToDouble(key, v);
  else if (key == "beta1") adam.beta1 = ToDouble(key, v);
  else if (key == "beta2") adam.beta2 = ToDouble(key, v);
  else if (key == "epsilon") adam.epsilon = ToDouble(key, v);
  else if (key == "seed") seed = static_cast<uint64_t>(ToInt(key, v));
  else if (key == "out_dir") out_dir = v;
  else if (key == "jobs") jobs = static_cast<int>(ToInt(key, v));
  else Fail(ErrorCode::kInvalidArgument, "unknown config key '" + key + "'");
}

void GlobalConfig::Validate() const {
  if (gen_count < 1 || val_count < 0) {
    Fail(ErrorCode::kInvalidArgument, "gen_count must be >= 1 and val_count >= 0");
  }
  if (crop < 2 || gen_size < crop) {
    Fail(ErrorCode::kInvalidArgument, "crop must be >= 2 and <= gen_size");
  }
  if (jobs < 1) Fail(ErrorCode::kInvalidArgument, "jobs must be >= 1");
  GeneratorSpec().Validate();
  TrainConfig t = Training();
  t.pipeline.external_codec.clear();
  t.Validate();
}

std::map<std::string, std::string> GlobalConfig::Values() const {
  return {
      {"data_dir", data_dir},
      {"val_dir", val_dir},
      {"gen_count", std::to_string(gen_count)},
      {"val_count", std::to_string(val_count)},
      {"gen_size", std::to_string(gen_size)},
      {"gen_palette", std::to_string(gen_palette)},
      {"crop", std::to_string(crop)},
      {"qualities", Join(qualities)},
      {"lambdas", Join(lambdas)},
      {"transform", TransformKindName(transform.kind)},
      {"alpha", FormatDouble(transform.alpha)},
      {"d_sc1", FormatDouble(transform.d_sc1)},
      {"d_sc2", FormatDouble(transform.d_sc2)},
      {"q_sc1", std::to_string(transform.q_sc1)},
      {"q_sc2", std::to_string(transform.q_sc2)},
      {"use_cr", use_cr ? "1" : "0"},
      {"use_rs", use_rs ? "1" : "0"},
      {"order", order == ModuleOrder::kTransformThenCr ? "t_then_cr" : "cr_then_t"},
      {"external_codec", external_codec},
      {"depth", std::to_string(depth)},
      {"width", std::to_string(width)},
      {"epochs", std::to_string(epochs)},
      {"batch_size", std::to_string(batch_size)},
      {"learning_rate", FormatDouble(adam.learning_rate)},
      {"beta1", FormatDouble(adam.beta1)},
      {"beta2", FormatDouble(adam.beta2)},
      {"epsilon", FormatDouble(adam.epsilon)},
      {"seed", std::to_string(seed)},
      {"out_dir", out_dir},
      {"jobs", std::to_string(jobs)},
  };
}

ScSpec GlobalConfig::GeneratorSpec() const {
  ScSpec s;
  s.seed = seed;
  s.size = gen_size;
  s.palette_size = gen_palette;
  return s;
}

SandwichConfig GlobalConfig::Pipeline() const {
  SandwichConfig p;
  p.transform = transform;
  p.use_cr = use_cr;
  p.use_rs = use_rs;
  p.order = order;
  p.external_codec = external_codec;
  return p;
}

TrainConfig GlobalConfig::Training() const {
  TrainConfig t;
  t.epochs = epochs;
  t.batch_size = batch_size;
  t.depth = depth;
  t.width = width;
  t.pipeline = Pipeline();
  t.qualities = qualities;
  t.lambdas = lambdas;
  t.adam = adam;
  t.seed = seed;
  t.out_dir = out_dir;
  return t;
}

std::vector<CodecProfile> GlobalConfig::Profiles() const {
  return ProfileTable(qualities, lambdas);
}

void ParseConfigText(const std::string& text, GlobalConfig* cfg) {
  std::istringstream in(text);
  int line_no = 0;
  for (std::string line; std::getline(in, line);) {
    ++line_no;
    const size_t hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    line = Trim(line);
    if (line.empty()) continue;
    const size_t eq = line.find('=');
    if (eq == std::string::npos) {
      Fail(ErrorCode::kInvalidArgument,
           "config line " + std::to_string(line_no) + ": expected key=value");
    }
    cfg->Set(Trim(line.substr(0, eq)), line.substr(eq + 1));
  }
}

void LoadConfigFile(const std::string& path, GlobalConfig* cfg) {
  std::ifstream in(path);
  if (!in) Fail(ErrorCode::kIo, "cannot open config " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  ParseConfigText(ss.str(), cfg);
}

Dataset LoadTrainSet(const GlobalConfig& cfg) {
  if (!cfg.data_dir.empty()) return LoadDirectory(cfg.data_dir, cfg.crop, Split::kTrain);
  return GenerateDataset(cfg.GeneratorSpec(), cfg.gen_count, cfg.crop, Split::kTrain);
}

Dataset LoadValSet(const GlobalConfig& cfg) {
  if (!cfg.val_dir.empty()) return LoadDirectory(cfg.val_dir, cfg.crop, Split::kVal);
  ScSpec s = cfg.GeneratorSpec();
  s.seed += static_cast<uint64_t>(cfg.gen_count);
  return GenerateDataset(s, std::max(cfg.val_count, 1), cfg.crop, Split::kVal);
}

}  // namespace ssc
