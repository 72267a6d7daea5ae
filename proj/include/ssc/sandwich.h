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

// The four modules around an unchanged codec:
//
//   encoder: T -> CR -> [codec] -> T^-1 -> RS :decoder
//
// Every module can be switched off through the header flags. With all flags
// clear nothing is signalled and the output is exactly the bare codec's.

#ifndef SSC_SANDWICH_H_
#define SSC_SANDWICH_H_

#include <cstdint>
#include <string>
#include <vector>

#include "ssc/filter_net.h"
#include "ssc/header.h"
#include "ssc/lintrans.h"
#include "ssc/profiles.h"
#include "ssc/proxy_codec.h"

namespace ssc {

enum class ModuleOrder { kTransformThenCr, kCrThenTransform };

struct SandwichConfig {
  TransformSpec transform;
  bool use_cr = false;
  bool use_rs = false;
  ModuleOrder order = ModuleOrder::kTransformThenCr;
  // Empty selects the built-in proxy codec; otherwise a command template for
  // the subprocess protocol.
  std::string external_codec;

  uint8_t Flags() const;
  bool IsBaseline() const { return Flags() == 0; }
};

struct EncodeResult {
  ImageRGB codec_input;
  SandwichHeader header;
};

// |cr| must be non-null iff cfg.use_cr.
EncodeResult SandwichEncode(const ImageRGB& img, const SandwichConfig& cfg,
                            const FilterNet* cr);
// |rs| must be non-null iff the header has RS on.
ImageRGB SandwichDecode(const ImageRGB& codec_output,
                        const SandwichHeader& header, const FilterNet* rs);

// Runs a single network on one image and clamps the result.
ImageRGB ApplyFilter(const FilterNet& net, const ImageRGB& img);

struct PipelineResult {
  ImageRGB reconstruction;
  double codec_bits = 0.0;
  double header_bits = 0.0;  // zero when all flags are clear
  double bpp = 0.0;          // (codec_bits + header_bits) / pixels
  SandwichHeader header;     // as signalled
};

// Codec used by the pipeline: the proxy unless cfg.external_codec is set.
CodecResult RunCodec(const ImageRGB& img, const SandwichConfig& cfg,
                     const CodecProfile& profile);

// |cfg| with every module that is exactly the identity switched off; such
// modules are not signalled.
SandwichConfig EffectiveConfig(const SandwichConfig& cfg, const FilterNet* cr,
                               const FilterNet* rs);

PipelineResult RunPipeline(const ImageRGB& img, const SandwichConfig& cfg,
                           const FilterNet* cr, const FilterNet* rs,
                           const CodecProfile& profile);

// --- training path ---

struct PassGradients {
  std::vector<Tensor> cr;
  std::vector<Tensor> rs;
};

struct TrainPassResult {
  Tensor reconstruction;
  double rate_bits = 0.0;
  double rate_bpp = 0.0;
  double mse = 0.0;  // 0..255 scale
  double loss = 0.0;  // rate_bpp + lambda * mse
  std::vector<double> round_offsets;  // see ProxyCodec::TrainForward
};

// Forward (and, when |grads| is non-null, backward) pass of the RD loss
// through the frozen proxy codec. Gradients are added into |grads|. Throws
// kUnsupported when cfg selects an external codec.
TrainPassResult E2eTrainPass(const Tensor& batch, const SandwichConfig& cfg,
                             const FilterNet* cr, const FilterNet* rs,
                             const ProxyCodec& codec,
                             const CodecProfile& profile, uint64_t noise_seed,
                             PassGradients* grads,
                             const std::vector<double>* frozen_offsets = nullptr);

// .ssc container: header (only when flags != 0) followed by a fixed
// descriptor of the codec payload.
struct PayloadDescriptor {
  uint8_t codec = 0;  // 0 proxy, 1 external
  uint8_t quality = 0;
  uint64_t codec_bits = 0;
  uint32_t height = 0;
  uint32_t width = 0;

  bool operator==(const PayloadDescriptor&) const = default;
};
std::vector<uint8_t> WriteContainer(const SandwichHeader& header,
                                    const PayloadDescriptor& payload);
void ReadContainer(std::span<const uint8_t> bytes, SandwichHeader* header,
                   PayloadDescriptor* payload);

}  // namespace ssc

#endif  // SSC_SANDWICH_H_
