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

// Differentiable stand-in for a frozen learned codec.
//
// Pixels (0..255 scale) go through a fixed RGB -> YCbCr decorrelation, an
// orthonormal 8x8 block DCT per channel and a flat uniform quantizer with
// step quant_step * kFlatQuantWeight. Eval mode rounds and measures the
// zeroth-order entropy of each (channel, coefficient) band. Train mode keeps
// the same rounded reconstruction with an identity gradient, and estimates
// the rate from noisy coefficients under a per-band Laplacian fitted to the
// batch.

#ifndef SSC_PROXY_CODEC_H_
#define SSC_PROXY_CODEC_H_

#include <array>
#include <cstdint>
#include <vector>

#include "ssc/image.h"
#include "ssc/profiles.h"
#include "ssc/tensor.h"

namespace ssc {

inline constexpr int kBlock = 8;
inline constexpr int kBands = kBlock * kBlock;
// Flat quantization matrix entry applied on the 0..255 scale.
inline constexpr double kFlatQuantWeight = 16.0;
inline constexpr double kMinLaplaceScale = 1e-3;
inline constexpr double kMinLikelihood = 1e-12;

enum class CodecMode { kTrain, kEval };

struct CodecResult {
  ImageRGB reconstruction;
  double bits = 0.0;
  double bpp = 0.0;
};

class ProxyCodec {
 public:
  ProxyCodec();

  // Eval mode: hard quantization, empirical entropy.
  CodecResult Code(const ImageRGB& img, const CodecProfile& profile) const;
  // Either mode on a single image (train mode uses |noise_seed|).
  CodecResult Code(const ImageRGB& img, const CodecProfile& profile,
                   CodecMode mode, uint64_t noise_seed = 0) const;

  struct TrainCache {
    int n = 0, h = 0, w = 0, ph = 0, pw = 0;
    double step = 1.0;
    // d bits / d (noisy coefficient), laid out like the coefficients.
    std::vector<double> rate_grad;
    // round(y) - y for every scaled coefficient y.
    std::vector<double> round_offsets;
  };
  struct TrainOutput {
    Tensor reconstruction;  // [N,3,H,W]
    double rate_bits = 0.0;  // summed over the batch
  };
  // With |frozen_offsets| the distortion path uses y + offsets in place of
  // round(y): the surrogate whose exact gradient the straight-through
  // estimator returns.
  TrainOutput TrainForward(const Tensor& x, const CodecProfile& profile,
                           uint64_t noise_seed, TrainCache* cache,
                           const std::vector<double>* frozen_offsets = nullptr) const;
  // Gradient w.r.t. the input given d loss / d reconstruction and
  // d loss / d rate_bits.
  Tensor TrainBackward(const TrainCache& cache, const Tensor& d_recon,
                       double d_rate_bits) const;

  // FNV-1a over every table the codec uses. Nothing in the project mutates
  // these; trainers assert the checksum is unchanged.
  uint64_t StateChecksum() const;

  // Exposed for tests.
  const std::array<double, kBands>& dct_matrix() const { return dct_; }

 private:
  double Step(const CodecProfile& profile) const;
  // [N,3,H,W] in [0,1] -> coefficients / step, layout [n][c][block][band].
  std::vector<double> Analyze(const Tensor& padded, double step) const;
  // Inverse of Analyze (quantized symbols times step), result [N,3,PH,PW].
  Tensor Synthesize(const std::vector<double>& symbols, int n, int ph, int pw,
                    double step) const;
  Tensor AnalyzeTranspose(const std::vector<double>& dcoeff, int n, int ph,
                          int pw, double step) const;

  std::array<double, kBands> dct_{};  // row-major 8x8, orthonormal DCT-II
  std::array<double, 9> rgb_to_ycc_{};
  std::array<double, 9> ycc_to_rgb_{};
  std::array<double, kBands> qmatrix_{};
};

// Convenience for the op-level contract.
CodecResult ProxyCode(const ImageRGB& img, const CodecProfile& profile,
                      CodecMode mode, uint64_t noise_seed = 0);

// Reflect padding to multiples of |m| and its adjoint.
Tensor ReflectPadTo(const Tensor& x, int ph, int pw);
Tensor ReflectPadToBackward(const Tensor& dy, int h, int w);

}  // namespace ssc

#endif  // SSC_PROXY_CODEC_H_
