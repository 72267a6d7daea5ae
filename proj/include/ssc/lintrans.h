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

// Invertible (or approximately invertible) colour transforms applied around
// the codec: desaturation, PCA side-channel downscaling and PCA side-channel
// quantization.

#ifndef SSC_LINTRANS_H_
#define SSC_LINTRANS_H_

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "ssc/image.h"

namespace ssc {

using Vec3 = std::array<double, 3>;
using Mat3 = std::array<Vec3, 3>;

Mat3 Identity3();
Mat3 Transpose(const Mat3& m);
Mat3 Multiply(const Mat3& a, const Mat3& b);
Vec3 Multiply(const Mat3& m, const Vec3& v);

enum class TransformKind : uint8_t {
  kIdentity = 0,
  kDesaturate = 1,
  kPcaDownscale = 2,
  kPcaQuantize = 3,
};

const char* TransformKindName(TransformKind kind);
// Accepts "identity", "desaturate", "pca_downscale", "pca_quantize".
TransformKind ParseTransformKind(const std::string& name);

struct TransformSpec {
  TransformKind kind = TransformKind::kIdentity;
  double alpha = 1.0;
  double d_sc1 = 1.0;
  double d_sc2 = 1.0;
  int q_sc1 = 8;
  int q_sc2 = 8;

  // Throws kInvalidArgument when a parameter used by |kind| is out of range.
  void Validate() const;

  static TransformSpec Identity() { return {}; }
  static TransformSpec Desaturate(double alpha);
  static TransformSpec PcaDownscale(double d1, double d2);
  static TransformSpec PcaQuantize(int q1, int q2);
};

// Rows are the principal channel followed by the two side channels, ordered
// by decreasing variance.
struct PcaBasis {
  Vec3 mean{};
  Mat3 basis = Identity3();

  bool operator==(const PcaBasis&) const = default;
};

// Everything the decoder needs to undo the forward transform of one image.
struct SideInfo {
  TransformKind kind = TransformKind::kIdentity;
  double alpha = 1.0;
  PcaBasis pca;
  std::array<double, 2> divisors{1.0, 1.0};
  std::array<int, 2> q_bits{8, 8};
  std::array<std::vector<double>, 2> codebooks;

  bool operator==(const SideInfo&) const = default;
};

// Per-pixel matrix of x -> a x + (1 - a) Gray(x).
Mat3 InterpolateToGrayMatrix(double coefficient);

// a x + (1 - a) Gray(x), clamped. alpha in (0, 1].
ImageRGB Desaturate(const ImageRGB& img, double alpha);
// Same interpolation with coefficient 1 / alpha, clamped.
ImageRGB Resaturate(const ImageRGB& img, double alpha);

PcaBasis PcaFit(const ImageRGB& img);
std::array<Plane, 3> PcaForward(const PcaBasis& basis, const ImageRGB& img);
ImageRGB PcaInverse(const PcaBasis& basis, const std::array<Plane, 3>& planes);

// Separable Catmull-Rom resampling to ceil(H/d) x ceil(W/d).
Plane DownscaleBicubic(const Plane& plane, double divisor);
Plane UpscaleNearest(const Plane& plane, int target_h, int target_w);

struct KmeansResult {
  Plane plane;
  std::vector<double> codebook;
  // Mean squared distortion after initialisation and after every iteration.
  std::vector<double> distortion_trace;
};
KmeansResult KmeansQuantize(const Plane& plane, int q_bits);

// Moore-Penrose pseudoinverse through an SVD; singular values below
// 1e-10 * sigma_max are treated as zero.
Mat3 Pinv3(const Mat3& m);

struct ForwardResult {
  ImageRGB image;
  SideInfo info;
};
ForwardResult ApplyForward(const TransformSpec& spec, const ImageRGB& img);
ImageRGB ApplyInverse(const SideInfo& info, const ImageRGB& img);

// Payload fields of SideInfo (the framing lives in the sandwich header).
// Alpha is stored as floor(alpha * 2^15) in 16 bits.
std::vector<uint8_t> EncodeSideInfoPayload(const SideInfo& info);
SideInfo DecodeSideInfoPayload(TransformKind kind,
                               std::span<const uint8_t> bytes,
                               size_t* consumed);

inline constexpr double kAlphaFixedPointScale = 32768.0;
uint16_t AlphaToFixed(double alpha);
double AlphaFromFixed(uint16_t v);

}  // namespace ssc

#endif  // SSC_LINTRANS_H_
