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

#include "ssc/image.h"

#include <algorithm>
#include <cmath>
#include <set>
#include <tuple>

#include "ssc/status.h"

namespace ssc {

const char* ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "invalid argument";
    case ErrorCode::kDimension: return "dimension error";
    case ErrorCode::kIo: return "i/o error";
    case ErrorCode::kFormat: return "format error";
    case ErrorCode::kVersion: return "version error";
    case ErrorCode::kProtocol: return "protocol error";
    case ErrorCode::kUnsupported: return "unsupported configuration";
    case ErrorCode::kDivergence: return "divergence";
    case ErrorCode::kEmpty: return "empty result";
  }
  return "error";
}

ImageRGB::ImageRGB(int height, int width, double fill)
    : height_(height), width_(width) {
  if (height < 2 || width < 2) {
    Fail(ErrorCode::kDimension, "image must be at least 2x2, got " +
                                    std::to_string(height) + "x" +
                                    std::to_string(width));
  }
  data_.assign(3 * plane_size(), fill);
}

void ImageRGB::Clamp() {
  for (double& v : data_) v = std::clamp(v, 0.0, 1.0);
}

ImageRGB ToGray3(const ImageRGB& img) {
  ImageRGB out(img.height(), img.width());
  const auto r = img.plane(0), g = img.plane(1), b = img.plane(2);
  auto o0 = out.plane(0), o1 = out.plane(1), o2 = out.plane(2);
  for (size_t i = 0; i < img.plane_size(); ++i) {
    const double y = kLumaWeights[0] * r[i] + kLumaWeights[1] * g[i] +
                     kLumaWeights[2] * b[i];
    o0[i] = o1[i] = o2[i] = y;
  }
  return out;
}

ImageRGB CenterCrop(const ImageRGB& img, int size) {
  if (size < 2 || size > img.height() || size > img.width()) {
    Fail(ErrorCode::kDimension,
         "crop size " + std::to_string(size) + " does not fit " +
             std::to_string(img.height()) + "x" + std::to_string(img.width()));
  }
  const int oy = (img.height() - size) / 2;
  const int ox = (img.width() - size) / 2;
  ImageRGB out(size, size);
  for (int c = 0; c < 3; ++c) {
    for (int y = 0; y < size; ++y) {
      for (int x = 0; x < size; ++x) out.at(c, y, x) = img.at(c, oy + y, ox + x);
    }
  }
  return out;
}

double Mse(const ImageRGB& a, const ImageRGB& b) {
  if (!a.SameDims(b)) Fail(ErrorCode::kDimension, "mse: dimension mismatch");
  const auto sa = a.samples(), sb = b.samples();
  double sum = 0.0;
  for (size_t i = 0; i < sa.size(); ++i) {
    const double d = 255.0 * (sa[i] - sb[i]);
    sum += d * d;
  }
  return sum / static_cast<double>(sa.size());
}

double PsnrFromMse(double mse) {
  if (mse <= 0.0) return kInfinitePsnr;
  return 10.0 * std::log10(255.0 * 255.0 / mse);
}

double Psnr(const ImageRGB& a, const ImageRGB& b) {
  return PsnrFromMse(Mse(a, b));
}

Metric Measure(const ImageRGB& a, const ImageRGB& b) {
  const double m = Mse(a, b);
  return {m, PsnrFromMse(m)};
}

unsigned char ToByte(double v) {
  const double s = std::round(255.0 * std::clamp(v, 0.0, 1.0));
  return static_cast<unsigned char>(s);
}

size_t CountDistinctColors(const ImageRGB& img) {
  std::set<std::tuple<int, int, int>> colors;
  for (int y = 0; y < img.height(); ++y) {
    for (int x = 0; x < img.width(); ++x) {
      colors.emplace(ToByte(img.at(0, y, x)), ToByte(img.at(1, y, x)),
                     ToByte(img.at(2, y, x)));
    }
  }
  return colors.size();
}

}  // namespace ssc
