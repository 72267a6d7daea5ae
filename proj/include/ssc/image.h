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

#ifndef SSC_IMAGE_H_
#define SSC_IMAGE_H_

#include <array>
#include <cstddef>
#include <limits>
#include <span>
#include <string>
#include <vector>

namespace ssc {

// BT.601 luma weights used for every grayscale conversion in the project.
inline constexpr std::array<double, 3> kLumaWeights = {0.299, 0.587, 0.114};

// Real-valued plane, row-major.
struct Plane {
  int height = 0;
  int width = 0;
  std::vector<double> data;

  Plane() = default;
  Plane(int h, int w, double fill = 0.0)
      : height(h), width(w), data(static_cast<size_t>(h) * w, fill) {}

  double& at(int y, int x) { return data[static_cast<size_t>(y) * width + x]; }
  double at(int y, int x) const {
    return data[static_cast<size_t>(y) * width + x];
  }
};

// H x W x 3 image stored as three planar channels of values in [0,1].
class ImageRGB {
 public:
  ImageRGB() = default;
  // Throws kDimension for height or width < 2.
  ImageRGB(int height, int width, double fill = 0.0);

  int height() const { return height_; }
  int width() const { return width_; }
  size_t plane_size() const { return static_cast<size_t>(height_) * width_; }
  size_t num_samples() const { return 3 * plane_size(); }

  double& at(int c, int y, int x) {
    return data_[c * plane_size() + static_cast<size_t>(y) * width_ + x];
  }
  double at(int c, int y, int x) const {
    return data_[c * plane_size() + static_cast<size_t>(y) * width_ + x];
  }

  std::span<double> plane(int c) {
    return {data_.data() + c * plane_size(), plane_size()};
  }
  std::span<const double> plane(int c) const {
    return {data_.data() + c * plane_size(), plane_size()};
  }
  std::span<double> samples() { return data_; }
  std::span<const double> samples() const { return data_; }

  void Clamp();
  bool SameDims(const ImageRGB& o) const {
    return height_ == o.height_ && width_ == o.width_;
  }
  bool operator==(const ImageRGB& o) const {
    return SameDims(o) && data_ == o.data_;
  }

 private:
  int height_ = 0;
  int width_ = 0;
  std::vector<double> data_;
};

struct Metric {
  double mse = 0.0;
  double psnr_db = 0.0;
};

// Sentinel returned by Psnr for identical images.
inline constexpr double kInfinitePsnr = std::numeric_limits<double>::infinity();

ImageRGB ToGray3(const ImageRGB& img);

// size x size window whose top-left corner sits at
// ((H - size) / 2, (W - size) / 2).
ImageRGB CenterCrop(const ImageRGB& img, int size);

// Mean squared error on the 0..255 scale.
double Mse(const ImageRGB& a, const ImageRGB& b);
// 10 log10(255^2 / mse); kInfinitePsnr when mse == 0.
double Psnr(const ImageRGB& a, const ImageRGB& b);
double PsnrFromMse(double mse);
Metric Measure(const ImageRGB& a, const ImageRGB& b);

// 8-bit conversion helpers: v / 255 and clamp(round(255 v)).
inline double FromByte(unsigned char v) { return v / 255.0; }
unsigned char ToByte(double v);

// Number of distinct RGB triples, after 8-bit quantization.
size_t CountDistinctColors(const ImageRGB& img);

// --- I/O (image_io.cc) ---

// Binary P6 with maxval 255.
std::string EncodePpm(const ImageRGB& img);
ImageRGB DecodePpm(std::span<const unsigned char> bytes);
// Parses one PPM from the front of |bytes| and reports how many bytes it
// consumed. Used by the subprocess codec protocol.
ImageRGB DecodePpmPrefix(std::span<const unsigned char> bytes,
                         size_t* consumed);

void WritePng(const ImageRGB& img, const std::string& path);
ImageRGB ReadPng(const std::string& path);
void WritePpm(const ImageRGB& img, const std::string& path);
ImageRGB ReadPpm(const std::string& path);
// Dispatches on extension (.png / .ppm).
ImageRGB ReadImage(const std::string& path);
void WriteImage(const ImageRGB& img, const std::string& path);

std::vector<unsigned char> ReadFileBytes(const std::string& path);
void WriteFileBytes(const std::string& path, std::span<const unsigned char> b);

}  // namespace ssc

#endif  // SSC_IMAGE_H_
