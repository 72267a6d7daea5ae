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

#include "ssc/tensor.h"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "ssc/status.h"

namespace ssc {

Tensor::Tensor(std::vector<int> shape, double fill) : shape_(std::move(shape)) {
  size_t n = 1;
  for (int d : shape_) {
    if (d < 0) Fail(ErrorCode::kDimension, "negative tensor dimension");
    n *= static_cast<size_t>(d);
  }
  data_.assign(n, fill);
}

void Tensor::Fill(double v) { std::fill(data_.begin(), data_.end(), v); }

void Tensor::AddScaled(const Tensor& o, double scale) {
  if (o.shape_ != shape_) {
    Fail(ErrorCode::kDimension,
         "shape mismatch " + ShapeString() + " vs " + o.ShapeString());
  }
  for (size_t i = 0; i < data_.size(); ++i) data_[i] += scale * o.data_[i];
}

bool Tensor::AllFinite() const {
  return std::all_of(data_.begin(), data_.end(),
                     [](double v) { return std::isfinite(v); });
}

std::string Tensor::ShapeString() const {
  std::ostringstream os;
  os << "[";
  for (size_t i = 0; i < shape_.size(); ++i) os << (i ? "," : "") << shape_[i];
  os << "]";
  return os.str();
}

Tensor ImageToTensor(const ImageRGB& img) {
  Tensor t({1, 3, img.height(), img.width()});
  std::copy(img.samples().begin(), img.samples().end(), t.data());
  return t;
}

Tensor ImagesToTensor(std::span<const ImageRGB> imgs) {
  if (imgs.empty()) Fail(ErrorCode::kEmpty, "empty image batch");
  const int h = imgs[0].height(), w = imgs[0].width();
  Tensor t({static_cast<int>(imgs.size()), 3, h, w});
  for (size_t i = 0; i < imgs.size(); ++i) {
    if (imgs[i].height() != h || imgs[i].width() != w) {
      Fail(ErrorCode::kDimension, "batch images differ in size");
    }
    std::copy(imgs[i].samples().begin(), imgs[i].samples().end(),
              t.data() + t.Offset(static_cast<int>(i), 0, 0, 0));
  }
  return t;
}

ImageRGB TensorToImage(const Tensor& t, int index) {
  if (t.rank() != 4 || t.c() != 3) {
    Fail(ErrorCode::kDimension, "expected [N,3,H,W], got " + t.ShapeString());
  }
  ImageRGB img(t.h(), t.w());
  const double* src = t.data() + t.Offset(index, 0, 0, 0);
  std::copy(src, src + img.num_samples(), img.samples().begin());
  return img;
}

void RequireShape(const Tensor& t, const std::vector<int>& shape,
                  const char* what) {
  if (t.shape() != shape) {
    Tensor expect(shape);
    Fail(ErrorCode::kDimension, std::string(what) + ": expected " +
                                    expect.ShapeString() + ", got " +
                                    t.ShapeString());
  }
}

}  // namespace ssc
