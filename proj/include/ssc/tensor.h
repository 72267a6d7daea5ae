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

#ifndef SSC_TENSOR_H_
#define SSC_TENSOR_H_

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "ssc/image.h"

namespace ssc {

// Dense row-major tensor of doubles. Activations use NCHW; conv weights use
// [Cout, Cin, k, k]; biases are 1-D.
class Tensor {
 public:
  Tensor() = default;
  explicit Tensor(std::vector<int> shape, double fill = 0.0);

  static Tensor Like(const Tensor& t) { return Tensor(t.shape_); }

  const std::vector<int>& shape() const { return shape_; }
  int dim(int i) const { return shape_[static_cast<size_t>(i)]; }
  int rank() const { return static_cast<int>(shape_.size()); }
  size_t size() const { return data_.size(); }

  // NCHW accessors; valid for rank-4 tensors.
  int n() const { return shape_[0]; }
  int c() const { return shape_[1]; }
  int h() const { return shape_[2]; }
  int w() const { return shape_[3]; }
  size_t Offset(int n, int c, int y, int x) const {
    return ((static_cast<size_t>(n) * shape_[1] + c) * shape_[2] + y) *
               shape_[3] + x;
  }
  double& at(int n, int c, int y, int x) { return data_[Offset(n, c, y, x)]; }
  double at(int n, int c, int y, int x) const { return data_[Offset(n, c, y, x)]; }

  double& operator[](size_t i) { return data_[i]; }
  double operator[](size_t i) const { return data_[i]; }
  std::span<double> values() { return data_; }
  std::span<const double> values() const { return data_; }
  double* data() { return data_.data(); }
  const double* data() const { return data_.data(); }

  void Fill(double v);
  // this += scale * o (same shape).
  void AddScaled(const Tensor& o, double scale = 1.0);
  bool AllFinite() const;
  std::string ShapeString() const;

  bool operator==(const Tensor& o) const {
    return shape_ == o.shape_ && data_ == o.data_;
  }

 private:
  std::vector<int> shape_;
  std::vector<double> data_;
};

// (1, 3, H, W) view copies of images and back.
Tensor ImageToTensor(const ImageRGB& img);
Tensor ImagesToTensor(std::span<const ImageRGB> imgs);
ImageRGB TensorToImage(const Tensor& t, int index = 0);

void RequireShape(const Tensor& t, const std::vector<int>& shape,
                  const char* what);

}  // namespace ssc

#endif  // SSC_TENSOR_H_
