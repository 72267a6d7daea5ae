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

// Forward and backward kernels for the layers the filter networks use. Every
// *Backward takes the forward inputs plus the output gradient and returns the
// input and parameter gradients.

#ifndef SSC_NN_OPS_H_
#define SSC_NN_OPS_H_

#include "ssc/tensor.h"

namespace ssc {

// Cross-correlation with zero "same" padding (k / 2) and square odd kernels.
// Output spatial size is ceil(H / stride).
Tensor Conv2d(const Tensor& x, const Tensor& w, const Tensor& b, int stride);

struct ConvGrads {
  Tensor dx;
  Tensor dw;
  Tensor db;
};
ConvGrads Conv2dBackward(const Tensor& x, const Tensor& w, const Tensor& dy,
                         int stride);

// Grouped conv with groups == channels; w is [C, 1, k, k].
Tensor DepthwiseConv2d(const Tensor& x, const Tensor& w, const Tensor& b,
                       int stride = 1);
ConvGrads DepthwiseConv2dBackward(const Tensor& x, const Tensor& w,
                                  const Tensor& dy, int stride = 1);

// out[n, c, y*r + dy, x*r + dx] = in[n, c*r*r + dy*r + dx, y, x]
Tensor PixelShuffle(const Tensor& x, int r);
// Exact inverse of PixelShuffle; also its backward.
Tensor PixelUnshuffle(const Tensor& x, int r);

// x * sigmoid(x)
Tensor Silu(const Tensor& x);
Tensor SiluBackward(const Tensor& x, const Tensor& dy);

// Reflect-pads H and W up to the next even size (no-op when already even).
Tensor ReflectPadToEven(const Tensor& x);
// Backward of ReflectPadToEven: folds padded gradient back onto the source.
Tensor ReflectPadToEvenBackward(const Tensor& dy, int h, int w);
Tensor CropTopLeft(const Tensor& x, int h, int w);

}  // namespace ssc

#endif  // SSC_NN_OPS_H_
