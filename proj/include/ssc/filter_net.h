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

// Residual pre/post filter network used on both sides of the codec.
//
//   x -> conv3x3/2 (3->C) -> MBConv x (L-1) -> MBConv unsqueezed (C->4C)
//     -> conv3x3 (4C->12) -> pixel shuffle r=2 -> + x
//
// MBConv: 1x1 expand C->4C, SiLU, depthwise 3x3, SiLU, 1x1 project 4C->C,
// skip. The last block stops after the depthwise stage.

#ifndef SSC_FILTER_NET_H_
#define SSC_FILTER_NET_H_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "ssc/tensor.h"

namespace ssc {

inline constexpr int kExpansion = 4;

struct ConvParams {
  Tensor w;
  Tensor b;
};

struct MbConvParams {
  ConvParams expand;
  ConvParams depthwise;
  ConvParams project;  // empty tensors when unsqueezed
  bool unsqueezed = false;
};

struct MbConvCache {
  Tensor x;
  Tensor expand_pre;
  Tensor expand_act;
  Tensor dw_pre;
  Tensor dw_act;
};

// Builds zero-valued parameters for a block of width |channels|.
MbConvParams MakeMbConv(int channels, bool unsqueezed);
Tensor MbConvForward(const Tensor& x, const MbConvParams& p,
                     MbConvCache* cache);
// Returns dx; parameter gradients are added into |grads| (same layout as p).
Tensor MbConvBackward(const MbConvCache& cache, const MbConvParams& p,
                      const Tensor& dy, MbConvParams* grads);

class FilterNet {
 public:
  struct Cache {
    int in_h = 0;
    int in_w = 0;
    Tensor padded;
    Tensor stem_out;
    std::vector<MbConvCache> blocks;
    Tensor head_in;
  };

  // All parameters zero: the network is exactly the identity map.
  FilterNet(int depth, int width);

  int depth() const { return depth_; }
  int width() const { return width_; }

  // Fan-in scaled uniform weights, zero biases, head scaled by 0.1. Values
  // are representable as float so checkpoints round-trip exactly.
  void Initialize(uint64_t seed);
  void ZeroBody();
  // True when the head is all zero, so Forward returns its input exactly.
  bool IsIdentity() const;

  // Parameter tensors in declaration order (the checkpoint order).
  std::vector<Tensor*> Parameters();
  std::vector<const Tensor*> Parameters() const;
  std::vector<std::string> ParameterNames() const;
  // Zero tensors shaped like Parameters().
  std::vector<Tensor> ZeroGrads() const;

  Tensor Forward(const Tensor& x, Cache* cache = nullptr) const;
  // Returns dL/dx and accumulates parameter gradients into |grads|.
  Tensor Backward(const Cache& cache, const Tensor& dy,
                  std::vector<Tensor>* grads) const;

  int64_t CountParams() const;
  // Multiply-accumulates per input pixel (biases and activations excluded).
  int64_t CountMacsPerPixel() const;

  bool operator==(const FilterNet& o) const;

 private:
  int depth_;
  int width_;
  ConvParams stem_;
  std::vector<MbConvParams> blocks_;
  ConvParams head_;
};

// Closed-form counts; equal to the FilterNet methods for the same shape.
int64_t CountFilterParams(int depth, int width);
int64_t CountFilterMacsPerPixel(int depth, int width);

// Checkpoint: "SNN1", u32 L, u32 C, u32 tensor count, then per tensor u32
// rank, u32 dims[rank], little-endian float32 values. Several nets of the
// same shape are stored back to back (CR before RS).
void SaveCheckpoint(const std::string& path,
                    std::span<const FilterNet* const> nets);
std::vector<FilterNet> LoadCheckpoint(const std::string& path);
std::vector<uint8_t> SerializeNets(std::span<const FilterNet* const> nets);
std::vector<FilterNet> DeserializeNets(std::span<const uint8_t> bytes);

}  // namespace ssc

#endif  // SSC_FILTER_NET_H_
