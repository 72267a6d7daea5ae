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

#ifndef SSC_ADAM_H_
#define SSC_ADAM_H_

#include <cstdint>
#include <span>
#include <vector>

#include "ssc/tensor.h"

namespace ssc {

struct AdamHyper {
  double learning_rate = 1e-4;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

struct AdamState {
  AdamHyper hyper;
  int64_t step = 0;
  std::vector<Tensor> m;
  std::vector<Tensor> v;
};

AdamState MakeAdamState(std::span<Tensor* const> params, AdamHyper hyper = {});

// Bias-corrected Adam update, in place.
void AdamStep(std::span<Tensor* const> params, std::span<const Tensor> grads,
              AdamState* state);

}  // namespace ssc

#endif  // SSC_ADAM_H_
