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

#include "ssc/adam.h"

#include <cmath>

#include "ssc/status.h"

namespace ssc {

AdamState MakeAdamState(std::span<Tensor* const> params, AdamHyper hyper) {
  AdamState s;
  s.hyper = hyper;
  for (const Tensor* p : params) {
    s.m.push_back(Tensor::Like(*p));
    s.v.push_back(Tensor::Like(*p));
  }
  return s;
}

void AdamStep(std::span<Tensor* const> params, std::span<const Tensor> grads,
              AdamState* state) {
  if (params.size() != grads.size() || params.size() != state->m.size()) {
    Fail(ErrorCode::kDimension, "adam: parameter/gradient count mismatch");
  }
  const AdamHyper& h = state->hyper;
  ++state->step;
  const double c1 = 1.0 - std::pow(h.beta1, static_cast<double>(state->step));
  const double c2 = 1.0 - std::pow(h.beta2, static_cast<double>(state->step));
  for (size_t i = 0; i < params.size(); ++i) {
    Tensor& p = *params[i];
    const Tensor& g = grads[i];
    Tensor& m = state->m[i];
    Tensor& v = state->v[i];
    if (g.shape() != p.shape() || m.shape() != p.shape()) {
      Fail(ErrorCode::kDimension, "adam: shape mismatch for " + p.ShapeString());
    }
    for (size_t k = 0; k < p.size(); ++k) {
      m[k] = h.beta1 * m[k] + (1.0 - h.beta1) * g[k];
      v[k] = h.beta2 * v[k] + (1.0 - h.beta2) * g[k] * g[k];
      const double m_hat = m[k] / c1;
      const double v_hat = v[k] / c2;
      p[k] -= h.learning_rate * m_hat / (std::sqrt(v_hat) + h.epsilon);
    }
  }
}

}  // namespace ssc
