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

#include "ssc/nn_ops.h"

#include <algorithm>
#include <cmath>

#include "ssc/status.h"

namespace ssc {
namespace {

int OutSize(int in, int stride) { return (in + stride - 1) / stride; }

// Range of output positions o for which o * stride + k - pad is inside
// [0, in).
void ValidRange(int in, int out, int stride, int k, int pad, int* lo, int* hi) {
  // o * stride >= pad - k
  int l = pad - k <= 0 ? 0 : (pad - k + stride - 1) / stride;
  // o * stride <= in - 1 + pad - k
  const int num = in - 1 + pad - k;
  int h = num < 0 ? -1 : num / stride;
  *lo = std::max(0, l);
  *hi = std::min(out - 1, h);
}

void CheckConvShapes(const Tensor& x, const Tensor& w, int stride,
                     bool depthwise) {
  if (x.rank() != 4 || w.rank() != 4) {
    Fail(ErrorCode::kDimension, "conv expects rank-4 input and weights");
  }
  if (w.dim(2) != w.dim(3) || w.dim(2) % 2 == 0) {
    Fail(ErrorCode::kDimension, "conv kernel must be square and odd");
  }
  if (stride < 1) Fail(ErrorCode::kInvalidArgument, "stride must be >= 1");
  if (depthwise) {
    if (w.dim(0) != x.c() || w.dim(1) != 1) {
      Fail(ErrorCode::kDimension, "depthwise weights " + w.ShapeString() +
                                      " do not match input " + x.ShapeString());
    }
  } else if (w.dim(1) != x.c()) {
    Fail(ErrorCode::kDimension, "conv weights " + w.ShapeString() +
                                    " do not match input " + x.ShapeString());
  }
}

}  // namespace

Tensor Conv2d(const Tensor& x, const Tensor& w, const Tensor& b, int stride) {
  CheckConvShapes(x, w, stride, false);
  const int cout = w.dim(0), cin = w.dim(1), k = w.dim(2), pad = k / 2;
  RequireShape(b, {cout}, "conv bias");
  const int oh = OutSize(x.h(), stride), ow = OutSize(x.w(), stride);
  Tensor y({x.n(), cout, oh, ow});
  for (int n = 0; n < x.n(); ++n) {
    for (int oc = 0; oc < cout; ++oc) {
      double* yp = y.data() + y.Offset(n, oc, 0, 0);
      std::fill(yp, yp + static_cast<size_t>(oh) * ow, b[oc]);
      for (int ic = 0; ic < cin; ++ic) {
        const double* xp = x.data() + x.Offset(n, ic, 0, 0);
        for (int ky = 0; ky < k; ++ky) {
          int oy0, oy1;
          ValidRange(x.h(), oh, stride, ky, pad, &oy0, &oy1);
          for (int kx = 0; kx < k; ++kx) {
            const double wv = w.at(oc, ic, ky, kx);
            int ox0, ox1;
            ValidRange(x.w(), ow, stride, kx, pad, &ox0, &ox1);
            for (int oy = oy0; oy <= oy1; ++oy) {
              const double* xr = xp + static_cast<size_t>(oy * stride + ky - pad) * x.w();
              double* yr = yp + static_cast<size_t>(oy) * ow;
              for (int ox = ox0; ox <= ox1; ++ox) {
                yr[ox] += wv * xr[ox * stride + kx - pad];
              }
            }
          }
        }
      }
    }
  }
  return y;
}

ConvGrads Conv2dBackward(const Tensor& x, const Tensor& w, const Tensor& dy,
                         int stride) {
  CheckConvShapes(x, w, stride, false);
  const int cout = w.dim(0), cin = w.dim(1), k = w.dim(2), pad = k / 2;
  const int oh = OutSize(x.h(), stride), ow = OutSize(x.w(), stride);
  RequireShape(dy, {x.n(), cout, oh, ow}, "conv output gradient");
  ConvGrads g{Tensor::Like(x), Tensor::Like(w), Tensor({cout})};
  for (int n = 0; n < x.n(); ++n) {
    for (int oc = 0; oc < cout; ++oc) {
      const double* gp = dy.data() + dy.Offset(n, oc, 0, 0);
      double bsum = 0.0;
      for (size_t i = 0; i < static_cast<size_t>(oh) * ow; ++i) bsum += gp[i];
      g.db[oc] += bsum;
      for (int ic = 0; ic < cin; ++ic) {
        const double* xp = x.data() + x.Offset(n, ic, 0, 0);
        double* dxp = g.dx.data() + g.dx.Offset(n, ic, 0, 0);
        for (int ky = 0; ky < k; ++ky) {
          int oy0, oy1;
          ValidRange(x.h(), oh, stride, ky, pad, &oy0, &oy1);
          for (int kx = 0; kx < k; ++kx) {
            const double wv = w.at(oc, ic, ky, kx);
            int ox0, ox1;
            ValidRange(x.w(), ow, stride, kx, pad, &ox0, &ox1);
            double wsum = 0.0;
            for (int oy = oy0; oy <= oy1; ++oy) {
              const size_t row = static_cast<size_t>(oy * stride + ky - pad) * x.w();
              const double* gr = gp + static_cast<size_t>(oy) * ow;
              for (int ox = ox0; ox <= ox1; ++ox) {
                const size_t xi = row + ox * stride + kx - pad;
                wsum += gr[ox] * xp[xi];
                dxp[xi] += gr[ox] * wv;
              }
            }
            g.dw.at(oc, ic, ky, kx) += wsum;
          }
        }
      }
    }
  }
  return g;
}

Tensor DepthwiseConv2d(const Tensor& x, const Tensor& w, const Tensor& b,
                       int stride) {
  CheckConvShapes(x, w, stride, true);
  const int ch = x.c(), k = w.dim(2), pad = k / 2;
  RequireShape(b, {ch}, "depthwise bias");
  const int oh = OutSize(x.h(), stride), ow = OutSize(x.w(), stride);
  Tensor y({x.n(), ch, oh, ow});
  for (int n = 0; n < x.n(); ++n) {
    for (int c = 0; c < ch; ++c) {
      double* yp = y.data() + y.Offset(n, c, 0, 0);
      std::fill(yp, yp + static_cast<size_t>(oh) * ow, b[c]);
      const double* xp = x.data() + x.Offset(n, c, 0, 0);
      for (int ky = 0; ky < k; ++ky) {
        int oy0, oy1;
        ValidRange(x.h(), oh, stride, ky, pad, &oy0, &oy1);
        for (int kx = 0; kx < k; ++kx) {
          const double wv = w.at(c, 0, ky, kx);
          int ox0, ox1;
          ValidRange(x.w(), ow, stride, kx, pad, &ox0, &ox1);
          for (int oy = oy0; oy <= oy1; ++oy) {
            const double* xr = xp + static_cast<size_t>(oy * stride + ky - pad) * x.w();
            double* yr = yp + static_cast<size_t>(oy) * ow;
            for (int ox = ox0; ox <= ox1; ++ox) yr[ox] += wv * xr[ox * stride + kx - pad];
          }
        }
      }
    }
  }
  return y;
}

ConvGrads DepthwiseConv2dBackward(const Tensor& x, const Tensor& w,
                                  const Tensor& dy, int stride) {
  CheckConvShapes(x, w, stride, true);
  const int ch = x.c(), k = w.dim(2), pad = k / 2;
  const int oh = OutSize(x.h(), stride), ow = OutSize(x.w(), stride);
  RequireShape(dy, {x.n(), ch, oh, ow}, "depthwise output gradient");
  ConvGrads g{Tensor::Like(x), Tensor::Like(w), Tensor({ch})};
  for (int n = 0; n < x.n(); ++n) {
    for (int c = 0; c < ch; ++c) {
      const double* gp = dy.data() + dy.Offset(n, c, 0, 0);
      const double* xp = x.data() + x.Offset(n, c, 0, 0);
      double* dxp = g.dx.data() + g.dx.Offset(n, c, 0, 0);
      double bsum = 0.0;
      for (size_t i = 0; i < static_cast<size_t>(oh) * ow; ++i) bsum += gp[i];
      g.db[c] += bsum;
      for (int ky = 0; ky < k; ++ky) {
        int oy0, oy1;
        ValidRange(x.h(), oh, stride, ky, pad, &oy0, &oy1);
        for (int kx = 0; kx < k; ++kx) {
          const double wv = w.at(c, 0, ky, kx);
          int ox0, ox1;
          ValidRange(x.w(), ow, stride, kx, pad, &ox0, &ox1);
          double wsum = 0.0;
          for (int oy = oy0; oy <= oy1; ++oy) {
            const size_t row = static_cast<size_t>(oy * stride + ky - pad) * x.w();
            const double* gr = gp + static_cast<size_t>(oy) * ow;
            for (int ox = ox0; ox <= ox1; ++ox) {
              const size_t xi = row + ox * stride + kx - pad;
              wsum += gr[ox] * xp[xi];
              dxp[xi] += gr[ox] * wv;
            }
          }
          g.dw.at(c, 0, ky, kx) += wsum;
        }
      }
    }
  }
  return g;
}

Tensor PixelShuffle(const Tensor& x, int r) {
  if (x.rank() != 4 || r < 1 || x.c() % (r * r) != 0) {
    Fail(ErrorCode::kDimension, "pixel shuffle: channels " + x.ShapeString() +
                                    " not divisible by r^2");
  }
  const int oc = x.c() / (r * r);
  Tensor y({x.n(), oc, x.h() * r, x.w() * r});
  for (int n = 0; n < x.n(); ++n)
    for (int c = 0; c < oc; ++c)
      for (int dy = 0; dy < r; ++dy)
        for (int dx = 0; dx < r; ++dx) {
          const int ic = c * r * r + dy * r + dx;
          for (int yy = 0; yy < x.h(); ++yy)
            for (int xx = 0; xx < x.w(); ++xx)
              y.at(n, c, yy * r + dy, xx * r + dx) = x.at(n, ic, yy, xx);
        }
  return y;
}

Tensor PixelUnshuffle(const Tensor& x, int r) {
  if (x.rank() != 4 || r < 1 || x.h() % r != 0 || x.w() % r != 0) {
    Fail(ErrorCode::kDimension, "pixel unshuffle: spatial dims " +
                                    x.ShapeString() + " not divisible by r");
  }
  Tensor y({x.n(), x.c() * r * r, x.h() / r, x.w() / r});
  for (int n = 0; n < x.n(); ++n)
    for (int c = 0; c < x.c(); ++c)
      for (int dy = 0; dy < r; ++dy)
        for (int dx = 0; dx < r; ++dx) {
          const int oc = c * r * r + dy * r + dx;
          for (int yy = 0; yy < y.h(); ++yy)
            for (int xx = 0; xx < y.w(); ++xx)
              y.at(n, oc, yy, xx) = x.at(n, c, yy * r + dy, xx * r + dx);
        }
  return y;
}

Tensor Silu(const Tensor& x) {
  Tensor y = Tensor::Like(x);
  for (size_t i = 0; i < x.size(); ++i) y[i] = x[i] / (1.0 + std::exp(-x[i]));
  return y;
}

Tensor SiluBackward(const Tensor& x, const Tensor& dy) {
  Tensor dx = Tensor::Like(x);
  for (size_t i = 0; i < x.size(); ++i) {
    const double s = 1.0 / (1.0 + std::exp(-x[i]));
    dx[i] = dy[i] * s * (1.0 + x[i] * (1.0 - s));
  }
  return dx;
}

namespace {
int Reflect(int i, int n) {
  if (n == 1) return 0;
  while (i < 0 || i >= n) i = i < 0 ? -i : 2 * (n - 1) - i;
  return i;
}
}  // namespace

Tensor ReflectPadToEven(const Tensor& x) {
  const int h = x.h() + x.h() % 2, w = x.w() + x.w() % 2;
  if (h == x.h() && w == x.w()) return x;
  Tensor y({x.n(), x.c(), h, w});
  for (int n = 0; n < x.n(); ++n)
    for (int c = 0; c < x.c(); ++c)
      for (int yy = 0; yy < h; ++yy)
        for (int xx = 0; xx < w; ++xx)
          y.at(n, c, yy, xx) = x.at(n, c, Reflect(yy, x.h()), Reflect(xx, x.w()));
  return y;
}

Tensor ReflectPadToEvenBackward(const Tensor& dy, int h, int w) {
  if (dy.h() == h && dy.w() == w) return dy;
  Tensor dx({dy.n(), dy.c(), h, w});
  for (int n = 0; n < dy.n(); ++n)
    for (int c = 0; c < dy.c(); ++c)
      for (int yy = 0; yy < dy.h(); ++yy)
        for (int xx = 0; xx < dy.w(); ++xx)
          dx.at(n, c, Reflect(yy, h), Reflect(xx, w)) += dy.at(n, c, yy, xx);
  return dx;
}

Tensor CropTopLeft(const Tensor& x, int h, int w) {
  if (x.h() == h && x.w() == w) return x;
  Tensor y({x.n(), x.c(), h, w});
  for (int n = 0; n < x.n(); ++n)
    for (int c = 0; c < x.c(); ++c)
      for (int yy = 0; yy < h; ++yy)
        for (int xx = 0; xx < w; ++xx) y.at(n, c, yy, xx) = x.at(n, c, yy, xx);
  return y;
}

}  // namespace ssc
